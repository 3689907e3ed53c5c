# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``.

Same algorithms, same tie-breaks: the canonical code of a graph must come
out identical from either backend.  Adjacency rows are one 64-bit word.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memcpy

cdef extern from *:
    """
    #include <stdint.h>
    static inline int qs_popcount(uint64_t x) { return __builtin_popcountll(x); }
    static inline int qs_ctz(uint64_t x) { return __builtin_ctzll(x); }

    #define QS_CP_MAXN 32

    /* Faddeev-LeVerrier in 128-bit arithmetic with overflow detection.
       m is row-major n*n, out receives n+1 coefficients, constant first.
       Returns 0 on success, 1 on overflow or a coefficient outside int64. */
    static int qs_charpoly(int n, const int64_t *m, int64_t *out) {
        __int128 am[QS_CP_MAXN * QS_CP_MAXN], mk[QS_CP_MAXN * QS_CP_MAXN];
        int i, j, l, k;
        if (n > QS_CP_MAXN) return 1;
        out[n] = 1;
        for (i = 0; i < n * n; i++) am[i] = m[i];
        for (k = 1; k <= n; k++) {
            __int128 tr = 0, c;
            for (i = 0; i < n; i++)
                if (__builtin_add_overflow(tr, am[i * n + i], &tr)) return 1;
            if (tr % k) return 1;
            c = -(tr / k);
            if (c > INT64_MAX || c < INT64_MIN) return 1;
            out[n - k] = (int64_t)c;
            if (k == n) break;
            for (i = 0; i < n * n; i++) mk[i] = am[i];
            for (i = 0; i < n; i++)
                if (__builtin_add_overflow(mk[i * n + i], c, &mk[i * n + i])) return 1;
            for (i = 0; i < n; i++) {
                for (j = 0; j < n; j++) {
                    __int128 acc = 0, t;
                    for (l = 0; l < n; l++) {
                        int64_t a = m[i * n + l];
                        if (!a) continue;
                        if (__builtin_mul_overflow((__int128)a, mk[l * n + j], &t)) return 1;
                        if (__builtin_add_overflow(acc, t, &acc)) return 1;
                    }
                    am[i * n + j] = acc;
                }
            }
        }
        return 0;
    }
    """
    int qs_popcount(uint64_t x) nogil
    int qs_ctz(uint64_t x) nogil
    int qs_charpoly(int n, const int64_t *m, int64_t *out) nogil
    int QS_CP_MAXN

from . import _pykernels

cdef enum:
    MAXN = 64
    MAX_AUTOMORPHISMS = 64
    INV_SCALE = 8192


cdef struct Search:
    int n
    const uint64_t *adj
    int have_first
    int first_lab[MAXN]
    int best_lab[MAXN]
    uint64_t first_rows[MAXN]
    uint64_t best_rows[MAXN]
    int nauto
    signed char autos[MAX_AUTOMORPHISMS][MAXN]


cdef int refine(const uint64_t *adj, uint64_t *cells, int ncells) noexcept nogil:
    cdef uint64_t out[MAXN]
    cdef uint64_t bucket[MAXN + 1]
    cdef int count[MAXN]
    cdef uint64_t splitter, cell, c, low
    cdef int s = 0, nout, split, ci, v, k, kmin, kmax
    while s < ncells:
        splitter = cells[s]
        nout = 0
        split = 0
        for ci in range(ncells):
            cell = cells[ci]
            if (cell & (cell - 1)) == 0:
                out[nout] = cell
                nout += 1
                continue
            kmin = MAXN + 1
            kmax = -1
            c = cell
            while c:
                v = qs_ctz(c)
                c &= c - 1
                k = qs_popcount(adj[v] & splitter)
                count[v] = k
                if k < kmin:
                    kmin = k
                if k > kmax:
                    kmax = k
            if kmin == kmax:
                out[nout] = cell
                nout += 1
                continue
            split = 1
            for k in range(kmin, kmax + 1):
                bucket[k] = 0
            c = cell
            while c:
                v = qs_ctz(c)
                c &= c - 1
                bucket[count[v]] |= (<uint64_t>1) << v
            for k in range(kmin, kmax + 1):
                if bucket[k]:
                    out[nout] = bucket[k]
                    nout += 1
        memcpy(cells, out, nout * sizeof(uint64_t))
        ncells = nout
        if split:
            s = 0
        else:
            s += 1
    return ncells


cdef int compare_rows(const uint64_t *a, const uint64_t *b, int n) noexcept nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return 1 if a[i] > b[i] else -1
    return 0


cdef void add_auto(Search *S, const int *lab_a, const int *lab_b) noexcept nogil:
    cdef int i
    if S.nauto >= MAX_AUTOMORPHISMS:
        return
    for i in range(S.n):
        S.autos[S.nauto][lab_a[i]] = <signed char>lab_b[i]
    S.nauto += 1


cdef void leaf(Search *S, const uint64_t *cells) noexcept nogil:
    cdef int lab[MAXN]
    cdef int pos[MAXN]
    cdef uint64_t rows[MAXN]
    cdef uint64_t a, r
    cdef int i, n = S.n, cmp
    for i in range(n):
        lab[i] = qs_ctz(cells[i])
        pos[lab[i]] = i
    for i in range(n):
        a = S.adj[lab[i]]
        r = 0
        while a:
            r |= (<uint64_t>1) << pos[qs_ctz(a)]
            a &= a - 1
        rows[i] = r
    if not S.have_first:
        S.have_first = 1
        memcpy(S.first_lab, lab, n * sizeof(int))
        memcpy(S.best_lab, lab, n * sizeof(int))
        memcpy(S.first_rows, rows, n * sizeof(uint64_t))
        memcpy(S.best_rows, rows, n * sizeof(uint64_t))
        return
    if compare_rows(rows, S.first_rows, n) == 0:
        add_auto(S, S.first_lab, lab)
        return
    cmp = compare_rows(rows, S.best_rows, n)
    if cmp > 0:
        memcpy(S.best_lab, lab, n * sizeof(int))
        memcpy(S.best_rows, rows, n * sizeof(uint64_t))
    elif cmp == 0:
        add_auto(S, S.best_lab, lab)


cdef int uf_find(int *parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef bint same_orbit(Search *S, int v, uint64_t explored, const int *path, int depth) noexcept nogil:
    cdef int parent[MAXN]
    cdef int i, j, a, b, rv, n = S.n
    cdef bint fixes
    for i in range(n):
        parent[i] = i
    for j in range(S.nauto):
        fixes = True
        for i in range(depth):
            if S.autos[j][path[i]] != path[i]:
                fixes = False
                break
        if not fixes:
            continue
        for i in range(n):
            a = uf_find(parent, i)
            b = uf_find(parent, S.autos[j][i])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    rv = uf_find(parent, v)
    while explored:
        if uf_find(parent, qs_ctz(explored)) == rv:
            return True
        explored &= explored - 1
    return False


cdef void search(Search *S, const uint64_t *cells, int ncells, int *path, int depth) noexcept nogil:
    cdef uint64_t child[MAXN]
    cdef uint64_t target, rem, low, explored = 0
    cdef int t, v, nchild
    if ncells == S.n:
        leaf(S, cells)
        return
    t = 0
    while (cells[t] & (cells[t] - 1)) == 0:
        t += 1
    target = cells[t]
    rem = target
    while rem:
        low = rem & (~rem + 1)
        rem ^= low
        v = qs_ctz(low)
        if explored and same_orbit(S, v, explored, path, depth):
            continue
        explored |= low
        memcpy(child, cells, t * sizeof(uint64_t))
        child[t] = low
        child[t + 1] = target ^ low
        memcpy(child + t + 2, cells + t + 1, (ncells - t - 1) * sizeof(uint64_t))
        nchild = refine(S.adj, child, ncells + 1)
        path[depth] = v
        search(S, child, nchild, path, depth + 1)


cdef void canon(int n, const uint64_t *adj, Search *S) noexcept nogil:
    cdef uint64_t cells[MAXN]
    cdef int path[MAXN]
    cdef int ncells
    S.n = n
    S.adj = adj
    S.have_first = 0
    S.nauto = 0
    if n == 0:
        return
    cells[0] = (<uint64_t>-1) if n == 64 else (((<uint64_t>1) << n) - 1)
    ncells = refine(adj, cells, 1)
    search(S, cells, ncells, path, 0)


cdef bytes rows_bytes(int n, const uint64_t *rows):
    cdef int w = (n + 7) // 8
    cdef bytearray out = bytearray(1 + n * w)
    cdef int i, b
    cdef uint64_t r
    out[0] = n
    for i in range(n):
        r = rows[i]
        for b in range(w):
            out[1 + i * w + (w - 1 - b)] = (r >> (8 * b)) & 0xFF
    return bytes(out)


cdef int load_code(bytes code, uint64_t *rows) except -1:
    cdef const unsigned char[:] data = code
    cdef int n = data[0]
    cdef int w = (n + 7) // 8
    cdef int i, b
    cdef uint64_t r
    if n > MAXN or len(code) != 1 + n * w:
        raise ValueError("malformed canonical code")
    for i in range(n):
        r = 0
        for b in range(w):
            r = (r << 8) | data[1 + i * w + b]
        rows[i] = r
    return n


cdef Search _S
cdef Search _S2


def canonical_form(int n, adj):
    """Same contract as ``_pykernels.canonical_form``."""
    cdef uint64_t rows[MAXN]
    cdef int i
    if n > MAXN:
        raise ValueError("order exceeds compiled kernel limit")
    for i in range(n):
        rows[i] = adj[i]
    with nogil:
        canon(n, rows, &_S)
    return [_S.best_lab[i] for i in range(n)], tuple([_S.best_rows[i] for i in range(n)])


def canonical_code(int n, adj):
    cdef uint64_t rows[MAXN]
    cdef int i
    if n > MAXN:
        raise ValueError("order exceeds compiled kernel limit")
    for i in range(n):
        rows[i] = adj[i]
    with nogil:
        canon(n, rows, &_S)
    return rows_bytes(n, _S.best_rows)


cdef bint accept_candidate(int n, const uint64_t *adj, const uint64_t *parent_rows) noexcept nogil:
    """adj has n+1 vertices, vertex n new; leaves the child's canonical form in _S."""
    cdef int big = n + 1
    cdef int deg[MAXN]
    cdef int inv[MAXN]
    cdef uint64_t reduced[MAXN]
    cdef uint64_t a, low_mask, r
    cdef int v, u, tot, top = -1, ties = 0, star = -1, i
    for v in range(big):
        deg[v] = qs_popcount(adj[v])
    for v in range(big):
        a = adj[v]
        tot = 0
        while a:
            tot += deg[qs_ctz(a)]
            a &= a - 1
        inv[v] = deg[v] * INV_SCALE + tot
        if inv[v] > top:
            top = inv[v]
            ties = 1
        elif inv[v] == top:
            ties += 1
    if inv[n] != top:
        return False
    canon(big, adj, &_S)
    if ties == 1:
        return True
    i = big - 1
    while i >= 0:
        if inv[_S.best_lab[i]] == top:
            star = _S.best_lab[i]
            break
        i -= 1
    if star == n:
        return True
    low_mask = ((<uint64_t>1) << star) - 1
    u = 0
    for v in range(big):
        if v == star:
            continue
        r = adj[v]
        reduced[u] = (r & low_mask) | ((r >> (star + 1)) << star)
        u += 1
    canon(n, reduced, &_S2)
    return compare_rows(_S2.best_rows, parent_rows, n) == 0


def extend_code(bytes code):
    """Same contract as ``_pykernels.extend_code``."""
    cdef uint64_t rows[MAXN]
    cdef uint64_t adj[MAXN]
    cdef int n = load_code(code, rows)
    cdef uint64_t mask, new_bit, nmask
    cdef int i
    cdef bint ok
    if n + 1 > MAXN:
        raise ValueError("order exceeds compiled kernel limit")
    if n >= 32:
        raise ValueError("extension over more than 2**32 subsets is not supported")
    children = set()
    new_bit = (<uint64_t>1) << n
    nmask = (<uint64_t>1) << n
    mask = 0
    while mask < nmask:
        for i in range(n):
            adj[i] = rows[i] | (new_bit if (mask >> i) & 1 else 0)
        adj[n] = mask
        with nogil:
            ok = accept_candidate(n, adj, rows)
        if ok:
            children.add(rows_bytes(n + 1, _S.best_rows))
        mask += 1
    return sorted(children)


cdef int fill_graph_matrix(int n, const uint64_t *adj, int kind, int64_t *mat) noexcept nogil:
    # kind: 0 = A, 1 = L, 2 = Q
    cdef int i, j
    cdef int64_t off = -1 if kind == 1 else 1
    for i in range(n):
        for j in range(n):
            mat[i * n + j] = off if (adj[i] >> j) & 1 else 0
        if kind != 0:
            mat[i * n + i] = qs_popcount(adj[i])
    return 0


cdef int _kind_index(str kind) except -1:
    if kind == "A":
        return 0
    if kind == "L":
        return 1
    if kind == "Q":
        return 2
    raise ValueError(f"unknown matrix kind {kind!r}")


def charpoly(matrix):
    """Same contract as ``_pykernels.charpoly``; falls back to Python integers on overflow."""
    cdef int n = len(matrix)
    cdef int64_t mat[32 * 32]
    cdef int64_t out[33]
    cdef int i, j, status
    if n > QS_CP_MAXN:
        return _pykernels.charpoly(matrix)
    for i in range(n):
        row = matrix[i]
        for j in range(n):
            x = row[j]
            if not -(1 << 62) < x < (1 << 62):
                return _pykernels.charpoly(matrix)
            mat[i * n + j] = x
    with nogil:
        status = qs_charpoly(n, mat, out)
    if status:
        return _pykernels.charpoly(matrix)
    return [out[i] for i in range(n + 1)]


def charpoly_code(bytes code, str kind):
    cdef uint64_t rows[MAXN]
    cdef int64_t mat[32 * 32]
    cdef int64_t out[33]
    cdef int k = _kind_index(kind)
    cdef int n = load_code(code, rows)
    cdef int i, status
    if n > QS_CP_MAXN:
        return _pykernels.charpoly_code(code, kind)
    with nogil:
        fill_graph_matrix(n, rows, k, mat)
        status = qs_charpoly(n, mat, out)
    if status:
        return _pykernels.charpoly_code(code, kind)
    return tuple([out[i] for i in range(n + 1)])


# shared helpers: the pure versions are already as fast as they get
rows_to_code = _pykernels.rows_to_code
code_to_rows = _pykernels.code_to_rows
graph_matrix = _pykernels.graph_matrix
