"""Pure-Python kernels: canonical labeling, orderly augmentation, characteristic polynomials.

``_ckernels.pyx`` implements the same algorithms step for step; both must pick
the same canonical form, so any change here has to be mirrored there.

Canonical form.  The search tree is the usual individualize-and-refine tree:
each node holds an equitable ordered partition, the first non-singleton cell
is the target, and each of its vertices (ascending) is individualized in turn.
Every leaf is a discrete partition, hence a relabeling; its code is the tuple
of relabeled adjacency rows and the canonical form is the lexicographically
largest leaf code.  Automorphisms found by meeting the first or the best leaf
again prune sibling branches in the same orbit.

Canonical codes are ``bytes``: the order, then each canonical row big-endian
in ``ceil(n / 8)`` bytes.
"""

from __future__ import annotations

from typing import Sequence

MAX_AUTOMORPHISMS = 64
# vertex invariant = degree * INV_SCALE + sum of neighbour degrees
INV_SCALE = 1 << 13


def row_width(n: int) -> int:
    return (n + 7) // 8


def rows_to_code(n: int, rows: Sequence[int]) -> bytes:
    w = row_width(n)
    return bytes([n]) + b"".join(r.to_bytes(w, "big") for r in rows)


def code_to_rows(code: bytes) -> tuple[int, tuple[int, ...]]:
    n = code[0]
    w = row_width(n)
    return n, tuple(int.from_bytes(code[1 + i * w:1 + (i + 1) * w], "big") for i in range(n))


def refine(adj: Sequence[int], cells: list[int]) -> list[int]:
    """Refine an ordered partition (list of vertex bitmasks) to an equitable one."""
    s = 0
    while s < len(cells):
        splitter = cells[s]
        out = []
        split = False
        for cell in cells:
            if cell & (cell - 1) == 0:
                out.append(cell)
                continue
            groups: dict[int, int] = {}
            c = cell
            while c:
                low = c & -c
                k = (adj[low.bit_length() - 1] & splitter).bit_count()
                groups[k] = groups.get(k, 0) | low
                c ^= low
            if len(groups) == 1:
                out.append(cell)
            else:
                split = True
                out.extend(groups[k] for k in sorted(groups))
        cells = out
        s = 0 if split else s + 1
    return cells


class _Search:
    __slots__ = ("n", "adj", "first_lab", "first_rows", "best_lab", "best_rows", "autos")

    def __init__(self, n: int, adj: Sequence[int]):
        self.n = n
        self.adj = adj
        self.first_lab: list[int] | None = None
        self.first_rows: tuple[int, ...] = ()
        self.best_lab: list[int] = []
        self.best_rows: tuple[int, ...] = ()
        self.autos: list[list[int]] = []

    def leaf(self, cells: list[int]) -> None:
        lab = [c.bit_length() - 1 for c in cells]
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        rows = []
        for v in lab:
            a = self.adj[v]
            r = 0
            while a:
                low = a & -a
                r |= 1 << pos[low.bit_length() - 1]
                a ^= low
            rows.append(r)
        rows_t = tuple(rows)
        if self.first_lab is None:
            self.first_lab = self.best_lab = lab
            self.first_rows = self.best_rows = rows_t
            return
        if rows_t == self.first_rows:
            self._add_auto(self.first_lab, lab)
        elif rows_t > self.best_rows:
            self.best_lab, self.best_rows = lab, rows_t
        elif rows_t == self.best_rows:
            self._add_auto(self.best_lab, lab)

    def _add_auto(self, lab_a: list[int], lab_b: list[int]) -> None:
        if len(self.autos) >= MAX_AUTOMORPHISMS:
            return
        g = [0] * self.n
        for a, b in zip(lab_a, lab_b):
            g[a] = b
        self.autos.append(g)

    def _same_orbit(self, v: int, explored: int, path: list[int]) -> bool:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.autos:
            if all(g[p] == p for p in path):
                for i in range(self.n):
                    a, b = find(i), find(g[i])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        rv = find(v)
        e = explored
        while e:
            low = e & -e
            if find(low.bit_length() - 1) == rv:
                return True
            e ^= low
        return False

    def search(self, cells: list[int], path: list[int]) -> None:
        if len(cells) == self.n:
            self.leaf(cells)
            return
        t = next(i for i, c in enumerate(cells) if c & (c - 1))
        target = cells[t]
        explored = 0
        rem = target
        while rem:
            low = rem & -rem
            rem ^= low
            v = low.bit_length() - 1
            if explored and self._same_orbit(v, explored, path):
                continue
            explored |= low
            child = cells[:t] + [low, target ^ low] + cells[t + 1:]
            path.append(v)
            self.search(refine(self.adj, child), path)
            path.pop()


def canonical_form(n: int, adj: Sequence[int]) -> tuple[list[int], tuple[int, ...]]:
    """Return ``(lab, rows)``: ``lab[i]`` is the vertex placed at position ``i`` and
    ``rows`` the adjacency rows of the canonically relabeled graph."""
    if n == 0:
        return [], ()
    s = _Search(n, adj)
    s.search(refine(adj, [(1 << n) - 1]), [])
    return s.best_lab, s.best_rows


def canonical_code(n: int, adj: Sequence[int]) -> bytes:
    return rows_to_code(n, canonical_form(n, adj)[1])


def _invariants(n: int, adj: Sequence[int]) -> list[int]:
    deg = [a.bit_count() for a in adj]
    out = []
    for v in range(n):
        a, tot = adj[v], 0
        while a:
            low = a & -a
            tot += deg[low.bit_length() - 1]
            a ^= low
        out.append(deg[v] * INV_SCALE + tot)
    return out


def _delete_vertex(adj: Sequence[int], v: int) -> list[int]:
    low = (1 << v) - 1
    return [(r & low) | (r >> (v + 1) << v) for u, r in enumerate(adj) if u != v]


def extend_code(code: bytes) -> list[bytes]:
    """Children of a canonical graph under canonical-deletion augmentation.

    A candidate (parent plus new vertex ``n`` joined to a subset) is kept iff
    deleting its designated vertex gives back the parent's isomorphism class.
    The designated vertex has the largest (degree, neighbour-degree-sum)
    invariant, ties broken by the latest canonical position.  Children are
    deduplicated per parent and returned sorted.
    """
    n, rows = code_to_rows(code)
    big = n + 1
    new_bit = 1 << n
    children = set()
    for mask in range(1 << n):
        adj = [r | (new_bit if mask >> i & 1 else 0) for i, r in enumerate(rows)]
        adj.append(mask)
        inv = _invariants(big, adj)
        top = max(inv)
        if inv[n] != top:
            continue
        lab, crows = canonical_form(big, adj)
        if inv.count(top) > 1:
            star = next(v for v in reversed(lab) if inv[v] == top)
            if star != n:
                reduced = _delete_vertex(adj, star)
                if canonical_form(n, reduced)[1] != rows:
                    continue
        children.add(rows_to_code(big, crows))
    return sorted(children)


def charpoly(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Faddeev-LeVerrier; coefficients of det(xI - M), constant term first."""
    n = len(matrix)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    # am holds M·M_k; M_1 = I so the first product is M itself
    am = [list(row) for row in matrix]
    for k in range(1, n + 1):
        tr = sum(am[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = -tr // k
        coeffs[n - k] = c
        if k == n:
            break
        mk = am
        for i in range(n):
            mk[i][i] += c
        am = [
            [sum(matrix[i][l] * mk[l][j] for l in range(n) if matrix[i][l]) for j in range(n)]
            for i in range(n)
        ]
    return coeffs


def graph_matrix(n: int, adj: Sequence[int], kind: str) -> list[list[int]]:
    sign = -1 if kind == "L" else 1
    mat = [[0] * n for _ in range(n)]
    for v in range(n):
        a = adj[v]
        while a:
            low = a & -a
            mat[v][low.bit_length() - 1] = sign
            a ^= low
        if kind != "A":
            mat[v][v] = adj[v].bit_count()
    return mat


def charpoly_code(code: bytes, kind: str) -> tuple[int, ...]:
    n, rows = code_to_rows(code)
    return tuple(charpoly(graph_matrix(n, rows, kind)))
