"""Exact integer linear algebra for graph matrices.

Characteristic polynomials are stored constant term first:
``coeffs[i]`` is the coefficient of ``x**i`` in ``det(xI - M)``.
Root questions (largest root, equality of largest roots, "is r a root")
are answered with exact rational arithmetic and Sturm sequences; floats only
appear in the values handed back for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import Graph, is_connected

KINDS = ("A", "L", "Q")
IntMatrix = list[list[int]]
Number = int | Fraction


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"matrix kind must be one of {KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class CharPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "CharPoly":
        return cls(tuple(int(t) for t in text.split(",")))

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return CharPoly(tuple(out))

    def pretty(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and i) else str(mag)
            if i:
                body += "x" if i == 1 else f"x^{i}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])


# -- matrices ------------------------------------------------------------------

def build_matrix(g: Graph, kind: str) -> IntMatrix:
    return _kernels.pure.graph_matrix(g.n, g.rows, _check_kind(kind))


def char_poly(matrix: Sequence[Sequence[int]]) -> CharPoly:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    return CharPoly(tuple(int(c) for c in _kernels.charpoly([list(map(int, r)) for r in matrix])))


def graph_char_poly(g: Graph, kind: str) -> CharPoly:
    return char_poly(build_matrix(g, kind))


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _matrix_moments(mat: IntMatrix, k_max: int) -> list[int]:
    n = len(mat)
    out = [n]
    if k_max == 0:
        return out
    bound = max((sum(abs(x) for x in row) for row in mat), default=0)
    # |(M^k)_ij| <= bound^k; stay in int64 only when the trace is certainly safe
    if n and n * max(bound, 1) ** k_max < 2**62:
        m = np.array(mat, dtype=np.int64)
        p = m.copy()
        for _ in range(k_max):
            out.append(int(np.trace(p)))
            p = p @ m
        return out
    p = [row[:] for row in mat]
    for _ in range(k_max):
        out.append(sum(p[i][i] for i in range(n)))
        p = [[sum(p[i][l] * mat[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    return out


def spectral_moments(g: Graph, kind: str, k_max: int) -> list[int]:
    """T_0..T_{k_max}, with T_k = trace(M^k)."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    return _matrix_moments(build_matrix(g, kind), k_max)


def moments_from_char_poly(p: CharPoly, k_max: int) -> list[int]:
    """Power sums of the roots via Newton's identities."""
    n = p.degree
    # e_j = (-1)^j * coefficient of x^(n-j)
    e = [(-1) ** j * p.coeffs[n - j] for j in range(n + 1)]
    sums = [n]
    for k in range(1, k_max + 1):
        total = (-1) ** (k - 1) * k * e[k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            total += (-1) ** (i - 1) * e[i] * sums[k - i]
        sums.append(total)
    return sums


def zero_multiplicity(p: CharPoly) -> int:
    z = 0
    while p.coeffs[z] == 0:
        z += 1
    return z


def pseudo_det(p: CharPoly) -> int:
    """Product of the nonzero roots; 1 when every root is zero."""
    z = zero_multiplicity(p)
    return (-1) ** (p.degree - z) * p.coeffs[z]


def spanning_tree_count(g: Graph) -> int:
    if g.n == 0:
        return 0
    if not is_connected(g):
        return 0
    lap = build_matrix(g, "L")
    return determinant([row[1:] for row in lap[1:]])


# -- exact real-root machinery -----------------------------------------------

def _strip(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = num[:]
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [Fraction(0)], _strip(num)
    q = [Fraction(0)] * (len(num) - dd)
    lead = den[-1]
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] / lead
        q[i - dd] = c
        if c:
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    return _strip(q), _strip(num[:dd] or [Fraction(0)])


def _is_zero(p: list[Fraction]) -> bool:
    return len(p) == 1 and p[0] == 0


def _gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while not _is_zero(b):
        a, b = b, _divmod(a, b)[1]
    lead = a[-1]
    return [c / lead for c in a]


def _derivative(p: list[Fraction]) -> list[Fraction]:
    return _strip([i * p[i] for i in range(1, len(p))] or [Fraction(0)])


def _eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


class RealRoots:
    """Sturm-sequence root counting for the squarefree part of a polynomial."""

    def __init__(self, coeffs: Sequence[Number]):
        p = _strip([Fraction(c) for c in coeffs])
        if len(p) == 1:
            raise ValueError("constant polynomial has no roots")
        d = _derivative(p)
        g = _gcd(p, d)
        self.poly = _divmod(p, g)[0] if len(g) > 1 else p
        seq = [self.poly, _derivative(self.poly)]
        while len(seq[-1]) > 1:
            r = _divmod(seq[-2], seq[-1])[1]
            if _is_zero(r):
                break
            seq.append([-c for c in r])
        self.sturm = seq
        self._inf_signs = [1 if q[-1] > 0 else -1 for q in seq]
        lead = self.poly[-1]
        self.bound = 1 + max(abs(c / lead) for c in self.poly[:-1]) if len(self.poly) > 1 else Fraction(1)

    @staticmethod
    def _variations(signs: list[int]) -> int:
        nz = [s for s in signs if s]
        return sum(1 for a, b in zip(nz, nz[1:]) if a != b)

    def count_above(self, x: Fraction) -> int:
        """Number of distinct real roots strictly greater than x."""
        signs = []
        for q in self.sturm:
            v = _eval(q, x)
            signs.append((v > 0) - (v < 0))
        return self._variations(signs) - self._variations(self._inf_signs)

    def count_in(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct real roots in (lo, hi]."""
        return self.count_above(lo) - self.count_above(hi)

    def is_root(self, x: Fraction) -> bool:
        return _eval(self.poly, x) == 0

    def largest_interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """(lo, hi] containing the largest root and no other root, hi - lo <= width.

        When the root is rational and hit exactly, lo == hi == root.
        """
        lo, hi = -self.bound, self.bound
        if self.count_above(lo) == 0:
            raise ValueError("polynomial has no real roots")
        while True:
            above_lo = self.count_above(lo)
            if above_lo == 1 and hi - lo <= width:
                return lo, hi
            mid = (lo + hi) / 2
            c = self.count_above(mid)
            if c >= 1:
                lo = mid
            else:
                if self.is_root(mid):
                    return mid, mid
                hi = mid


def largest_root(p: CharPoly, tol: float = 1e-9) -> float:
    """Largest real root to within ``tol``, decided by exact sign tests."""
    roots = RealRoots(p.coeffs)
    lo, hi = roots.largest_interval(Fraction(tol))
    return float((lo + hi) / 2)


def compare_largest_roots(p: CharPoly, q: CharPoly) -> int:
    """Exact three-way comparison of the largest real roots of ``p`` and ``q``."""
    rp, rq = RealRoots(p.coeffs), RealRoots(q.coeffs)
    width = Fraction(1, 2**10)
    common = None
    while True:
        lp, hp = rp.largest_interval(width)
        lq, hq = rq.largest_interval(width)
        if lp == hp and lq == hq:
            return (lp > lq) - (lp < lq)
        if hp <= lq and not (lq == hq == hp):
            return -1
        if hq <= lp and not (lp == hp == hq):
            return 1
        if common is None:
            g = _gcd(rp.poly, rq.poly)
            common = RealRoots(g) if len(g) > 1 else False
        if common:
            lo, hi = max(lp, lq), min(hp, hq)
            # each interval isolates its polynomial's largest root, so a
            # shared root inside both is that largest root for both
            if lo == hi:
                if common.is_root(lo):
                    return 0
            elif common.count_in(lo, hi) >= 1:
                return 0
        width /= 2**8


def is_root(p: CharPoly, x: Fraction) -> bool:
    return p(Fraction(x)) == 0
