"""Spectrum-derived invariants and checkable identities tying them to structure."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .graph import Graph, contains_c4, degree_stats, is_subgraph, structure_class
from .graph6 import encode_graph6
from .linalg import (
    CharPoly,
    RealRoots,
    build_matrix,
    compare_largest_roots,
    determinant,
    graph_char_poly,
    largest_root,
    moments_from_char_poly,
    pseudo_det,
    spanning_tree_count,
    spectral_moments,
    zero_multiplicity,
)


@dataclass(frozen=True)
class SpectralSummary:
    kind: str
    order: int
    edge_count: int
    moments: tuple[int, int, int, int]
    zero_mult: int
    pseudo_det: int
    det: int
    largest_root: float
    regular_from_spectrum: bool


def regular_from_spectrum(p: CharPoly, kind: str) -> bool:
    """Decide regularity from the polynomial alone.

    Q and A: the largest root is at least the average row sum (4m/n resp.
    2m/n) with equality iff the graph is regular, so test that exact rational
    for being a root with nothing above it.  L: trace(L^2) = 2m + sum d_i^2,
    and sum d_i^2 >= (2m)^2 / n with equality iff regular.
    """
    n = p.degree
    if n == 0:
        return True
    t = moments_from_char_poly(p, 2)
    if kind == "L":
        m2 = t[1]
        return (t[2] - m2) * n == m2 * m2
    twice_m = t[1] if kind == "Q" else t[2]
    avg = Fraction(2 * twice_m if kind == "Q" else twice_m, n)
    if p(avg) != 0:
        return False
    return RealRoots(p.coeffs).count_above(avg) == 0


def summarize_poly(p: CharPoly, kind: str, tol: float = 1e-9) -> SpectralSummary:
    t = moments_from_char_poly(p, 3)
    n = p.degree
    # trace(A) = 0 and trace(A^2) = 2m; for L and Q trace = 2m
    edges = t[2] // 2 if kind == "A" else t[1] // 2
    return SpectralSummary(
        kind=kind,
        order=t[0],
        edge_count=edges,
        moments=(t[0], t[1], t[2], t[3]),
        zero_mult=zero_multiplicity(p),
        pseudo_det=pseudo_det(p),
        det=(-1) ** n * p.coeffs[0],
        largest_root=largest_root(p, tol) if n else 0.0,
        regular_from_spectrum=regular_from_spectrum(p, kind),
    )


def summarize(g: Graph, kind: str, tol: float = 1e-9) -> SpectralSummary:
    return summarize_poly(graph_char_poly(g, kind), kind, tol)


@dataclass
class LemmaCheckResult:
    lemma: str
    graph6: str
    holds: bool | None  # None: hypotheses not met
    lhs: Any = None
    rhs: Any = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.holds is not None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


CSV_FIELDS = ("lemma", "graph6", "holds", "lhs", "rhs")


def to_jsonl(results: Iterable[LemmaCheckResult]) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True, default=str) + "\n" for r in results)


def to_csv(results: Iterable[LemmaCheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in results:
        w.writerow([r.lemma, r.graph6, r.holds, json.dumps(r.lhs), json.dumps(r.rhs)])
    return buf.getvalue()


def check_trace_identities(g: Graph) -> LemmaCheckResult:
    t = spectral_moments(g, "Q", 3)
    ds = degree_stats(g)
    s1, s2, s3 = ds.power_sums
    m = g.m
    tri = structure_class(g).triangle_count
    rhs = [g.n, 2 * m, 2 * m + s2, 6 * tri + 3 * s2 + s3]
    return LemmaCheckResult(
        "trace-identities", encode_graph6(g), t == rhs, lhs=t, rhs=rhs,
        details={"m": m, "triangles": tri, "sum_d2": s2, "sum_d3": s3},
    )


def check_bipartite_product(g: Graph) -> LemmaCheckResult:
    sc = structure_class(g)
    code = encode_graph6(g)
    if not (sc.is_connected and sc.is_bipartite):
        return LemmaCheckResult("bipartite-product", code, None, details={"reason": "not connected bipartite"})
    pq = pseudo_det(graph_char_poly(g, "Q"))
    pl = pseudo_det(graph_char_poly(g, "L"))
    ntau = g.n * spanning_tree_count(g)
    return LemmaCheckResult(
        "bipartite-product", code, pq == pl == ntau, lhs=[pq, pl], rhs=ntau,
    )


def check_det_q(g: Graph) -> LemmaCheckResult:
    """det(Q) = 4 iff odd unicyclic; for non-bipartite connected graphs with
    m > n, det(Q) >= 16 with equality iff bicyclic with an induced C4.

    ``details`` separates the two clauses so a violation of the second can be
    reported on its own.
    """
    sc = structure_class(g)
    code = encode_graph6(g)
    if not sc.is_connected:
        return LemmaCheckResult("det-q", code, None, details={"reason": "disconnected"})
    det = determinant(build_matrix(g, "Q"))
    odd_uni = sc.shapes == ("odd-unicyclic",)
    first = (det == 4) == odd_uni
    details: dict[str, Any] = {"odd_unicyclic": odd_uni, "first_clause": first}
    second = None
    if not sc.is_bipartite and g.m > g.n:
        special = sc.shapes == ("bicyclic",) and sc.has_induced_c4
        second = det >= 16 and (det == 16) == special
        details.update(
            bicyclic_with_induced_c4=special,
            bicyclic_with_c4_subgraph=sc.shapes == ("bicyclic",) and contains_c4(g),
            second_clause=second,
        )
    holds = first and second is not False
    return LemmaCheckResult("det-q", code, holds, lhs=det, rhs=4 if odd_uni else None, details=details)


class PreconditionError(ValueError):
    pass


def check_q1_monotone(g: Graph, h: Graph) -> LemmaCheckResult:
    """q1(G) > q1(H) for a proper labeled subgraph H of a connected G."""
    sc = structure_class(g)
    if not sc.is_connected:
        raise PreconditionError("G must be connected")
    if not is_subgraph(h, g) or (h.n == g.n and h.m == g.m):
        raise PreconditionError("H must be a proper subgraph of G on the same labels")
    pg, ph = graph_char_poly(g, "Q"), graph_char_poly(h, "Q")
    cmp = compare_largest_roots(pg, ph) if h.n else 1
    return LemmaCheckResult(
        "q1-monotone", encode_graph6(g), cmp > 0,
        lhs=largest_root(pg), rhs=largest_root(ph) if h.n else None,
        details={"subgraph": encode_graph6(h), "exact_comparison": cmp},
    )


def recoverable_invariants(g: Graph, kind: str) -> tuple:
    """The structural data that the ``kind``-spectrum is claimed to determine."""
    sc = structure_class(g)
    n, m = g.n, g.m
    if kind == "Q":
        return (n, m, degree_stats(g).power_sums[1], sc.bipartite_component_count, sc.is_regular)
    if kind == "L":
        return (n, m, sc.component_count)
    return (n, m, sc.is_regular)
