"""Exhaustive runs of the structural identities over every graph up to a given order.

Each suite returns a :class:`SuiteResult`.  ``violations`` are hard failures.
``findings`` record cases where a stated equality characterisation disagrees
with the data while the underlying inequality still holds; they are reported
for review and do not fail a run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .cospectral import CensusStore
from .enumeration import graph_from_code
from .graph import Graph, is_connected, structure_class, union_with_isolates_and_matching
from .graph6 import encode_graph6
from .invariants import (
    LemmaCheckResult,
    check_bipartite_product,
    check_det_q,
    check_q1_monotone,
    check_trace_identities,
    recoverable_invariants,
    regular_from_spectrum,
)
from .linalg import KINDS, CharPoly, graph_char_poly

SUITE_NAMES = ("agreement", "trace", "bipartite", "det", "q1", "union")


@dataclass
class SuiteResult:
    name: str
    max_order: int
    checked: int = 0
    violations: list[LemmaCheckResult] = field(default_factory=list)
    findings: list[LemmaCheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "max_order": self.max_order,
            "checked": self.checked,
            "violations": len(self.violations),
            "findings": len(self.findings),
        }


def _graphs(n_max: int, store: CensusStore, n_min: int = 0) -> Iterable[Graph]:
    # the Q-census already holds every class exactly once, sorted by code
    for n in range(n_min, n_max + 1):
        for _, members in store.get(n, "Q").iter_classes():
            for code in members:
                yield graph_from_code(code)


def trace_suite(n_max: int, store: CensusStore) -> SuiteResult:
    res = SuiteResult("trace", n_max)
    for g in _graphs(n_max, store):
        r = check_trace_identities(g)
        res.checked += 1
        if not r.holds:
            res.violations.append(r)
    return res


def bipartite_suite(n_max: int, store: CensusStore) -> SuiteResult:
    res = SuiteResult("bipartite", n_max)
    for g in _graphs(n_max, store):
        r = check_bipartite_product(g)
        if r.holds is None:
            continue
        res.checked += 1
        if not r.holds:
            res.violations.append(r)
    return res


def det_suite(n_max: int, store: CensusStore) -> SuiteResult:
    """First clause failures and det < 16 are violations; a det = 16 graph
    outside the induced-C4 family (or vice versa) is a finding."""
    res = SuiteResult("det", n_max)
    for g in _graphs(n_max, store):
        r = check_det_q(g)
        if r.holds is None:
            continue
        res.checked += 1
        d = r.details
        if not d["first_clause"] or ("second_clause" in d and r.lhs < 16):
            res.violations.append(r)
        elif d.get("second_clause") is False:
            res.findings.append(r)
    return res


def agreement_suite(n_max: int, store: CensusStore) -> SuiteResult:
    """Every member of a cospectral class has the same recoverable invariants,
    and regularity read off the polynomial matches the graph."""
    res = SuiteResult("agreement", n_max)
    for n in range(1, n_max + 1):
        for kind in KINDS:
            for key, members in store.get(n, kind).iter_classes():
                graphs = [graph_from_code(c) for c in members]
                ref = recoverable_invariants(graphs[0], kind)
                spectral_regular = regular_from_spectrum(CharPoly(key), kind)
                for g in graphs:
                    res.checked += 1
                    got = recoverable_invariants(g, kind)
                    regular = structure_class(g).is_regular
                    if got != ref or regular != spectral_regular:
                        res.violations.append(LemmaCheckResult(
                            f"agreement-{kind}", encode_graph6(g), False, lhs=list(got), rhs=list(ref),
                            details={"class_first": encode_graph6(graphs[0]),
                                     "regular_from_spectrum": spectral_regular},
                        ))
    return res


def q1_suite(n_max: int, store: CensusStore) -> SuiteResult:
    res = SuiteResult("q1", n_max)
    for g in _graphs(n_max, store, n_min=2):
        if not is_connected(g):
            continue
        for u, v in g.edges():
            h = g.delete_edge(u, v)
            if not is_connected(h):
                continue
            r = check_q1_monotone(g, h)
            res.checked += 1
            if not r.holds:
                res.violations.append(r)
    return res


def _random_graph(rng: random.Random, n: int) -> Graph:
    p = rng.random()
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def union_suite(samples: int, seed: int, max_total: int = 12) -> SuiteResult:
    """Q-poly(G ∪ rK1 ∪ sK2) against Q-poly(G)·λ^(r+s)·(λ-2)^s on seeded random inputs."""
    rng = random.Random(seed)
    res = SuiteResult("union", max_total)
    lam = CharPoly((0, 1))
    shift = CharPoly((-2, 1))
    for _ in range(samples):
        n = rng.randint(1, max_total)
        s = rng.randint(0, (max_total - n) // 2)
        r = rng.randint(0, max_total - n - 2 * s)
        g = _random_graph(rng, n)
        got = graph_char_poly(union_with_isolates_and_matching(g, r, s), "Q")
        want = graph_char_poly(g, "Q")
        for _ in range(r + s):
            want = want * lam
        for _ in range(s):
            want = want * shift
        res.checked += 1
        if got != want:
            res.violations.append(LemmaCheckResult(
                "union-identity", encode_graph6(g), False, lhs=got.serialize(), rhs=want.serialize(),
                details={"r": r, "s": s},
            ))
    return res


# q1 comparisons use exact Sturm arithmetic and grow fast; cap the order
Q1_LIMIT = 6


def run_suites(n_max: int, store: CensusStore, names: Iterable[str] = SUITE_NAMES,
               seed: int = 0, samples: int = 100) -> list[SuiteResult]:
    out = []
    for name in names:
        if name == "agreement":
            out.append(agreement_suite(n_max, store))
        elif name == "trace":
            out.append(trace_suite(n_max, store))
        elif name == "bipartite":
            out.append(bipartite_suite(n_max, store))
        elif name == "det":
            out.append(det_suite(n_max, store))
        elif name == "q1":
            out.append(q1_suite(min(n_max, Q1_LIMIT), store))
        elif name == "union":
            out.append(union_suite(samples, seed))
        else:
            raise ValueError(f"unknown suite {name!r}; expected one of {SUITE_NAMES}")
    return out
