"""Exhaustive verification that G ∪ rK1 ∪ sK2 is determined by its spectrum.

Each theorem id names a family of base graphs G (with hypotheses that are
re-checked for every instance) and the matrix kind whose spectrum must
determine the union.  An instance (G, r, s) is confirmed when the census of
order |V(G)| + r + 2s holds no graph other than the union with the same
characteristic polynomial; otherwise every such mate is reported.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ._config import CapacityError
from .cospectral import DEFAULT_BUDGET, Census, CensusStore, spectrum_key
from .enumeration import canonical_code, graph_from_code
from .graph import (
    Graph,
    complete,
    complete_minus_perfect_matching,
    friendship,
    is_bipartite,
    is_connected,
    structure_class,
    union_with_isolates_and_matching,
)
from .graph6 import encode_graph6

REPORT_SCHEMA = "qspectra.theorem-report/1"


class HypothesisError(ValueError):
    """The instance does not satisfy the theorem's hypotheses."""


@dataclass(frozen=True)
class TheoremInstance:
    theorem: str
    base: Graph
    r: int
    s: int

    @property
    def total_order(self) -> int:
        return self.base.n + self.r + 2 * self.s

    def to_dict(self) -> dict:
        return {"base": encode_graph6(self.base), "r": self.r, "s": self.s, "order": self.total_order}


@dataclass
class TheoremReport:
    theorem: str
    kind: str
    budget: int
    checked: int = 0
    confirmed: int = 0
    refused: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    bases_by_order: dict[int, int] = field(default_factory=dict)
    instances_by_order: dict[int, int] = field(default_factory=dict)
    exploratory: bool = False
    runtime_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "theorem": self.theorem,
            "kind": self.kind,
            "budget": self.budget,
            "exploratory": self.exploratory,
            "checked": self.checked,
            "confirmed": self.confirmed,
            "refused": self.refused,
            "bases_by_order": {str(k): v for k, v in sorted(self.bases_by_order.items())},
            "instances_by_order": {str(k): v for k, v in sorted(self.instances_by_order.items())},
            "counterexamples": self.counterexamples,
        }
        if timings:
            out["runtime_seconds"] = round(self.runtime_seconds, 3)
        return out

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"theorem {self.theorem} ({self.kind}-spectrum, total order <= {self.budget})"
            + (" [exploratory]" if self.exploratory else ""),
            f"  {'order':>5} {'bases':>8} {'instances':>10}",
        ]
        for order in sorted(set(self.bases_by_order) | set(self.instances_by_order)):
            lines.append(f"  {order:>5} {self.bases_by_order.get(order, 0):>8} "
                         f"{self.instances_by_order.get(order, 0):>10}")
        lines.append(f"  checked={self.checked} confirmed={self.confirmed} "
                     f"counterexamples={len(self.counterexamples)} refused={self.refused}")
        for cx in self.counterexamples:
            lines.append(f"  COUNTEREXAMPLE base={cx['base']} r={cx['r']} s={cx['s']} "
                         f"union={cx['union']} mates={','.join(cx['mates'])}")
        return "\n".join(lines)


# -- theorem catalogue ---------------------------------------------------------

def _singleton(census: Census, code: bytes) -> bool:
    return len(census.members(spectrum_key(code, census.kind))) == 1


def _is_regular_of_degree(g: Graph, d: int) -> bool:
    return all(r.bit_count() == d for r in g.rows)


@dataclass(frozen=True)
class TheoremSpec:
    kind: str
    min_order: int
    # reason the base fails the hypotheses, or None
    base_check: Callable[[Graph, CensusStore], str | None]
    # reason (r, s) is not allowed for this base, or None
    rs_check: Callable[[Graph, int, int], str | None] = lambda g, r, s: None
    # candidate bases of one order; each still goes through base_check
    candidates: Callable[[int, CensusStore], Iterator[Graph]] | None = None
    exploratory: bool = False


def _all_of_order(n: int, store: CensusStore) -> Iterator[Graph]:
    census = store.get(n, "Q")
    for _, members in census.iter_classes():
        for code in members:
            yield graph_from_code(code)


def _q_singletons(n: int, store: CensusStore) -> Iterator[Graph]:
    for _, members in store.get(n, "Q").iter_classes():
        if len(members) == 1:
            yield graph_from_code(members[0])


def _determined(g: Graph, store: CensusStore, kind: str) -> bool:
    return _singleton(store.get(g.n, kind), canonical_code(g))


def _tree_check(kind: str, need_odd: bool = False):
    def check(g: Graph, store: CensusStore) -> str | None:
        if not is_connected(g) or g.m != g.n - 1:
            return "base is not a tree"
        if need_odd and g.n % 2 == 0:
            return "tree order must be odd"
        if not _determined(g, store, kind):
            return f"tree is not determined by its {kind}-spectrum"
        return None
    return check


def _trees(n: int, store: CensusStore) -> Iterator[Graph]:
    return (g for g in _all_of_order(n, store) if g.m == n - 1 and is_connected(g))


def _dqs(g: Graph, store: CensusStore) -> str | None:
    return None if _determined(g, store, "Q") else "base is not DQS"


def _check_32(g: Graph, store: CensusStore) -> str | None:
    if g.n < 7:
        return "order must be at least 7"
    if structure_class(g).shapes != ("odd-unicyclic",):
        return "base is not odd unicyclic"
    return _dqs(g, store)


def _check_33(g: Graph, store: CensusStore) -> str | None:
    if g.n < 5:
        return "order must be at least 5"
    sc = structure_class(g)
    if sc.shapes != ("bicyclic",) or sc.is_bipartite or not sc.has_induced_c4:
        return "base is not a non-bipartite bicyclic graph with an induced C4"
    return _dqs(g, store)


def _check_34(g: Graph, store: CensusStore) -> str | None:
    if g.n < 3:
        return "order must be at least 3"
    if not is_connected(g) or is_bipartite(g):
        return "base is not connected non-bipartite"
    return _dqs(g, store)


def _is_named(build: Callable[[int], Graph]):
    def check(g: Graph, store: CensusStore) -> str | None:
        try:
            ref = build(g.n)
        except ValueError:
            return "no family member of this order"
        return None if canonical_code(ref) == canonical_code(g) else "base is not the named graph"
    return check


def _single(build: Callable[[int], Graph]):
    def gen(n: int, store: CensusStore) -> Iterator[Graph]:
        try:
            yield build(n)
        except ValueError:
            return
    return gen


def _regular_check(offset: int, need_das: bool = False):
    def check(g: Graph, store: CensusStore) -> str | None:
        if not is_connected(g):
            return "base is not connected"
        if not _is_regular_of_degree(g, g.n - offset):
            return f"base is not ({g.n}-{offset})-regular"
        if need_das and not _determined(g, store, "A"):
            return "base is not DAS"
        return None
    return check


def _regular_candidates(offset: int):
    def gen(n: int, store: CensusStore) -> Iterator[Graph]:
        d = n - offset
        if d < 0 or (n * d) % 2:
            return
        m = n * d // 2
        for g in _all_of_order(n, store):
            if g.m == m and _is_regular_of_degree(g, d):
                yield g
    return gen


def _friendship_k(n: int) -> int | None:
    return (n - 1) // 2 if n >= 3 and n % 2 == 1 else None


def _check_friendship(g: Graph, store: CensusStore) -> str | None:
    k = _friendship_k(g.n)
    if k is None:
        return "order is not that of a friendship graph"
    if spectrum_key(canonical_code(g), "Q") != spectrum_key(canonical_code(friendship(k)), "Q"):
        return f"base is not Q-cospectral with F_{k}"
    return None


def _friendship_candidates(n: int, store: CensusStore) -> Iterator[Graph]:
    k = _friendship_k(n)
    if k is None:
        return
    census = store.get(n, "Q")
    for code in census.members(spectrum_key(canonical_code(friendship(k)), "Q")):
        yield graph_from_code(code)


def _s_is_one(g: Graph, r: int, s: int) -> str | None:
    return None if s == 1 else "requires s = 1"


THEOREMS: dict[str, TheoremSpec] = {
    "3.1-DLS": TheoremSpec("L", 1, _tree_check("L"), candidates=_trees),
    "3.1-DQS": TheoremSpec("Q", 1, _tree_check("Q", need_odd=True), _s_is_one, candidates=_trees),
    "3.2": TheoremSpec("Q", 7, _check_32,
                       candidates=lambda n, st: (g for g in _q_singletons(n, st) if g.m == n)),
    "3.3": TheoremSpec("Q", 5, _check_33,
                       candidates=lambda n, st: (g for g in _q_singletons(n, st) if g.m == n + 1)),
    "3.4": TheoremSpec("Q", 3, _check_34, candidates=_q_singletons),
    "cor-Kn": TheoremSpec("Q", 1, _is_named(complete), candidates=_single(complete)),
    "cor-Kn-minus-matching": TheoremSpec(
        "Q", 4, _is_named(complete_minus_perfect_matching),
        candidates=_single(complete_minus_perfect_matching)),
    "cor-(n-2)-regular": TheoremSpec("Q", 1, _regular_check(2), candidates=_regular_candidates(2)),
    "cor-(n-3)-regular": TheoremSpec("Q", 1, _regular_check(3), candidates=_regular_candidates(3)),
    "cor-(n-4)-regular-DAS": TheoremSpec("Q", 1, _regular_check(4, need_das=True),
                                         candidates=_regular_candidates(4)),
    "cor-friendship": TheoremSpec("Q", 3, _check_friendship, candidates=_friendship_candidates),
    # relaxed 3.1-DQS: any DQS tree, any s; outcomes are reported, not asserted
    "probe-3.1-DQS": TheoremSpec("Q", 1, _tree_check("Q"), candidates=_trees, exploratory=True),
}

THEOREM_IDS = tuple(THEOREMS)


# -- verification ----------------------------------------------------------------

def verify_union_determined(g: Graph, r: int, s: int, kind: str, store: CensusStore) -> list[Graph]:
    """Graphs with the same ``kind``-spectrum as G ∪ rK1 ∪ sK2 but not isomorphic to it.

    An empty list means the union is determined by its spectrum.
    """
    if kind not in ("L", "Q", "A"):
        raise ValueError(f"unknown matrix kind {kind!r}")
    total = g.n + r + 2 * s
    union = union_with_isolates_and_matching(g, r, s)
    census = store.get(total, kind)  # raises CapacityError beyond the budget
    code = canonical_code(union)
    members = census.members(spectrum_key(code, kind))
    if code not in members:
        raise AssertionError("census is missing the union itself")
    return [graph_from_code(c) for c in members if c != code]


def check_instance(inst: TheoremInstance, store: CensusStore) -> str | None:
    spec = THEOREMS[inst.theorem]
    if inst.r < 0 or inst.s < 0:
        return "r and s must be non-negative"
    if inst.base.n < spec.min_order:
        return f"order must be at least {spec.min_order}"
    return spec.base_check(inst.base, store) or spec.rs_check(inst.base, inst.r, inst.s)


def verify_instance(inst: TheoremInstance, store: CensusStore) -> list[Graph]:
    reason = check_instance(inst, store)
    if reason:
        raise HypothesisError(f"{inst.theorem} refuses {encode_graph6(inst.base)} r={inst.r} s={inst.s}: {reason}")
    return verify_union_determined(inst.base, inst.r, inst.s, THEOREMS[inst.theorem].kind, store)


def _rs_pairs(room: int, force_s: int | None) -> Iterator[tuple[int, int]]:
    for s in range(room // 2 + 1):
        if force_s is not None and s != force_s:
            continue
        for r in range(room - 2 * s + 1):
            yield r, s


def run_theorem(theorem: str, budget: int = DEFAULT_BUDGET, store: CensusStore | None = None,
                force_s: int | None = None) -> TheoremReport:
    """Check every hypothesis-satisfying (base, r, s) with total order <= budget.

    ``force_s`` restricts to one value of s; instances it makes illegal are
    counted as refused, never as checked.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREM_IDS}")
    spec = THEOREMS[theorem]
    store = store or CensusStore(allow_large=budget > DEFAULT_BUDGET)
    if budget > DEFAULT_BUDGET and not store.allow_large:
        raise CapacityError(f"budget {budget} needs a store with allow_large=True")
    report = TheoremReport(theorem, spec.kind, budget, exploratory=spec.exploratory)
    start = time.perf_counter()
    for n in range(spec.min_order, budget + 1):
        bases = sorted((g for g in spec.candidates(n, store) if spec.base_check(g, store) is None),
                       key=canonical_code)
        report.bases_by_order[n] = len(bases)
        for g in bases:
            for r, s in _rs_pairs(budget - n, force_s):
                inst = TheoremInstance(theorem, g, r, s)
                if check_instance(inst, store):
                    report.refused += 1
                    continue
                found = verify_union_determined(g, r, s, spec.kind, store)
                report.checked += 1
                order = inst.total_order
                report.instances_by_order[order] = report.instances_by_order.get(order, 0) + 1
                if not found:
                    report.confirmed += 1
                    continue
                union = union_with_isolates_and_matching(g, r, s)
                report.counterexamples.append({
                    **inst.to_dict(),
                    "union": encode_graph6(union),
                    "char_poly": ",".join(map(str, spectrum_key(canonical_code(union), spec.kind))),
                    "mates": [encode_graph6(h) for h in found],
                })
    report.runtime_seconds = time.perf_counter() - start
    return report
