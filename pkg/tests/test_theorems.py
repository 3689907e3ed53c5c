import json

import pytest

from qspectra._config import CapacityError
from qspectra.cospectral import CensusStore
from qspectra.enumeration import are_isomorphic
from qspectra.graph import Graph, complete, complete_minus_perfect_matching, cycle, friendship, path, star
from qspectra.graph6 import decode_graph6
from qspectra.theorems import (
    THEOREM_IDS,
    HypothesisError,
    TheoremInstance,
    check_instance,
    run_theorem,
    verify_instance,
    verify_union_determined,
)


def test_catalogue():
    for tid in ("3.1-DLS", "3.1-DQS", "3.2", "3.3", "3.4", "cor-Kn", "cor-Kn-minus-matching",
                "cor-(n-2)-regular", "cor-(n-3)-regular", "cor-friendship"):
        assert tid in THEOREM_IDS


def test_k3_plus_isolate_is_not_dqs(store):
    found = verify_union_determined(complete(3), 1, 0, "Q", store)
    assert len(found) == 1 and are_isomorphic(found[0], star(3))


def test_union_confirmed(store):
    assert verify_union_determined(complete(4), 1, 1, "Q", store) == []
    assert verify_union_determined(path(5), 2, 0, "L", store) == []


def test_hypotheses_enforced(store):
    with pytest.raises(HypothesisError):
        verify_instance(TheoremInstance("3.1-DQS", path(5), 0, 0), store)  # s must be 1
    with pytest.raises(HypothesisError):
        verify_instance(TheoremInstance("3.1-DQS", path(4), 0, 1), store)  # even order
    with pytest.raises(HypothesisError):
        verify_instance(TheoremInstance("3.2", cycle(5), 0, 0), store)  # too small
    with pytest.raises(HypothesisError):
        verify_instance(TheoremInstance("cor-Kn", path(3), 0, 0), store)
    with pytest.raises(HypothesisError):
        verify_instance(TheoremInstance("3.4", cycle(4), 0, 0), store)  # bipartite
    assert check_instance(TheoremInstance("3.1-DQS", path(5), 0, 1), store) is None
    assert check_instance(TheoremInstance("cor-Kn", complete(4), -1, 0), store)


def test_order_five_bicyclic_base(store):
    # C4 with a triangle glued along one edge: bicyclic, non-bipartite,
    # induced C4, and alone in its Q-class
    g = decode_graph6("DLs")
    assert check_instance(TheoremInstance("3.3", g, 0, 0), store) is None
    assert verify_instance(TheoremInstance("3.3", g, 0, 0), store) == []


def test_corollary_families_small_budget(store):
    for tid in ("cor-Kn-minus-matching", "cor-(n-2)-regular"):
        rep = run_theorem(tid, 8, store)
        assert rep.ok and rep.checked > 0 and rep.confirmed == rep.checked
    f2 = friendship(2)
    for r, s in [(0, 0), (1, 0), (2, 0), (0, 1), (3, 0), (1, 1), (4, 0)]:
        if f2.n + r + 2 * s <= 8:
            assert verify_instance(TheoremInstance("cor-friendship", f2, r, s), store) == []
    k4m = complete_minus_perfect_matching(4)
    assert verify_instance(TheoremInstance("cor-Kn-minus-matching", k4m, 2, 1), store) == []


def test_report_is_deterministic_and_complete(store):
    a = run_theorem("cor-Kn", 7, store)
    b = run_theorem("cor-Kn", 7, store)
    assert a.to_json() == b.to_json()
    doc = json.loads(a.to_json(timings=True))
    assert doc["schema"] == "qspectra.theorem-report/1"
    assert "runtime_seconds" in doc and "runtime_seconds" not in a.to_dict()
    assert doc["checked"] == doc["confirmed"] + len(doc["counterexamples"])
    # the only failures come from K3 itself
    assert {c["base"] for c in doc["counterexamples"]} == {"Bw"}
    first = doc["counterexamples"][0]
    assert set(first) >= {"base", "r", "s", "union", "char_poly", "mates"}
    assert "COUNTEREXAMPLE base=Bw" in a.to_text()


def test_force_s_counts_refusals(store):
    rep = run_theorem("cor-Kn", 6, store, force_s=1)
    assert all(c["s"] == 1 for c in rep.counterexamples)
    assert rep.checked == sum(rep.instances_by_order.values())


def test_errors():
    with pytest.raises(ValueError):
        run_theorem("9.9", 5)
    with pytest.raises(CapacityError):
        run_theorem("cor-Kn", 10, CensusStore())
