import json

import pytest

from qspectra.enumeration import enumerate_graphs
from qspectra.graph import Graph, complete, cycle, empty, path, star, structure_class
from qspectra.invariants import (
    PreconditionError,
    check_bipartite_product,
    check_det_q,
    check_q1_monotone,
    check_trace_identities,
    recoverable_invariants,
    regular_from_spectrum,
    summarize,
    to_csv,
    to_jsonl,
)
from qspectra.linalg import graph_char_poly

TRIANGLE_AND_C4 = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0)])
DIAMOND = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def test_summaries():
    s = summarize(complete(3), "Q")
    assert (s.order, s.edge_count, s.moments, s.zero_mult, s.det) == (3, 3, (3, 6, 18, 66), 0, 4)
    assert s.largest_root == pytest.approx(4)
    c4 = summarize(cycle(4), "Q")
    assert (c4.order, c4.edge_count, c4.zero_mult, c4.pseudo_det, c4.regular_from_spectrum) == (4, 4, 1, 16, True)
    e = summarize(empty(3), "Q")
    assert (e.edge_count, e.zero_mult, e.pseudo_det) == (0, 3, 1)
    assert summarize(path(5), "A").edge_count == 4


@pytest.mark.parametrize("kind", ["A", "L", "Q"])
def test_regularity_read_from_spectrum(kind):
    for n in range(1, 8):
        for g in enumerate_graphs(n):
            assert regular_from_spectrum(graph_char_poly(g, kind), kind) == structure_class(g).is_regular


@pytest.mark.parametrize("g", [complete(3), star(3), empty(6), TRIANGLE_AND_C4])
def test_trace_identities(g):
    r = check_trace_identities(g)
    assert r.holds and r.lhs == r.rhs


def test_trace_identity_values():
    assert check_trace_identities(star(3)).lhs[3] == 66
    assert check_trace_identities(complete(3)).rhs == [3, 6, 18, 66]


@pytest.mark.parametrize("g, value", [(path(4), 4), (cycle(4), 16), (cycle(6), 36)])
def test_bipartite_product(g, value):
    r = check_bipartite_product(g)
    assert r.holds and r.rhs == value


def test_bipartite_product_not_applicable():
    assert check_bipartite_product(complete(3)).holds is None
    assert not check_bipartite_product(empty(2)).applicable


def test_det_q_examples():
    for g in (cycle(3), cycle(5)):
        r = check_det_q(g)
        assert r.holds and r.lhs == 4 and r.details["odd_unicyclic"]
    r = check_det_q(TRIANGLE_AND_C4)
    assert r.lhs == 16 and r.holds
    assert r.details["bicyclic_with_induced_c4"]
    assert check_det_q(empty(3)).holds is None


def test_det_q_second_clause_finding():
    # det = 16 on a bicyclic graph whose only C4 has a chord
    r = check_det_q(DIAMOND)
    assert r.lhs == 16
    assert r.details["first_clause"]
    assert r.details["second_clause"] is False
    assert r.details["bicyclic_with_c4_subgraph"]
    assert r.holds is False


def test_q1_monotone():
    assert check_q1_monotone(complete(3), path(3)).holds
    assert check_q1_monotone(cycle(4), path(4)).holds
    r = check_q1_monotone(complete(4), complete(3))
    assert r.holds and r.lhs == pytest.approx(6) and r.rhs == pytest.approx(4)
    with pytest.raises(PreconditionError):
        check_q1_monotone(empty(3), empty(3))
    with pytest.raises(PreconditionError):
        check_q1_monotone(path(3), path(3))
    with pytest.raises(PreconditionError):
        check_q1_monotone(path(3), complete(3))


def test_recoverable_invariants():
    assert recoverable_invariants(complete(3), "Q") == (3, 3, 12, 0, True)
    assert recoverable_invariants(star(3), "Q") == (4, 3, 12, 1, False)
    assert recoverable_invariants(Graph.from_edges(4, [(0, 1)]), "L") == (4, 1, 3)
    assert recoverable_invariants(cycle(5), "A") == (5, 5, True)


def test_serialisation():
    rs = [check_trace_identities(complete(3)), check_bipartite_product(path(4))]
    lines = to_jsonl(rs).splitlines()
    assert [json.loads(x)["lemma"] for x in lines] == ["trace-identities", "bipartite-product"]
    text = to_csv(rs)
    assert text.splitlines()[0] == "lemma,graph6,holds,lhs,rhs"
    assert text.splitlines()[1].startswith("trace-identities,Bw,True,")
