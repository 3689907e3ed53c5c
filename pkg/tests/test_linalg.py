import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from qspectra.enumeration import enumerate_graphs
from qspectra.graph import Graph, complete, cycle, empty, path, star
from qspectra.linalg import (
    CharPoly,
    RealRoots,
    build_matrix,
    char_poly,
    compare_largest_roots,
    determinant,
    graph_char_poly,
    is_root,
    largest_root,
    moments_from_char_poly,
    pseudo_det,
    spanning_tree_count,
    spectral_moments,
    zero_multiplicity,
)

from conftest import numeric_spectrum, to_networkx


def random_graph(rng, n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])


def test_matrices_of_k2_and_k3():
    k2 = complete(2)
    assert build_matrix(k2, "Q") == [[1, 1], [1, 1]]
    assert build_matrix(k2, "L") == [[1, -1], [-1, 1]]
    assert build_matrix(k2, "A") == [[0, 1], [1, 0]]
    assert build_matrix(complete(3), "Q") == [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    with pytest.raises(ValueError):
        build_matrix(k2, "X")


def test_char_poly_examples():
    assert graph_char_poly(complete(3), "Q").coeffs == (-4, 9, -6, 1)
    assert graph_char_poly(path(4), "L").coeffs == (0, -4, 10, -6, 1)
    assert graph_char_poly(empty(3), "A").coeffs == (0, 0, 0, 1)
    assert graph_char_poly(empty(0), "Q").coeffs == (1,)


@pytest.mark.parametrize("kind", ["A", "L", "Q"])
def test_char_poly_matches_numeric_spectrum(kind):
    rng = random.Random(7)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 11))
        coeffs = graph_char_poly(g, kind).coeffs
        expected = np.poly(numeric_spectrum(g, kind))[::-1]
        assert np.allclose(coeffs, expected, rtol=1e-8, atol=1e-6)


def test_char_poly_large_entries_fall_back_to_bigints():
    rng = random.Random(3)
    n = 9
    m = [[rng.randint(-10**15, 10**15) for _ in range(n)] for _ in range(n)]
    p = char_poly(m)
    assert p.degree == n
    assert (-1) ** n * p.coeffs[0] == determinant(m)
    assert -p.coeffs[n - 1] == sum(m[i][i] for i in range(n))


def test_char_poly_rejects_ragged():
    with pytest.raises(ValueError):
        char_poly([[1, 2], [3]])


def test_charpoly_value_type():
    p = CharPoly((-4, 9, -6, 1))
    assert p.serialize() == "-4,9,-6,1"
    assert CharPoly.parse("-4,9,-6,1") == p
    assert p(4) == 0 and p(1) == 0 and p(Fraction(1, 2)) != 0
    assert p.pretty() == "x^3 - 6x^2 + 9x - 4"
    assert (CharPoly((0, 1)) * CharPoly((-2, 1))).coeffs == (0, -2, 1)
    with pytest.raises(ValueError):
        CharPoly((1, 2))


def test_determinant():
    assert determinant(build_matrix(complete(3), "Q")) == 4
    assert determinant(build_matrix(cycle(4), "Q")) == 0
    assert determinant(build_matrix(cycle(5), "L")) == 0
    assert determinant([]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 7)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert determinant(m) == round(np.linalg.det(np.array(m, dtype=float)))


def test_moments_examples():
    assert spectral_moments(complete(3), "Q", 3) == [3, 6, 18, 66]
    assert spectral_moments(empty(4), "Q", 2) == [4, 0, 0]
    assert spectral_moments(complete(2), "Q", 2) == [2, 2, 4]
    with pytest.raises(ValueError):
        spectral_moments(complete(2), "Q", -1)


def test_moments_agree_with_newton_and_numpy():
    rng = random.Random(5)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 10))
        for kind in "ALQ":
            direct = spectral_moments(g, kind, 5)
            assert direct == moments_from_char_poly(graph_char_poly(g, kind), 5)
            ev = numeric_spectrum(g, kind)
            assert np.allclose(direct, [np.sum(ev**k) for k in range(6)], rtol=1e-9, atol=1e-6)


def test_moments_big_integer_path():
    g = complete(16)
    t = spectral_moments(g, "Q", 12)
    # Q(K16) has eigenvalues 30 (once) and 14 (15 times)
    assert t[12] == 30**12 + 15 * 14**12


def test_zero_multiplicity_and_pseudo_det():
    assert zero_multiplicity(graph_char_poly(path(4), "L")) == 1
    assert zero_multiplicity(graph_char_poly(cycle(4), "Q")) == 1
    assert zero_multiplicity(graph_char_poly(complete(3), "Q")) == 0
    assert pseudo_det(graph_char_poly(path(4), "L")) == 4 * 1
    assert pseudo_det(graph_char_poly(empty(3), "Q")) == 1


def test_spanning_trees_against_networkx():
    assert spanning_tree_count(complete(4)) == 16
    assert spanning_tree_count(cycle(7)) == 7
    assert spanning_tree_count(empty(1)) == 1
    assert spanning_tree_count(empty(0)) == 0
    assert spanning_tree_count(empty(2)) == 0
    for g in enumerate_graphs(6):
        if nx.is_connected(to_networkx(g)):
            assert spanning_tree_count(g) == round(nx.number_of_spanning_trees(to_networkx(g)))


def test_largest_root():
    assert largest_root(graph_char_poly(complete(3), "Q")) == pytest.approx(4.0, abs=1e-9)
    assert largest_root(graph_char_poly(path(3), "Q")) == pytest.approx(3.0, abs=1e-9)
    # Q(P4) largest root 2 + sqrt(2)
    assert largest_root(graph_char_poly(path(4), "Q"), 1e-12) == pytest.approx(2 + 2**0.5, abs=1e-11)
    rng = random.Random(2)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 10))
        assert largest_root(graph_char_poly(g, "Q")) == pytest.approx(numeric_spectrum(g, "Q")[-1], abs=1e-7)


def test_compare_largest_roots_exact():
    q = lambda g: graph_char_poly(g, "Q")
    assert compare_largest_roots(q(complete(3)), q(path(3))) == 1
    assert compare_largest_roots(q(path(3)), q(complete(3))) == -1
    # K3 ∪ K1 and K_{1,3} share the Q-spectrum {4, 1, 1, 0}
    k3k1 = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert compare_largest_roots(q(k3k1), q(star(3))) == 0
    # irrational tie: P4 versus itself relabelled
    assert compare_largest_roots(q(path(4)), q(path(4).relabel([3, 1, 0, 2]))) == 0
    # irrational, distinct: 2+sqrt(2) vs 2+sqrt(3) (Q of P4 vs C6-ish comparisons)
    assert compare_largest_roots(CharPoly((2, -4, 1)), CharPoly((1, -4, 1))) == -1


def test_real_roots_counts():
    r = RealRoots((-4, 9, -6, 1))  # roots 1, 1, 4
    assert r.count_above(Fraction(0)) == 2
    assert r.count_in(Fraction(0), Fraction(1)) == 1
    assert r.is_root(Fraction(4))
    assert is_root(CharPoly((-4, 9, -6, 1)), Fraction(1))
    with pytest.raises(ValueError):
        RealRoots((1,))
    with pytest.raises(ValueError):
        RealRoots((1, 0, 1)).largest_interval(Fraction(1, 10))
