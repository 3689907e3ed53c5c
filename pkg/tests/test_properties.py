"""Randomised properties that tie the kernels to classical spectral facts."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qspectra.enumeration import are_isomorphic, canonical_code
from qspectra.graph import Graph, complement, is_bipartite, union_with_isolates_and_matching
from qspectra.graph6 import decode_graph6, encode_graph6
from qspectra.linalg import CharPoly, graph_char_poly, moments_from_char_poly, spectral_moments


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def graph_and_perm(draw):
    g = draw(graphs())
    return g, draw(st.permutations(range(g.n)))


@given(graphs(max_n=16))
def test_graph6_round_trip(g):
    assert decode_graph6(encode_graph6(g)) == g


@given(graph_and_perm())
def test_canonical_code_invariant(gp):
    g, perm = gp
    assert canonical_code(g) == canonical_code(g.relabel(perm))


@given(graph_and_perm())
@settings(max_examples=50)
def test_single_edge_flip_breaks_isomorphism_only_with_edge_count(gp):
    g, perm = gp
    h = g.relabel(perm)
    if g.n >= 2:
        u, v = 0, 1
        flipped = g.delete_edge(u, v) if g.has_edge(u, v) else Graph.from_edges(g.n, g.edges() + [(u, v)])
        assert not are_isomorphic(flipped, h)


@given(graphs())
def test_trace_coefficients(g):
    for kind in "LQ":
        p = graph_char_poly(g, kind)
        if g.n:
            assert p.coeffs[g.n - 1] == -2 * g.m
    a = graph_char_poly(g, "A")
    if g.n:
        assert a.coeffs[g.n - 1] == 0


@given(graphs())
def test_bipartite_q_and_l_cospectral(g):
    if is_bipartite(g):
        assert graph_char_poly(g, "Q") == graph_char_poly(g, "L")


@given(graphs())
def test_adjacency_spectrum_symmetric_for_bipartite(g):
    if is_bipartite(g):
        p = graph_char_poly(g, "A")
        assert all(c == 0 for i, c in enumerate(p.coeffs) if (g.n - i) % 2)


@given(graphs(max_n=9))
def test_laplacian_of_complement(g):
    n = g.n
    if n == 0:
        return
    p = graph_char_poly(g, "L")
    q = graph_char_poly(complement(g), "L")
    # mu -> n - mu on the nonzero-eigenvector part: x * P_L(G)(n - x) = (-1)^(n-1) (n - x) * P_L(Gc)(x)
    for x in range(-3, n + 4):
        x = Fraction(x)
        assert x * p(n - x) == (-1) ** (n - 1) * (n - x) * q(x)


@given(graphs(max_n=8), st.integers(0, 2), st.integers(0, 2))
def test_union_identity(g, r, s):
    got = graph_char_poly(union_with_isolates_and_matching(g, r, s), "Q")
    want = graph_char_poly(g, "Q")
    for _ in range(r + s):
        want = want * CharPoly((0, 1))
    for _ in range(s):
        want = want * CharPoly((-2, 1))
    assert got == want


@given(graphs())
def test_newton_matches_direct_traces(g):
    for kind in "ALQ":
        assert spectral_moments(g, kind, 4) == moments_from_char_poly(graph_char_poly(g, kind), 4)
