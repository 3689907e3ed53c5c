"""The compiled kernels must be drop-in replacements for the Python ones."""

import random

import pytest

from qspectra import _kernels
from qspectra.enumeration import enumerate_codes

pure = _kernels.pure
compiled = _kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def random_rows(rng, n, p=0.5):
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return tuple(rows)


def test_backend_flag():
    assert _kernels.BACKEND in ("compiled", "python")
    assert _kernels.active is (compiled or pure)


@needs_compiled
@pytest.mark.parametrize("n", range(0, 8))
def test_enumeration_identical(n):
    assert list(enumerate_codes(n, extend=pure.extend_code)) == list(enumerate_codes(n, extend=compiled.extend_code))


@needs_compiled
def test_canonical_form_identical():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(0, 14)
        rows = random_rows(rng, n, rng.random())
        lab_p, rows_p = pure.canonical_form(n, rows)
        lab_c, rows_c = compiled.canonical_form(n, rows)
        assert list(lab_p) == list(lab_c) and tuple(rows_p) == tuple(rows_c)
        assert pure.canonical_code(n, rows) == compiled.canonical_code(n, rows)


@needs_compiled
def test_charpoly_identical():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(0, 12)
        rows = random_rows(rng, n)
        code = pure.rows_to_code(n, rows)
        for kind in "ALQ":
            assert tuple(pure.charpoly_code(code, kind)) == tuple(compiled.charpoly_code(code, kind))
    m = [[rng.randint(-10**12, 10**12) for _ in range(8)] for _ in range(8)]
    assert list(pure.charpoly(m)) == list(compiled.charpoly(m))


def test_code_round_trip(kernels):
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randint(0, 16)
        rows = random_rows(rng, n)
        assert kernels.code_to_rows(kernels.rows_to_code(n, rows)) == (n, rows)
