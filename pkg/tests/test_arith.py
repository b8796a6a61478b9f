import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bandknot.arith import (RationalModOne, determinant, factorize, hermite_normal_form,
                            hermite_with_transform, inverse_unimodular, is_square_mod, jacobi,
                            matmul, rmo_add, rmo_scale, smith_normal_form, sqrt_mod)
from bandknot.config import cap_limit
from bandknot.errors import CapExceeded

R = RationalModOne.of


@pytest.mark.parametrize("a, b, want", [
    (R(1, 3), R(2, 3), R(0)),
    (R(1, 3), R(1, 3), R(2, 3)),
    (R(2, 9), R(8, 63), R(22, 63)),
])
def test_rmo_add(a, b, want):
    assert rmo_add(a, b) == want


@pytest.mark.parametrize("n, a, want", [(3, R(1, 3), R(0)), (2, R(2, 7), R(4, 7)),
                                        (21, R(8, 63), R(2, 3))])
def test_rmo_scale(n, a, want):
    assert rmo_scale(n, a) == want


def test_rmo_rejects_noncanonical():
    with pytest.raises(ValueError):
        RationalModOne(3, 3)
    with pytest.raises(ValueError):
        RationalModOne(2, 4)


@given(st.integers(-10**6, 10**6), st.integers(1, 500), st.integers(-50, 50))
def test_rmo_canonical_form_unique(n, d, shift):
    a = R(Fraction(n, d))
    b = R(Fraction(n + shift * d, d))
    c = R(Fraction(2 * n, 2 * d))
    assert a == b == c
    assert 0 <= a.numerator < a.denominator


@pytest.mark.parametrize("x, n, want", [(-1, 7, -1), (1, 9, 1), (2, 15, 1)])
def test_jacobi_examples(x, n, want):
    assert jacobi(x, n) == want


def test_jacobi_is_not_residuosity():
    assert jacobi(2, 15) == 1
    assert sqrt_mod(2, 15) is None


@pytest.mark.parametrize("bad", [2, 1, 0, -3, 10])
def test_jacobi_rejects_even_or_small(bad):
    with pytest.raises(ValueError):
        jacobi(1, bad)


@pytest.mark.parametrize("x, n, want", [(2, 7, 3), (-1, 3, None), (0, 5, 0)])
def test_sqrt_mod_examples(x, n, want):
    assert sqrt_mod(x, n) == want


def test_sqrt_mod_limits():
    with pytest.raises(ValueError):
        sqrt_mod(1, 10**8 + 1)
    with cap_limit(1000):
        with pytest.raises(CapExceeded):
            sqrt_mod(2, 1319)


def _primes(n):
    return [p for p in range(3, n) if all(p % q for q in range(2, int(p**0.5) + 1))]


def test_jacobi_matches_euler_criterion_for_primes():
    for p in _primes(5000):
        squares = {x * x % p for x in range(1, p)}
        for x in random.Random(p).sample(range(1, p), min(p - 1, 40)):
            assert jacobi(x, p) == (1 if x in squares else -1)
            assert (jacobi(x, p) == 1) == (sqrt_mod(x, p) is not None)


def test_jacobi_minus_one_identity_exhaustive():
    for n in range(3, 5000, 2):
        assert jacobi(-1, n) == (-1) ** ((n - 1) // 2)


@given(st.integers(-10**12, 10**12), st.integers(1, 10**6).map(lambda k: 2 * k + 1))
def test_jacobi_periodic_and_multiplicative(a, n):
    assert jacobi(a, n) == jacobi(a + n, n)
    assert jacobi(a * a, n) in (0, 1)


@given(st.integers(0, 400), st.integers(2, 400))
def test_is_square_mod_matches_scan(c, n):
    assert is_square_mod(c, n) == (sqrt_mod(c, n) is not None)


@given(st.integers(1, 10**9))
def test_factorize_roundtrip(n):
    f = factorize(n)
    prod = 1
    for p, k in f.items():
        assert all(p % q for q in range(2, int(p**0.5) + 1))
        prod *= p**k
    assert prod == n


# ---------------------------------------------------------------- SNF / HNF

@pytest.mark.parametrize("M, diag", [
    ([[3, 0], [0, 1]], [1, 3]),
    ([[2, 4], [6, 8]], [2, 4]),
    ([[2, 1], [1, 2]], [1, 3]),
])
def test_snf_examples(M, diag):
    assert smith_normal_form(M).diagonal == diag


def check_snf(M):
    S, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert determinant(U) in (1, -1) and determinant(V) in (1, -1)
    d = [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]
    for i in range(len(S)):
        for j in range(len(S[0])):
            if i != j:
                assert S[i][j] == 0
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz  # zeros last
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@given(matrices)
def test_snf_identity(M):
    check_snf(M)


@given(matrices)
def test_snf_deterministic(M):
    assert smith_normal_form(M) == smith_normal_form(M)


@pytest.mark.parametrize("M, H", [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ([[2, 4], [0, 2]], [[2, 0], [0, 2]]),
    ([[1, 3], [0, 0]], [[1, 0], [0, 0]]),
])
def test_hnf_examples(M, H):
    assert hermite_normal_form(M) == H


@given(matrices)
def test_hnf_transform_and_shape(M):
    H, V = hermite_with_transform(M)
    assert matmul(M, V) == H
    assert determinant(V) in (1, -1)
    n = len(H[0])
    pivots = []  # (row, column) in order
    for r, row in enumerate(H):
        c = len(pivots)
        if c < n and row[c] and all(x == 0 for x in row[c + 1:]):
            pivots.append((r, c))
        assert all(x == 0 for x in row[len(pivots):])
    for r, c in pivots:
        p = H[r][c]
        assert p > 0
        assert all(0 <= H[r][j] < p for j in range(c))
    # zero columns last
    for c in range(len(pivots), n):
        assert all(row[c] == 0 for row in H)


@given(matrices)
def test_hnf_same_lattice_as_snf(M):
    # column lattices of M and H agree: identical Smith invariants
    assert smith_normal_form(M).diagonal == smith_normal_form(hermite_normal_form(M)).diagonal
