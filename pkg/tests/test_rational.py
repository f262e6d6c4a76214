import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cchain.rational import (IntegerVector, QuadraticSurd, RationalMatrix, RationalPolynomial,
                             det_bareiss, det_modular, det_rational, det_shifted, frac_str,
                             identity, parse_frac, quadratic_roots, step)

F = Fraction
small_ints = st.integers(-50, 50)


def det_by_cofactor(M):
    """Independent oracle: Laplace expansion (fine for n <= 6)."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det_by_cofactor([r[:j] + r[j + 1:] for r in M[1:]])
               for j in range(n) if M[0][j])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_bareiss_matches_cofactor(M):
    assert det_bareiss(M) == det_by_cofactor(M)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.lists(st.lists(st.integers(-10**9, 10**9),
                                                              min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_modular_matches_bareiss(M):
    assert det_modular(M) == det_bareiss(M)


def test_modular_on_larger_and_singular_matrices():
    rng = random.Random(3)
    M = [[rng.randint(-5, 5) for _ in range(80)] for _ in range(80)]
    assert det_modular(M) == det_bareiss(M)
    M[5] = list(M[7])
    assert det_modular(M) == 0
    huge = [[rng.randint(-10**25, 10**25) for _ in range(10)] for _ in range(10)]
    assert det_modular(huge) == det_bareiss(huge)
    assert det_modular([[0, 1], [1, 0]]) == -1


def test_det_shifted_against_float():
    rng = np.random.default_rng(0)
    A = rng.integers(1, 6, size=(7, 7))
    P = RationalMatrix([[F(int(v), int(r.sum())) for v in r] for r in A])
    for lam in (F(2), F(-1, 3), F(5, 7)):
        want = np.linalg.det(float(lam) * np.eye(7) - P.to_numpy())
        assert float(det_shifted(P, lam)) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_det_rational_identity_and_scaling():
    assert det_rational(identity(4)) == 1
    M = RationalMatrix([[F(1, 2), F(1, 3)], [F(1, 4), F(1, 5)]])
    assert det_rational(M) == F(1, 10) - F(1, 12)


def test_matrix_basics_and_json():
    M = RationalMatrix([[F(1, 2), F(1, 2)], [F(1, 3), F(2, 3)]])
    assert M.is_stochastic()
    assert M.row_sums() == [1, 1]
    assert (M @ identity(2)) == M
    assert M.transpose().transpose() == M
    assert RationalMatrix.from_json(json.loads(json.dumps(M.to_json()))) == M
    assert M.to_csv().splitlines()[1] == "1/3,2/3"
    assert not M.with_entry(0, 0, F(1, 3)).is_stochastic()
    P = M.permute([1, 0])
    assert P[0, 0] == F(2, 3) and P[1, 1] == F(1, 2)


def test_frac_strings():
    assert frac_str(F(3, 4)) == "3/4"
    assert parse_frac("3/4") == F(3, 4)
    assert parse_frac("-2") == -2


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=20), min_size=1, max_size=6))
def test_step_matches_fraction_product(weights):
    n = len(weights)
    rng = random.Random(n)
    P = RationalMatrix([[F(rng.randint(0, 4), 7) for _ in range(n)] for _ in range(n)])
    v = IntegerVector.from_fractions(weights)
    got = step(v, P).fractions()
    want = [sum((weights[i] * P[i, j] for i in range(n)), F(0)) for j in range(n)]
    assert got == want


poly_st = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=1, max_size=6)


@settings(max_examples=80, deadline=None)
@given(poly_st, poly_st)
def test_polynomial_division_identity(a, b):
    A, B = RationalPolynomial(a), RationalPolynomial(b)
    if not B:
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert (not r) or r.degree < B.degree


@settings(max_examples=60, deadline=None)
@given(poly_st, poly_st, st.fractions(max_denominator=9))
def test_polynomial_ring_evaluation(a, b, x):
    A, B = RationalPolynomial(a), RationalPolynomial(b)
    assert (A * B)(x) == A(x) * B(x)
    assert (A + B)(x) == A(x) + B(x)
    assert (A - B)(x) == A(x) - B(x)


def test_polynomial_helpers():
    x = RationalPolynomial([0, 1])
    p = (x - F(1, 2)) ** 3 * (x + 2)
    assert p.degree == 4 and p.lead == 1
    assert p.multiplicity(F(1, 2)) == 3
    assert p.multiplicity(0) == 0
    assert p.derivative()(F(1, 2)) == 0
    assert str(RationalPolynomial([F(-3, 20), F(-3, 5), 1])) == "x^2 - (3/5)*x - (3/20)"
    assert sorted(p.roots_float().real) == pytest.approx([-2, 0.5, 0.5, 0.5], abs=1e-4)
    assert (3 * x + 1).monic() == x + F(1, 3)
    assert RationalPolynomial.monomial(3, 2) == 2 * x**3


def test_quadratic_roots_surd():
    # 6x^2 - 2x - 1 has roots (1 +- sqrt 7)/6
    hi, lo = quadratic_roots(RationalPolynomial([-1, -2, 6]))
    assert (hi.a, hi.b, hi.d) == (F(1, 6), F(1, 6), 7)
    assert float(hi) == pytest.approx((1 + 7**0.5) / 6)
    assert float(lo) == pytest.approx((1 - 7**0.5) / 6)
    assert str(hi) == "(1+sqrt(7))/6"


def test_quadratic_roots_rational_and_complex():
    r = quadratic_roots(RationalPolynomial([F(-3, 16), F(-1, 2), 1]))  # (x - 3/4)(x + 1/4)
    assert [x.a for x in r] == [F(3, 4), F(-1, 4)] and all(x.is_rational for x in r)
    with pytest.raises(ValueError):
        quadratic_roots(RationalPolynomial([1, 0, 1]))


def test_surd_reduces_square_factors():
    hi, _ = quadratic_roots(RationalPolynomial([-7, 0, 1]))  # sqrt(28)/2 -> sqrt 7
    assert hi.d == 7 and hi.b == 1
    hi, _ = quadratic_roots(RationalPolynomial([F(-28, 144), 0, 1]))
    assert hi == QuadraticSurd(F(0), F(1, 6), 7)
