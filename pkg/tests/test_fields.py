import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cchain.fields import (FieldError, field_add, field_enumerate, field_inv, field_make,
                           field_mul, field_neg, field_tables, has_factor_exhaustive,
                           is_irreducible, prime_power)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6)]


def test_prime_field_gf3():
    F = field_make(3, 1)
    assert F.q == 3
    assert field_enumerate(F) == [(0,), (1,), (2,)]


def test_gf4_modulus_is_x2_x_1():
    F = field_make(2, 2)
    assert F.modulus == (1, 1, 1)
    x = (0, 1)
    assert field_mul(F, x, x) == (1, 1)  # x^2 = x + 1


def test_gf8_modulus_irreducible_by_exhaustion():
    F = field_make(2, 3)
    assert len(F.modulus) == 4 and F.modulus[-1] == 1
    assert not has_factor_exhaustive(F.modulus, 2)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (5, 2)])
def test_modulus_is_lexicographically_first_irreducible(p, k):
    F = field_make(p, k)
    # low-degree coefficient compared first
    candidates = [tuple(c) + (1,) for c in itertools.product(range(p), repeat=k)]
    candidates.sort(key=lambda f: f[:k])
    first = next(f for f in candidates if not has_factor_exhaustive(f, p))
    assert F.modulus == first


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_ben_or_agrees_with_exhaustive_search(p, k):
    for c in itertools.product(range(p), repeat=k):
        f = tuple(c) + (1,)
        assert is_irreducible(f, p) == (not has_factor_exhaustive(f, p))


def test_enumeration_order_and_size():
    for p, k in [(2, 2), (3, 2)]:
        F = field_make(p, k)
        els = field_enumerate(F)
        assert len(els) == p**k == len(set(els))
        assert els[0] == F.zero and els[1] == F.one
        assert all(len(e) == k for e in els)


def test_gf9_has_nine_two_coefficient_elements():
    els = field_enumerate(field_make(3, 2))
    assert len(els) == 9 and all(len(e) == 2 for e in els)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = field_make(p, k)
    add, mul, inv = field_tables(F)
    q = F.q
    r = np.arange(q)
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[0] == r).all() and (mul[1] == r).all()
    if q <= 16:
        A = add[add[:, :, None], r[None, None, :]]
        B = add[r[:, None, None], add[None, :, :]]
        assert (A == B).all()
        M1 = mul[mul[:, :, None], r[None, None, :]]
        M2 = mul[r[:, None, None], mul[None, :, :]]
        assert (M1 == M2).all()
        D1 = mul[r[:, None, None], add[None, :, :]]
        D2 = add[mul[:, :, None], mul[:, None, :]]
        assert (D1 == D2).all()
    nz = r[1:]
    assert (mul[nz, inv[nz]] == 1).all()
    # every element has an additive inverse
    assert all((add[a] == 0).sum() == 1 for a in r)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 6)])
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, k):
    F = field_make(p, k)
    _, mul, _ = field_tables(F)
    q = F.q

    def order(a):
        x, n = a, 1
        while x != 1:
            x, n = mul[x, a], n + 1
        return n

    orders = [order(a) for a in range(1, q)]
    assert all((q - 1) % o == 0 for o in orders)
    assert max(orders) == q - 1


def test_randomized_axioms_large_field():
    F = field_make(2, 10)
    rng = random.Random(7)
    els = field_enumerate(F)
    for _ in range(10_000):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert field_mul(F, a, field_add(F, b, c)) == field_add(F, field_mul(F, a, b), field_mul(F, a, c))
        assert field_mul(F, field_mul(F, a, b), c) == field_mul(F, a, field_mul(F, b, c))


def test_gf8_inverse_exhaustive():
    F = field_make(2, 3)
    for a in field_enumerate(F)[1:]:
        assert field_mul(F, a, field_inv(F, a)) == F.one


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inv(field_make(5, 1), (0,))


def test_bad_parameters():
    with pytest.raises(FieldError):
        field_make(4, 1)
    with pytest.raises(FieldError):
        field_make(2, 11)  # 2048 > default cap
    with pytest.raises(FieldError):
        field_make(3, 0)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(8) == (2, 3)
    assert prime_power(7) == (7, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(3, 1), (2, 4), (3, 3), (7, 2)]), st.data())
def test_negation_and_identity(pk, data):
    F = field_make(*pk)
    els = field_enumerate(F)
    a = data.draw(st.sampled_from(els))
    assert field_add(F, a, F.zero) == a
    assert field_add(F, a, field_neg(F, a)) == F.zero
    assert field_mul(F, a, F.one) == a
