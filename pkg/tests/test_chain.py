import math
from fractions import Fraction

import numpy as np
import pytest

from cchain.chain import (Distribution, _ExactTV, check_class_start_equality,
                          check_detailed_balance, default_t_cap, is_stationary, lumped_chain,
                          lumped_stationary, mixing_profile, stationary, synthetic_ca_chain,
                          transition_matrix_float, tv_distance, two_step_check)
from cchain.rational import IntegerVector, RationalMatrix, step
from cchain.structure import ca_state_order

from conftest import SMALL_GROUPS, built

F = Fraction


def float_oracle_t_mix(P: RationalMatrix, pi, eps=0.25, t_max=200):
    """Independent check: full float matrix powers, every start state."""
    A = P.to_numpy()
    target = np.array([float(w) for w in pi.weights])
    M = np.eye(A.shape[0])
    for t in range(t_max + 1):
        if 0.5 * np.abs(M - target).sum(axis=1).max() <= eps + 1e-12:
            return t
        M = M @ A
    return None


def test_abelian_rows_uniform():
    _, _, P, pi = built("cyclic", 5)
    assert all(v == F(1, 5) for r in P.rows for v in r)
    assert set(pi.weights) == {F(1, 5)}


def test_h3_noncentral_row():
    g, s, P, pi = built("heisenberg", 3)
    x = next(x for x in range(g.n) if x not in s.center)
    nz = [v for v in P.rows[x] if v]
    assert len(nz) == 9 and set(nz) == {F(1, 9)}
    assert pi[x] == F(1, 33)


def test_d6_row_of_s():
    g, s, P, _ = built("dihedral", 3)
    si = g.labels.index("s")
    support = {g.labels[y] for y, v in enumerate(P.rows[si]) if v}
    assert support == {"1", "s"}
    assert P[si, 0] == F(1, 2)


def test_chain_basics(small_group):
    _, (g, s, P, pi) = small_group
    assert P.is_stochastic()
    assert all(P[x, x] > 0 for x in range(g.n))
    assert pi.total == 1 and is_stationary(P, pi)
    assert check_detailed_balance(P, pi)
    for cls in s.classes:
        assert sum(pi[x] for x in cls) == F(1, s.class_count)


def test_detailed_balance_negative_control():
    g, s, P, pi = built("dihedral", 3)
    bad = P.with_entry(1, 3, F(1, 7)).with_entry(1, 0, P[1, 0] - F(1, 7))
    assert not check_detailed_balance(bad, pi)


def test_tv_distance_examples():
    u = Distribution(tuple(F(1, 4) for _ in range(4)))
    assert tv_distance(u, u) == 0
    assert tv_distance(Distribution((F(1), F(0), F(0), F(0))), u) == F(3, 4)
    with pytest.raises(ValueError):
        tv_distance([F(1)], [F(1, 2), F(1, 2)])
    assert tv_distance([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.5)


def test_z2_class_start_mixes_in_one_step():
    g, s, P, pi = built("cyclic", 2)
    v = step(IntegerVector([1, 0], 1), P)
    assert _ExactTV(pi.weights)(v) == 0


def test_abelian_one_step():
    _, _, P, pi = built("cyclic", 5)
    prof = mixing_profile(P, pi, T_cap=5)
    assert prof.t_mix_quarter == 1 and prof.d_values[1] == 0
    assert prof.d_values[0] == F(4, 5)


# regression baselines; each is also recomputed by the float oracle above
T_MIX = {("dihedral", 3): 2, ("dihedral", 5): 3, ("heisenberg", 3): 3, ("affine", 5): 5,
         ("gl2", 3): 5, ("psl2_2k", 2): 6, ("cyclic", 5): 1}


@pytest.mark.parametrize("case", sorted(T_MIX), ids=lambda c: f"{c[0]}-{c[1]}")
def test_t_mix_regression_and_oracle(case):
    g, s, P, pi = built(*case)
    prof = mixing_profile(P, pi, T_cap=100, starts=s.representatives())
    assert prof.mode == "exact"
    assert prof.t_mix_quarter == T_MIX[case] == float_oracle_t_mix(P, pi)
    d = prof.d_values
    assert all(a >= b for a, b in zip(d, d[1:]))
    assert d[0] == max(1 - w for w in pi.weights)
    for eps, t in prof.t_mix_of.items():
        assert d[t] <= eps and (t == 0 or d[t - 1] > eps)


def test_representatives_give_same_profile_as_all_starts():
    g, s, P, pi = built("affine", 5)
    a = mixing_profile(P, pi, T_cap=20, starts=s.representatives())
    b = mixing_profile(P, pi, T_cap=20)
    assert a.d_values == b.d_values


def test_float_mode_agrees_with_exact():
    g, s, P, pi = built("gl2", 3)
    ex = mixing_profile(P, pi, T_cap=40, starts=s.representatives())
    fl = mixing_profile(transition_matrix_float(s), pi, T_cap=40, starts=s.representatives())
    assert fl.mode == "float"
    assert ex.t_mix_of == fl.t_mix_of
    assert np.allclose([float(v) for v in ex.d_values], fl.d_values, atol=1e-12)


def test_float_tolerance_is_flagged():
    # two-state chain with d(1) = 1/2 - a = 1/4 + 5e-11: within tolerance of 1/4
    a = 0.25 - 5e-11
    P = np.array([[1 - a, a], [a, 1 - a]])
    pi = Distribution((0.5, 0.5), mode="float")
    prof = mixing_profile(P, pi, [F(1, 4)], T_cap=3, exact=False)
    assert prof.d_values[1] > 0.25
    assert prof.t_mix_quarter == 1 and prof.flagged == [1]
    strict = mixing_profile(P, pi, [F(1, 4)], T_cap=3, exact=False, tol=0.0)
    assert strict.t_mix_quarter == 2 and strict.flagged == []


def test_truncation_flag():
    g, s, P, pi = built("psl2_2k", 2)
    prof = mixing_profile(P, pi, T_cap=2, starts=s.representatives())
    assert prof.truncated and prof.t_mix_quarter is None
    with pytest.raises(ValueError):
        mixing_profile(P, pi, T_cap=0)


def test_default_t_cap():
    _, s, _, _ = built("heisenberg", 3)
    assert default_t_cap(s) == math.ceil(10 * 3 * math.log(4))
    _, s, _, _ = built("cyclic", 5)
    assert default_t_cap(s) == 2


@pytest.mark.parametrize("case", SMALL_GROUPS[3:], ids=lambda c: f"{c[0]}-{c[1]}")
def test_conjugation_symmetry_of_distances(case):
    g, s, P, pi = built(*case)
    tv = _ExactTV(pi.weights)
    for cls in s.classes:
        vecs = [IntegerVector([int(x == y) for y in range(g.n)], 1) for x in cls]
        for _ in range(5):
            vecs = [step(v, P) for v in vecs]
            assert len({tv(v) for v in vecs}) == 1


def test_d6_lumped_matrix():
    g, s, P, _ = built("dihedral", 3)
    L = lumped_chain(g, s, P)
    order = [s.class_of[g.labels.index(lab)] for lab in ("1", "r", "s")]
    want = [[F(1, 6), F(1, 3), F(1, 2)], [F(1, 3), F(2, 3), F(0)], [F(1, 2), F(0), F(1, 2)]]
    assert L.permute(order) == RationalMatrix(want)


def test_lumped_chain_properties(small_group):
    _, (g, s, P, _) = small_group
    L = lumped_chain(g, s, P)
    assert L.is_stochastic()
    assert is_stationary(L, lumped_stationary(s))
    if s.is_abelian:
        assert L == P


def test_h3_lumped_stationary():
    _, s, _, _ = built("heisenberg", 3)
    assert lumped_stationary(s).weights == tuple([F(1, 11)] * 11)


@pytest.mark.parametrize("case,t_max", [(("heisenberg", 3), 10), (("dihedral", 5), 10),
                                        (("gl2", 3), 5)], ids=["h3-3", "d10", "gl2-3"])
def test_class_start_equality(case, t_max):
    g, s, P, pi = built(*case)
    assert check_class_start_equality(g, s, P, lumped_chain(g, s, P), t_max, pi)


def test_class_start_equality_detects_wrong_lumped_chain():
    g, s, P, pi = built("dihedral", 3)
    L = lumped_chain(g, s, P)
    k = s.class_count
    uniform = RationalMatrix([[F(1, k)] * k for _ in range(k)])
    assert not check_class_start_equality(g, s, P, uniform, 3, pi)
    assert L != uniform


@pytest.mark.parametrize("case", [c for c in SMALL_GROUPS if c[0] != "cyclic"],
                         ids=lambda c: f"{c[0]}-{c[1]}")
def test_synthetic_chain_matches_group_chain(case):
    g, s, P, _ = built(*case)
    syn = synthetic_ca_chain(s.z, [len(b) for b in s.blocks])
    assert syn == P.permute(ca_state_order(s).tolist())


def test_synthetic_examples_from_signatures():
    g, s, P, _ = built("heisenberg", 3)
    assert synthetic_ca_chain(3, [9, 9, 9, 9]) == P.permute(ca_state_order(s).tolist())
    g, s, P, _ = built("dihedral", 5)
    syn = synthetic_ca_chain(1, [2, 2, 2, 2, 2, 5])
    assert syn == P.permute(ca_state_order(s).tolist())


def test_synthetic_rejections():
    with pytest.raises(ValueError):
        synthetic_ca_chain(2, [3, 4])
    with pytest.raises(ValueError):
        synthetic_ca_chain(1, [6])
    with pytest.raises(ValueError):
        synthetic_ca_chain(0, [2, 2])
    assert synthetic_ca_chain(1, [2, 2]).is_stochastic()


@pytest.mark.parametrize("case", [c for c in SMALL_GROUPS if c[0] != "cyclic"],
                         ids=lambda c: f"{c[0]}-{c[1]}")
def test_two_step_bound_against_exact_square(case):
    g, s, P, _ = built(*case)
    holds, minimum, bound = two_step_check(s)
    P2 = P @ P
    exact_min = min(v for r in P2.rows for v in r)
    assert holds and minimum == exact_min >= bound == F(s.z, g.n * s.c_star)


def test_two_step_rejects_abelian():
    _, s, _, _ = built("cyclic", 5)
    with pytest.raises(ValueError):
        two_step_check(s)


def test_stationary_rejects_wrong_matrix():
    g, s, P, _ = built("dihedral", 3)
    k = g.n
    uniform = RationalMatrix([[F(1, k)] * k for _ in range(k)])
    with pytest.raises(AssertionError):
        stationary(g, s, uniform)
