import math

import numpy as np
import pytest

from cchain.dihedral import (EVEN_CONSTANT, ODD_CONSTANT, closed_form_lumped_matrix,
                             dihedral_bound_items, dihedral_bound_lemmas, dihedral_closed_form,
                             dihedral_constant_mixing_check, eigenpair_residuals,
                             fitted_decay_rate, group_lumped_matrix, lumped_distance_profile)


@pytest.mark.parametrize("n", range(3, 17))
def test_closed_form_matrix_matches_group(n):
    assert closed_form_lumped_matrix(n) == group_lumped_matrix(n)


@pytest.mark.parametrize("n", range(3, 25))
def test_eigenpairs(n):
    spec = dihedral_closed_form(n)
    for name, (res, norm) in eigenpair_residuals(spec).items():
        assert res <= 1e-10, name
        assert norm <= 1e-10, name
    assert sum(m for _, m in spec.eigenvalues) == spec.m


@pytest.mark.parametrize("n", [5, 6, 8, 9, 12])
def test_closed_form_eigenvalues_match_numeric(n):
    spec = dihedral_closed_form(n)
    P = closed_form_lumped_matrix(n).to_numpy()
    vals = np.sort(np.linalg.eigvals(P).real)[::-1]
    want = np.sort([v for v, m in spec.eigenvalues for _ in range(m)])[::-1]
    assert np.allclose(vals, want, atol=1e-9)


def test_n3_second_eigenvalue():
    spec = dihedral_closed_form(3)
    assert spec.lambda_2 == pytest.approx((1 + math.sqrt(7)) / 6, abs=1e-15)
    assert spec.lambda_2 == pytest.approx(0.60763, abs=1e-5)
    f1 = spec.eigenfunctions["f1"]
    assert f1[0] == 1.0 and (f1[1] == 1).all()


def test_half_eigenvalue_when_half_n_even():
    for n in (4, 8, 12):
        spec = dihedral_closed_form(n)
        lam, f = spec.eigenfunctions["f_half"]
        assert lam == 0.5
        # supported on the two reflection classes
        assert (f[:-2] == 0).all() and f[-1] == -f[-2] == pytest.approx(0.5 * math.sqrt(n + 6))
    assert "f_half" not in dihedral_closed_form(6).eigenfunctions
    # n = 4: lambda_2 itself is 1/2, so 1/2 has multiplicity two on the lumped chain
    assert dict(dihedral_closed_form(4).eigenvalues)[0.5] == 2


def test_half_eigenvalue_vector_on_rotation_classes_fails():
    # antisymmetric on {1} and {r^(n/2)} is not an eigenvector
    n = 8
    spec = dihedral_closed_form(n)
    P = closed_form_lumped_matrix(n).to_numpy()
    g = np.zeros(spec.m)
    a = 0.5 * math.sqrt((n + 6) / 2)
    g[0], g[1] = -a, a
    assert np.abs(P @ g - 0.5 * g).max() > 0.1


def test_bound_lemmas_sweep():
    assert all(dihedral_bound_lemmas(n) for n in range(3, 100, 2))
    assert all(dihedral_bound_lemmas(n) for n in range(6, 99, 4))


def test_bound_items_are_reported_individually():
    items = dihedral_bound_items(7)
    assert "n <= c_n" in items and all(items.values())
    items = dihedral_bound_items(10)
    assert "interior |fm/B_n| <= 16/n" in items and all(items.values())


def test_bound_lemma_preconditions():
    with pytest.raises(ValueError):
        dihedral_bound_lemmas(1)
    with pytest.raises(ValueError):
        dihedral_bound_lemmas(8)
    with pytest.raises(ValueError):
        dihedral_closed_form(2)


def test_constant_mixing_small_sweep():
    out = dihedral_constant_mixing_check([3, 5, 6, 7, 10, 21], t_max=60)
    assert out["all_hold"]
    assert out["max_lumped_t_mix"] is not None
    for row in out["rows"]:
        assert row["holds"] and row["max_ratio"] <= 1
        assert row["constant"] == (ODD_CONSTANT if row["n"] % 2 else EVEN_CONSTANT)
    out = dihedral_constant_mixing_check([8], t_max=20)
    assert out["rows"][0]["holds"] is None and out["rows"][0]["lumped_t_mix"] is not None


def test_decay_rate_n3():
    d = lumped_distance_profile(closed_form_lumped_matrix(3), 40)
    rate = fitted_decay_rate(d, 10, 40)
    assert abs(rate - (1 + math.sqrt(7)) / 6) <= 1e-3


def test_d6_lumped_envelope_to_50():
    d = lumped_distance_profile(closed_form_lumped_matrix(3), 50)
    lam2 = dihedral_closed_form(3).lambda_2
    assert (d <= ODD_CONSTANT * lam2 ** np.arange(51)).all()
