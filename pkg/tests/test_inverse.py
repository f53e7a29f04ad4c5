import numpy as np
import pytest

import bo_birkhoff.inverse as inverse
from bo_birkhoff.birkhoff import BirkhoffState, birkhoff_vector
from bo_birkhoff.errors import ConditioningError, ConvergenceError
from bo_birkhoff.fourier import RealPotential
from bo_birkhoff.inverse import (NewtonConfig, finite_gap, linear_guess, newton_solve,
                                 phi_smooth, verify_finite_gap)
from bo_birkhoff.lax import compute_spectrum
from bo_birkhoff.verification import roundtrip_example

SMALL = NewtonConfig(M=32)


def test_linear_guess():
    z = BirkhoffState([0.1, -0.2j, 0.0, 0.05])
    u = linear_guess(z)
    assert np.allclose(u.coeffs, [-0.1, 0.2j * np.sqrt(2), 0, -0.1])


def test_zero_target_needs_no_iterations():
    res = newton_solve(BirkhoffState.zero(8), SMALL)
    assert res.iterations == 0 and res.residual == 0
    assert res.potential.l2_norm() == 0


def test_roundtrip_example():
    u = roundtrip_example(128)
    z = phi_smooth(u, 128, 32)
    res = newton_solve(z, NewtonConfig(M=128))
    assert (res.potential - u).l2_norm() <= 1e-8
    assert res.residual <= 1e-11


def test_one_gap_coordinate_is_recovered():
    z = BirkhoffState(np.r_[-0.89598, np.zeros(7)])
    u = newton_solve(z, SMALL).potential
    got = birkhoff_vector(u, 32, 8)
    assert got[0] == pytest.approx(-0.89598, abs=1e-10)
    assert np.abs(got[1:]).max() <= 1e-10
    # u carries only M_B modes, so the gaps above M_B are small but open
    assert compute_spectrum(u, 32).gaps[0] == pytest.approx(0.89598 ** 2, abs=1e-4)


def test_small_targets_follow_linear_guess():
    z = np.array([0.3, -0.2j, 0.1 + 0.1j, 0.05])
    errs = []
    for eps in (1e-2, 1e-3):
        t = BirkhoffState(eps * z)
        errs.append((newton_solve(t, SMALL).potential - linear_guess(t)).l2_norm())
    # the inverse agrees with its linearization to second order
    assert np.log10(errs[0] / errs[1]) == pytest.approx(2, abs=0.1)


def test_quadratic_convergence():
    z = BirkhoffState([0.5, -0.3j, 0.2, 0.1, 0, 0, 0, 0])
    res = newton_solve(z, SMALL)
    r = [rec["residual"] for rec in res.log]
    assert res.iterations <= 8
    # once in the basin each step squares the residual, down to roundoff
    pairs = [(a, b) for a, b in zip(r, r[1:]) if a < 1e-2 and b > 1e-13]
    assert len(pairs) >= 2
    assert all(b <= a * a for a, b in pairs)


def test_warm_start_saves_iterations():
    u = RealPotential.cosine(1, 0.5, 32) + RealPotential.sine(2, 0.3, 32)
    z = phi_smooth(u, 32, 8)
    cold = newton_solve(z, SMALL)
    warm = newton_solve(z, SMALL, warm_start=u + RealPotential.cosine(1, 1e-6, 32))
    assert warm.iterations <= cold.iterations
    assert (warm.potential - u).l2_norm() <= 1e-9


def test_cutoff_rule():
    with pytest.raises(ValueError):
        newton_solve(BirkhoffState.zero(20), SMALL)


def test_iteration_cap():
    z = BirkhoffState([0.8, 0.5j, 0.3, 0, 0, 0, 0, 0])
    with pytest.raises(ConvergenceError) as info:
        newton_solve(z, NewtonConfig(M=32, max_iter=1, resid_tol=1e-14))
    assert info.value.residual > 0


def test_singular_jacobian(monkeypatch):
    monkeypatch.setattr(inverse, "birkhoff_vector", lambda u, M, M_B: np.zeros(M_B, dtype=complex))
    with pytest.raises(ConditioningError):
        newton_solve(BirkhoffState([0.1, 0.0]), SMALL)


@pytest.mark.parametrize("kwargs", [
    {"max_iter": 0}, {"resid_tol": 0}, {"fd_step": -1e-6}, {"contraction": 1.0}, {"contraction": 0},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        NewtonConfig(**kwargs)


@pytest.fixture(scope="module")
def three_gap():
    cfg = NewtonConfig(M=64)
    w = RealPotential.cosine(1, 0.4, 64) + RealPotential.sine(3, 0.1, 64) + RealPotential.cosine(5, 0.05, 64)
    return w, finite_gap(w, 3, cfg, M_B=24), cfg


def test_finite_gap_keeps_first_coordinates(three_gap):
    w, wN, _ = three_gap
    zw = birkhoff_vector(w, 64, 24)
    zN = birkhoff_vector(wN, 64, 24)
    assert np.abs(zN[:3] - zw[:3]).max() <= 1e-10
    assert np.abs(zN[3:]).max() <= 1e-10


def test_finite_gap_structure(three_gap):
    _, wN, _ = three_gap
    rep = verify_finite_gap(wN, 3, 64, M_B=24)
    assert rep.max_dev <= 1e-8
    assert set(rep.to_json()) >= {"lambda_dev", "one_dev", "eigvec_dev", "expansion_dev", "max_dev"}


def test_finite_gap_is_idempotent(three_gap):
    _, wN, cfg = three_gap
    again = finite_gap(wN, 3, cfg, M_B=24)
    assert (again - wN).l2_norm() <= 1e-10


def test_finite_gap_generic_potential_fails_structure_check():
    u = roundtrip_example(64)
    assert verify_finite_gap(u, 1, 64, M_B=24).max_dev > 1e-6


def test_finite_gap_rejects_closed_gap():
    with pytest.raises(ConditioningError):
        finite_gap(RealPotential.zero(32), 2, SMALL, M_B=8)
