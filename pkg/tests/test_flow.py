import numpy as np
import pytest
from hypothesis import given, strategies as st

from bo_birkhoff.birkhoff import BirkhoffState, birkhoff_vector
from bo_birkhoff.flow import Trajectory, evolve_birkhoff, frequencies, galilean_shift, solve_bo
from bo_birkhoff.fourier import RealPotential
from bo_birkhoff.inverse import NewtonConfig, newton_solve

import oracles

zetas = st.lists(st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False),
                 min_size=1, max_size=10)


@pytest.mark.parametrize("zeta, expected", [
    ([0.5, 0, 0], oracles.OMEGA_ZETA1_HALF),
    ([0, 0.3], oracles.OMEGA_ZETA2_03),
    ([0, 0, 0, 0], (1, 4, 9, 16)),
])
def test_frequency_values(zeta, expected):
    assert np.allclose(frequencies(BirkhoffState(zeta)), expected, atol=1e-15)


@given(zetas, st.floats(0, 2 * np.pi))
def test_frequencies_depend_on_actions_only(z, theta):
    a = BirkhoffState(z)
    b = BirkhoffState(np.array(z) * np.exp(1j * theta))
    assert np.allclose(frequencies(a), frequencies(b), atol=1e-14)


@given(zetas)
def test_frequencies_below_free(z):
    n = np.arange(1, len(z) + 1)
    assert np.all(frequencies(BirkhoffState(z)) <= n ** 2 + 1e-15)


def test_free_half_period():
    z = BirkhoffState([1e-8, 2e-8j, -1e-8])
    w = evolve_birkhoff(z, np.pi)
    # free frequencies n^2 give a factor (-1)^n at t = pi
    assert np.allclose(w.zeta, z.zeta * np.array([-1, 1, -1]), atol=1e-20)
    assert w.meta["t"] == pytest.approx(np.pi)


@given(zetas, st.floats(-3, 3))
def test_actions_conserved(z, t):
    z0 = BirkhoffState(z)
    assert np.allclose(evolve_birkhoff(z0, t).actions(), z0.actions(), atol=1e-15)


def test_zero_trajectory():
    tr = solve_bo(RealPotential.zero(16), [0, 0.5], NewtonConfig(M=32), M_B=8)
    assert all(u.l2_norm() == 0 for u in tr.samples)


@pytest.fixture(scope="module")
def one_gap():
    cfg = NewtonConfig(M=64)
    z = BirkhoffState(np.r_[-0.2, np.zeros(15)], {"M": 64})
    return newton_solve(z, cfg).potential, cfg


def test_one_gap_travels(one_gap):
    u0, cfg = one_gap
    times = [0.0, 0.3, 0.7]
    tr = solve_bo(u0, times, cfg, M_B=16)
    omega1 = tr.meta["frequencies"][0]
    assert omega1 == pytest.approx(1 - 2 * 0.04, abs=1e-9)
    for t, u in zip(times, tr.samples):
        assert (u - u0.translate(omega1 * t)).l2_norm() <= 1e-6


def test_sequential_and_parallel_agree(one_gap):
    u0, cfg = one_gap
    u0 = u0 + RealPotential.cosine(3, 0.02, 64)
    a = solve_bo(u0, [0.2, 0.4], cfg, M_B=16)
    b = solve_bo(u0, [0.2, 0.4], cfg, M_B=16, mode="parallel", workers=2)
    for x, y in zip(a.samples, b.samples):
        assert (x - y).l2_norm() <= 1e-10
    with pytest.raises(ValueError):
        solve_bo(u0, [0.1], cfg, M_B=16, mode="bogus")


def test_trajectory_meta_and_lookup(one_gap):
    u0, cfg = one_gap
    tr = solve_bo(u0, [0.0, 0.5], cfg, M_B=16)
    assert tr.meta["M_B"] == 16 and len(tr.meta["inversions"]) == 2
    assert tr.at(0.5) is tr.samples[1]
    with pytest.raises(KeyError):
        tr.at(0.25)
    back = Trajectory.from_json(tr.to_json())
    assert np.array_equal(back.times, tr.times)
    assert all(np.array_equal(x.coeffs, y.coeffs) for x, y in zip(back.samples, tr.samples))


def test_trajectory_length_mismatch():
    with pytest.raises(ValueError):
        Trajectory([0, 1], [RealPotential.zero(2)])


def test_galilean_shift():
    u = RealPotential.cosine(1, 1.0, 4)
    tr = Trajectory([0.0, 0.5], [u, u])
    sh = galilean_shift(tr, 0.3)
    assert sh.meta["mean"] == 0.3
    assert np.array_equal(sh.samples[0].coeffs, u.coeffs)
    x = 2 * np.pi * np.arange(16) / 16
    # at t = 0.5 the profile sits at x - 2ct = x - 0.3
    assert np.allclose(sh.samples[1].to_grid(16), np.cos(x - 0.3), atol=1e-14)
    assert galilean_shift(sh, -0.3).samples[1].coeffs == pytest.approx(u.coeffs)
