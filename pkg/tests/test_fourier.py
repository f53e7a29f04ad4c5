import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bo_birkhoff.fourier import (HardyFunction, RealPotential, analyze, antiderivative,
                                 grid_size, hilbert_transform, inner, mult, pair, random_smooth,
                                 shift, sobolev_norm, synthesize, szego_project)

coeff_lists = st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=12)


def test_cosine_coefficients():
    u = RealPotential.cosine(2, 1.0, 4)
    full = u.full()
    assert full[4 + 2] == 0.5 and full[4 - 2] == 0.5
    x = 2 * np.pi * np.arange(grid_size(4)) / grid_size(4)
    assert np.allclose(u.to_grid(), np.cos(2 * x), atol=1e-14)


def test_sine_grid_values():
    u = RealPotential.sine(3, 2.0, 5)
    x = 2 * np.pi * np.arange(32) / 32
    assert np.allclose(u.to_grid(32), 2 * np.sin(3 * x), atol=1e-14)


@given(coeff_lists)
def test_grid_roundtrip(c):
    u = RealPotential(np.array(c))
    v = RealPotential.from_grid(u.to_grid(), u.M)
    assert np.allclose(v.coeffs, u.coeffs, atol=1e-12)


def test_from_grid_rejects_mean():
    with pytest.raises(ValueError):
        RealPotential.from_grid(np.ones(16), 4)


def test_from_full_rejects_complex_function():
    full = np.zeros(5, dtype=complex)
    full[3] = 1.0
    with pytest.raises(ValueError):
        RealPotential.from_full(full)


@pytest.mark.parametrize("s", [-0.25, 0.0, 0.5, 1.0])
def test_sobolev_norm_single_mode(s):
    u = RealPotential.from_modes({3: 0.5}, 4)
    assert sobolev_norm(u, s) == pytest.approx(np.sqrt(2 * 3 ** (2 * s) * 0.25))


def test_l2_norm_matches_grid_quadrature(rng):
    u = random_smooth(16, rng, norm=0.7)
    g = u.to_grid(256)
    assert u.l2_norm() == pytest.approx(0.7)
    assert np.sqrt(np.mean(g ** 2)) == pytest.approx(0.7, rel=1e-12)


def test_hilbert_of_cos_is_sin():
    u = RealPotential.cosine(2, 1.0, 3)
    x = 2 * np.pi * np.arange(16) / 16
    assert np.allclose(hilbert_transform(u).to_grid(16), np.sin(2 * x), atol=1e-14)


def test_szego_projection_of_cos():
    f = szego_project(RealPotential.cosine(1, 2.0, 2).full())
    assert np.allclose(f.coeffs, [0, 1, 0])


def test_antiderivative_requires_zero_mean():
    full = np.array([0, 1.0, 0])
    with pytest.raises(ValueError):
        antiderivative(full)
    d = antiderivative(RealPotential.cosine(1, 2.0, 1))
    assert np.allclose(d, [1j, 0, -1j])


@given(coeff_lists, coeff_lists)
@settings(max_examples=30)
def test_mult_matches_direct_convolution(a, b):
    f = RealPotential(np.array(a)).full()
    g = HardyFunction(np.array(b)).full()
    K = max(len(f), len(g)) // 2
    direct = np.convolve(f, g)
    Kc = (len(direct) - 1) // 2
    got = mult(f, g, Kc)
    assert np.allclose(got, direct, atol=1e-12)
    assert np.allclose(mult(f, g, K), direct[Kc - K:Kc + K + 1], atol=1e-12)


def test_inner_and_pair():
    f = HardyFunction([1, 2j])
    g = HardyFunction([1j, 1])
    assert inner(f, g) == pytest.approx(1 * -1j + 2j * 1)
    u = RealPotential.from_modes({1: 1 + 1j}, 1)
    assert pair(u, u) == pytest.approx(2 * abs(1 + 1j) ** 2)


def test_shift_drops_top_mode():
    f = HardyFunction([1, 2, 3])
    assert np.allclose(shift(f).coeffs, [0, 1, 2])


def test_translate_and_reflect():
    u = RealPotential.cosine(1, 1.0, 2)
    x = 2 * np.pi * np.arange(8) / 8
    assert np.allclose(u.translate(0.3).to_grid(8), np.cos(x + 0.3), atol=1e-14)
    v = RealPotential.sine(1, 1.0, 2)
    assert np.allclose(v.reflect().to_grid(8), -np.sin(x), atol=1e-14)


def test_json_roundtrip(rng):
    u = random_smooth(8, rng)
    v = RealPotential.from_json(json.loads(json.dumps(u.to_json())))
    assert np.array_equal(u.coeffs, v.coeffs)
    assert u.digest() == v.digest()
    h = HardyFunction(u.coeffs)
    assert np.array_equal(HardyFunction.from_json(h.to_json()).coeffs, h.coeffs)
    with pytest.raises(ValueError):
        RealPotential.from_json({"M": 3, "coeffs": [[1, 0]]})


def test_synthesize_guards_aliasing():
    with pytest.raises(ValueError):
        synthesize(np.zeros(9), 8)
    with pytest.raises(ValueError):
        analyze(np.zeros(8), 4)


def test_potential_is_immutable():
    u = RealPotential.zero(3)
    with pytest.raises(ValueError):
        u.coeffs[0] = 1.0
    with pytest.raises(TypeError):
        u * 1j
