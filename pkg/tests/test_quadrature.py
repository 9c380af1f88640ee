import math

import numpy as np
import pytest
from scipy.special import fresnel

from statset import backends
from statset.basis import phase
from statset.quadrature import (
    direct_integral_1d,
    direct_integral_2d,
    ikromov_check,
    integrate_gamma_2d,
)
from statset.rebase import rebase


def closed_linear(c: float) -> complex:
    return (np.exp(2j * np.pi * c) - 1.0) / (2j * np.pi * c)


def test_1d_constant():
    res = direct_integral_1d([0.0], 0.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-14)
    assert res.ok and res.panels >= 1


def test_1d_linear_closed_form():
    res = direct_integral_1d([0.0, 10.5], 0.0, 1.0)
    assert res.value == pytest.approx(closed_linear(10.5), abs=1e-12)
    assert abs(res.value) == pytest.approx(2.0 / (21.0 * math.pi), abs=1e-12)


def test_1d_fresnel_vs_scipy_and_riemann():
    res = direct_integral_1d([0.0, 0.0, 1.0], 0.0, 1.0)
    s2, c2 = fresnel(2.0)
    assert res.value == pytest.approx((c2 + 1j * s2) / 2.0, abs=1e-10)
    n = 10 ** 7
    x = (np.arange(n) + 0.5) / n
    brute = np.exp(2j * np.pi * x ** 2).mean()
    assert res.value == pytest.approx(brute, abs=1e-6)


def test_1d_validation():
    with pytest.raises(ValueError):
        direct_integral_1d([0.0, 1.0], 1.0, 0.0)
    with pytest.raises(ValueError):
        direct_integral_1d([0.0, 1.0], 0.0, 1.0, tol=1e-13)


def test_1d_magnitude_bound(rng):
    for _ in range(25):
        q = rng.uniform(-50, 50, 4)
        a, b = sorted(rng.uniform(-1, 1, 2))
        if b - a < 1e-3:
            continue
        res = direct_integral_1d(q, a, b)
        assert abs(res.value) <= (b - a) + 1e-12


def test_1d_anti_aliasing(rng):
    for _ in range(10):
        q = rng.uniform(-80, 80, 4)
        coarse = direct_integral_1d(q, 0.0, 1.0, tol=1e-6)
        fine = direct_integral_1d(q, 0.0, 1.0, tol=5e-7)
        assert abs(fine.value - coarse.value) <= coarse.est_error + 1e-15


def test_1d_panel_cap_flags():
    re, im, panels, ok = backends.osc1d(np.array([0.0, 0.0, 1e7]), 0.0, 1.0, math.pi / 4, 1000)
    assert not ok
    assert abs(complex(re, im)) <= 1.0 + 1e-9


def test_2d_zero_phase():
    res = direct_integral_2d(phase(2, 2, np.zeros(5)))
    assert res.value == pytest.approx(1.0, abs=1e-13)


def test_2d_linear_closed_form():
    res = direct_integral_2d(phase(2, 2, [0, 0, 0, 10.5, 0]))
    assert res.value == pytest.approx(closed_linear(10.5), abs=1e-10)


def test_2d_separable_product(rng):
    for _ in range(5):
        a, b = rng.uniform(1.0, 20.0, 2)
        res = direct_integral_2d(phase(2, 2, [b, 0, 0, a, 0]), tol=1e-9)
        assert res.value == pytest.approx(closed_linear(a) * closed_linear(b), abs=1e-8)


def test_2d_matches_1d_on_xi1_only_phase(rng):
    coefs = rng.uniform(-15, 15, 3)
    x = phase(2, 3, [0, 0, 0, 0, 0, 0, coefs[0], coefs[1], coefs[2]])
    r2 = direct_integral_2d(x, tol=1e-9)
    r1 = direct_integral_1d(np.concatenate(([0.0], coefs)), 0.0, 1.0, tol=1e-10)
    assert r2.value == pytest.approx(r1.value, abs=1e-8)


def test_2d_shear_invariance(rng):
    x = phase(2, 3, rng.uniform(-5, 5, 9))
    theta, w = 0.008, 0.4
    gam = rebase(x, theta, w).gamma_matrix()
    raw = direct_integral_2d(x, tol=1e-9)
    sheared = integrate_gamma_2d(gam, theta, w, tol=1e-9)
    assert sheared.value == pytest.approx(raw.value, abs=1e-8)


def test_ikromov_monomial_matches_fresnel():
    # epsilon = 0 leaves a pure monomial: the normalized product equals
    # |F(1.5 sqrt(a2)) + F(sqrt(a2))| / 2 with F = C + iS, which stays within
    # the Fresnel tail envelope of the limit sqrt(2)/2.
    table = ikromov_check(2, [8.0, 32.0], 0.0, 5, seed=1)
    for a_val in (8.0, 32.0):
        prods = table[table[:, 0] == a_val, 3]
        assert np.all(np.abs(prods - math.sqrt(2) / 2) <= 2.0 / a_val)
    big = ikromov_check(2, [256.0], 0.0, 2, seed=1)
    assert np.all(np.abs(big[:, 3] - math.sqrt(2) / 2) <= 0.05)


def test_ikromov_validation():
    with pytest.raises(ValueError):
        ikromov_check(2, [2.0], 0.01, 2, seed=0)
    with pytest.raises(ValueError):
        ikromov_check(2, [8.0], 0.5, 2, seed=0)


def test_ikromov_spread_shrinks_with_A():
    table = ikromov_check(3, [8.0, 16.0, 32.0], 0.01, 50, seed=7, tol=1e-7)
    spreads = []
    for a_val in (8.0, 16.0, 32.0):
        prods = table[table[:, 0] == a_val, 3]
        spreads.append((prods.max() - prods.min()) / np.median(prods))
    assert spreads[0] > spreads[1] > spreads[2]
