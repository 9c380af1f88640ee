import math

import numpy as np
import pytest

from statset.basis import basis_dimension, phase
from statset.quadrature import direct_integral_2d
from statset.stationary import (
    auto_n_beta,
    level_profile,
    monotonicity_changes,
    reconstruct_from_profile,
    stationary_reconstruct,
    sup_window_measure,
    theorem1_ratio,
    window_normalizer,
    window_volume,
)

X0 = phase(2, 2, np.zeros(5))
X_LIN = phase(2, 2, [0, 0, 0, 10.5, 0])
X_UNIT = phase(2, 2, [0, 0, 0, 1.0, 0])


def test_window_whole_square():
    assert window_volume(X0, -0.5, 1.0).value == 1.0


def test_window_linear_strip():
    est = window_volume(X_LIN, 4.0, 1.0)
    assert est.value == pytest.approx(1.0 / 10.5, abs=2 * 2 ** -10)


def test_window_full_range():
    x = phase(2, 2, [1.0, 0, 0, 1.0, 0])
    assert window_volume(x, 0.0, 2.0).value == 1.0


def test_window_validation():
    with pytest.raises(ValueError):
        window_volume(X0, 0.0, 0.0)
    with pytest.raises(ValueError):
        window_volume(X0, 0.0, 1.0, budget=100)


def test_window_montecarlo_stderr():
    est = window_volume(X_LIN, 4.0, 1.0, method="montecarlo", budget=10 ** 5, seed=3)
    assert est.stderr == pytest.approx(math.sqrt(est.value * (1 - est.value) / 10 ** 5), rel=1e-12)
    assert est.value == pytest.approx(1.0 / 10.5, abs=4 * est.stderr + 1e-3)


def test_sup_window_constant_phase():
    mu, est = sup_window_measure(X0, 1.0)
    assert est.value == 1.0
    assert -1.0 <= mu <= 0.0


def test_sup_window_linear():
    _, est = sup_window_measure(X_LIN, 1.0)
    assert est.value == pytest.approx(1.0 / 10.5, abs=2 * 2 ** -10)


def test_sup_window_annulus_oracle():
    # P = 20 (xi1^2 + xi2^2): any interior window holds a quarter annulus of
    # area pi/(4*20); radial integration confirms that is also the sup.
    m_coef = 20.0
    x = phase(2, 2, [0, m_coef, 0, 0, m_coef])
    _, est = sup_window_measure(x, 1.0)
    assert est.value == pytest.approx(math.pi / (4 * m_coef), abs=2e-3)


def test_sup_monotone_in_c(rng):
    x = phase(2, 3, rng.uniform(-5, 5, 9))
    values = [sup_window_measure(x, c)[1].value for c in (0.25, 0.5, 1.0, 2.0)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_sup_pigeonhole_bound(rng):
    for _ in range(10):
        x = phase(2, 3, rng.uniform(-5, 5, 9))
        _, est = sup_window_measure(x, 1.0)
        span = 2 * x.l1()
        assert est.value >= 1.0 / math.ceil(span + 1.0) - 1e-12


def test_profile_shapes_and_support(rng):
    x = phase(2, 3, rng.uniform(-5, 5, 9))
    prof = level_profile(x, 0.1, 256)
    assert np.all(prof.values >= 0.0)
    assert np.all(prof.values <= 1.0)
    assert prof.values[0] <= 2 ** -10 * 4  # boundary bins carry only edge mass
    assert prof.beta_grid.shape == (256,)


def test_profile_constant_phase_bump():
    prof = level_profile(X0, 0.1, 128)
    assert np.all(prof.values == 1.0)
    assert prof.beta_grid[0] == pytest.approx(-0.1)
    assert prof.beta_grid[-1] == pytest.approx(0.1)


def test_profile_trapezoid_matches_length_oracle():
    prof = level_profile(X_UNIT, 0.1, 512)
    for beta, val in zip(prof.beta_grid, prof.values):
        lo, hi = max(0.0, beta - 0.1), min(1.0, beta + 0.1)
        assert val == pytest.approx(max(0.0, hi - lo), abs=2 * 2 ** -10)
    plateau = prof.values[(prof.beta_grid > 0.15) & (prof.beta_grid < 0.85)]
    assert np.all(np.abs(plateau - 0.2) < 2 ** -9)


def test_profile_plateau_scaled():
    prof = level_profile(X_LIN, 0.1, 512)
    mid = prof.values[(prof.beta_grid > 1.5) & (prof.beta_grid < 9.0)]
    assert np.median(mid) == pytest.approx(0.2 / 10.5, abs=2 ** -9)


def test_profile_validation():
    with pytest.raises(ValueError):
        level_profile(X0, 0.5, 128)
    with pytest.raises(ValueError):
        level_profile(X0, 0.0, 128)
    with pytest.raises(ValueError):
        level_profile(X0, 0.1, 32)


def test_monotonicity_examples():
    assert monotonicity_changes(level_profile(X_UNIT, 0.1, 512)).change_count == 1
    assert monotonicity_changes(level_profile(X0, 0.1, 128)).change_count == 1
    # P = 4(xi1 - 0.5)^2 - 1: single interior minimum, profile rises then falls
    x_q = phase(2, 2, [0, 0, 0, -4.0, 4.0])
    rep = monotonicity_changes(level_profile(x_q, 0.1, 1024))
    assert rep.change_count <= 3
    assert rep.change_count == 1  # count fixed by the 1-D length oracle


def test_monotonicity_validation():
    prof = level_profile(X0, 0.1, 128)
    with pytest.raises(ValueError):
        monotonicity_changes(prof, tolerance=0.5)


def test_normalizer_nonzero():
    for d0 in (0.05, 0.1, 0.25, 0.49):
        assert window_normalizer(d0) != 0.0
    assert window_normalizer(0.1) == pytest.approx(math.sin(0.2 * math.pi) / math.pi)


def test_reconstruct_constant_phase():
    val = stationary_reconstruct(X0, 0.1, 512)
    assert val == pytest.approx(1.0, abs=1e-3)


def test_reconstruct_linear_closed_form():
    val = stationary_reconstruct(X_LIN, 0.1, auto_n_beta(X_LIN))
    assert abs(val) == pytest.approx(2.0 / (21.0 * math.pi), abs=1e-3)


def test_reconstruct_vs_direct_random(rng):
    for _ in range(10):
        x = phase(2, 3, rng.uniform(-5, 5, 9))
        prof = level_profile(x, 0.1, auto_n_beta(x))
        recon = reconstruct_from_profile(prof)
        direct = direct_integral_2d(x, tol=1e-8).value
        assert abs(recon - direct) <= 0.02


def test_ratio_values():
    assert theorem1_ratio(X0) == pytest.approx(1.0, abs=1e-6)
    assert theorem1_ratio(X_LIN) == pytest.approx(1.0 / math.pi, abs=0.01)


def test_ratio_finite_random(rng):
    for _ in range(20):
        x = phase(2, 3, rng.uniform(-5, 5, 9))
        r = theorem1_ratio(x)
        assert math.isfinite(r) and r >= 0.0
