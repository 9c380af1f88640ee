import numpy as np
import pytest

from statset.basis import PhaseCoefficients
from statset.omega import (
    critical_exponent,
    divergence_ledger,
    exponent_parity_table,
    gamma_slots,
    ledger_checks,
    omega_box_construct,
    omega_field_check,
    omega_membership,
    theta_node,
    volume_power,
    w_node,
)
from statset.rebase import rebase
from statset.seeding import rng_stream


def test_node_ranges():
    for lam in (4, 8, 32):
        for r in (0, lam // 2, lam):
            assert 0.0 <= theta_node(r, lam) <= 0.01
            assert 0.25 <= w_node(r, lam) <= 0.75


def test_exponents():
    assert critical_exponent(2) == 6
    assert critical_exponent(3) == 12
    assert volume_power(2) == 4
    assert volume_power(3) == 10


def test_parity_table():
    table = exponent_parity_table(12)
    assert table[0] == (2, 6, "even", 2)
    assert (3, 12, "even", 3) in table  # q_3 even despite k = 3 mod 4
    assert len(table) == 11


def test_slot_count():
    for k in (2, 3, 4):
        n = k + k * (k + 1) // 2
        assert len(gamma_slots(k)) == n


def test_box_x1_interval():
    box = omega_box_construct(2, 8, 0, 0, 0.01)
    idx = box.slots.index((2, 0))
    assert box.lo[idx] == 64.0
    assert box.hi[idx] == 256.0
    assert box.hi[idx] - box.lo[idx] == 192.0


def test_box_validation():
    with pytest.raises(ValueError):
        omega_box_construct(2, 2, 0, 0, 0.01)
    with pytest.raises(ValueError):
        omega_box_construct(2, 8, 9, 0, 0.01)
    with pytest.raises(ValueError):
        omega_box_construct(2, 8, 0, 0, 0.5)


def test_box_volume_lambda_power():
    for k in (2, 3):
        ratios = [
            omega_box_construct(k, lam, 0, 0, 0.01).volume / lam ** volume_power(k)
            for lam in (8, 16, 32)
        ]
        assert max(ratios) / min(ratios) < 2.0
        assert max(ratios) == pytest.approx(min(ratios), rel=1e-12)  # exactly flat here


def test_sampled_points_pass_membership(rng):
    for k, lam in ((2, 8), (3, 8)):
        box = omega_box_construct(k, lam, 2, 3, 0.01)
        for x in box.sample_phases(100, rng_stream(5, k, lam)):
            assert omega_membership(x, k, lam, 2, 3, 0.01)


def test_membership_rejects_small_leading():
    box = omega_box_construct(2, 8, 3, 5, 0.01)
    x = box.sample_phases(1, rng_stream(9, 0))[0]
    c = x.coeffs.copy()
    c[-1] = 8.0 ** 2 / 2.0
    x_bad = PhaseCoefficients(basis=x.basis, coeffs=c)
    assert not omega_membership(x_bad, 2, 8, 3, 5, 0.01)


def test_membership_checks_rebased_norms(rng):
    lam, eps = 8, 0.01
    box = omega_box_construct(2, lam, 1, 1, eps)
    x = box.sample_phases(1, rng_stream(11, 0))[0]
    exp = rebase(x, theta_node(1, lam), w_node(1, lam))
    assert np.abs(exp.gamma[1]).sum() <= eps * lam
    assert np.abs(exp.gamma[0][1:]).sum() <= eps


def test_cross_box_disjointness(rng):
    lam = 16
    box = omega_box_construct(2, lam, 0, 0, 0.01)
    phases = box.sample_phases(2000, rng_stream(13, 0))
    violations = sum(omega_membership(x, 2, lam, lam, lam, 0.01) for x in phases)
    assert violations == 0


def test_field_check_positive_and_stable():
    mins = []
    for lam in (8, 16):
        rows = omega_field_check(2, lam, 0.01, [(0, 0), (lam, lam)], 50, seed=3, tol=1e-5, workers=2)
        assert all(r.failures == 0 for r in rows)
        mins.append(min(r.min_lam_e for r in rows))
    assert min(mins) > 0.0
    assert max(mins) / min(mins) < 2.0


def test_field_check_validation():
    with pytest.raises(ValueError):
        omega_field_check(2, 8, 0.01, [(0, 0)], 10, seed=0)


def test_field_check_large_epsilon_runs():
    # outside the "sufficiently small" hypothesis: must run and report, the
    # lower bound itself is not asserted
    rows = omega_field_check(2, 8, 0.1, [(0, 0)], 50, seed=3, tol=1e-4)
    assert rows[0].samples == 50


def test_ledger_flat_at_critical():
    rows = divergence_ledger(2, 6.0, [8, 16, 32], 0.01, 10, seed=77, n_boxes=3, tol=1e-4, workers=2)
    checks = ledger_checks(rows, 2, 6.0)
    assert checks["mode"] == "flat"
    assert checks["ok"], checks
    assert checks["max_over_min"] <= 4.0


def test_ledger_decay_above_critical():
    rows = divergence_ledger(2, 7.0, [8, 16, 32], 0.01, 10, seed=77, n_boxes=3, tol=1e-4, workers=2)
    checks = ledger_checks(rows, 2, 7.0)
    assert checks["mode"] == "decay"
    assert checks["ok"], checks


def test_ledger_validation():
    with pytest.raises(ValueError):
        divergence_ledger(2, -1.0, [8], 0.01, 5, seed=0)
