import json

import numpy as np
import pytest

from statset.basis import (
    MultiIndex,
    basis_dimension,
    eval_phase,
    monomial_basis,
    phase,
    phase_from_json,
    phi,
)


def test_dimension_values():
    assert basis_dimension(2, 2) == 5
    assert basis_dimension(2, 3) == 9
    assert basis_dimension(1, 1) == 1


@pytest.mark.parametrize("k", range(1, 8))
def test_dimension_closed_form_d2(k):
    assert basis_dimension(2, k) == k + k * (k + 1) // 2


@pytest.mark.parametrize("d,k", [(0, 2), (3, 2), (2, 0), (1, -1)])
def test_dimension_rejects(d, k):
    with pytest.raises(ValueError):
        basis_dimension(d, k)


def test_basis_order_k2():
    b = monomial_basis(2, 2)
    assert b.order == (
        MultiIndex(0, 1),
        MultiIndex(0, 2),
        MultiIndex(1, 1),
        MultiIndex(1, 0),
        MultiIndex(2, 0),
    )
    assert b.order[-1] == MultiIndex(2, 0)  # leading slot is xi1^k


def test_basis_order_lengths():
    for k in range(1, 6):
        b = monomial_basis(2, k)
        assert len(b.order) == basis_dimension(2, k)
        assert len(set(b.order)) == len(b.order)
        assert all(1 <= m.degree <= k for m in b.order)


def test_phi_corners():
    b = monomial_basis(2, 2)
    assert np.all(phi(b, (0.0, 0.0)) == 0.0)
    assert np.all(phi(b, (1.0, 1.0)) == 1.0)


def test_phi_example_point():
    b = monomial_basis(2, 2)
    np.testing.assert_allclose(
        phi(b, (0.5, 0.25)), [0.25, 0.0625, 0.125, 0.5, 0.25], rtol=0, atol=0
    )


def test_phi_rejects_outside():
    b = monomial_basis(2, 2)
    with pytest.raises(ValueError):
        phi(b, (1.0 + 1e-12, 0.5))
    with pytest.raises(ValueError):
        phi(b, (-1e-12, 0.5))


def test_eval_phase_zero_and_monomial():
    x0 = phase(2, 3, np.zeros(9))
    assert eval_phase(x0, (0.3, 0.7)) == 0.0
    k = 3
    b = monomial_basis(2, k)
    coeffs = np.zeros(b.n)
    coeffs[b.index_of(MultiIndex(k, 0))] = 1.0
    x = phase(2, k, coeffs)
    assert eval_phase(x, (0.5, 0.9)) == pytest.approx(0.5 ** k, abs=0)


def test_eval_phase_dot_product_oracle(rng):
    for k in (1, 2, 3):
        b = monomial_basis(2, k)
        x = phase(2, k, rng.uniform(-5, 5, b.n))
        for _ in range(50):
            xi = rng.uniform(0, 1, 2)
            assert eval_phase(x, xi) == pytest.approx(float(phi(b, xi) @ x.coeffs), abs=1e-12)
        assert abs(eval_phase(x, rng.uniform(0, 1, 2))) <= x.l1() + 1e-12


def test_eval_phase_dimension_mismatch():
    x = phase(2, 2, np.ones(5))
    with pytest.raises(ValueError):
        eval_phase(x, (0.5,))


def test_eval_phase_d1(rng):
    x = phase(1, 3, [2.0, -1.0, 0.5])
    t = 0.37
    assert eval_phase(x, (t,)) == pytest.approx(2 * t - t ** 2 + 0.5 * t ** 3, rel=1e-14)


def test_json_roundtrip(rng):
    x = phase(2, 3, rng.uniform(-5, 5, 9))
    obj = json.loads(x.to_json())
    assert set(obj) == {"d", "k", "coeffs"}
    y = phase_from_json(x.to_json())
    np.testing.assert_array_equal(x.coeffs, y.coeffs)
    assert y.basis == x.basis


def test_coefficients_validation():
    with pytest.raises(ValueError):
        phase(2, 2, [1.0, 2.0])
    with pytest.raises(ValueError):
        phase(2, 2, [1.0, 2.0, np.inf, 0.0, 0.0])
