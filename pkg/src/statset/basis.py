"""Monomial bases on [0,1]^d and polynomial phases.

The degree-k monomial surface in dimension d is the image of [0,1]^d under
the map ``phi`` collecting every monomial xi^beta with 1 <= |beta| <= k.
A phase is a real coefficient vector paired with such a basis; everything
downstream (window volumes, oscillatory integrals, coefficient boxes)
consumes phases in this representation.

Basis order convention (global, also used for JSON/CSV serialization), for
d = 2: monomials with a positive xi2-power come first, grouped by xi1-power
ascending and xi2-power ascending within a group; the pure xi1 powers
xi1, xi1^2, ..., xi1^k close the list.  For k = 2 this reads
(xi2, xi2^2, xi1*xi2, xi1, xi1^2).  The coefficient of xi1^k is therefore
always the *last* component; it is exposed as ``leading`` because several
constructions normalize against it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class MultiIndex(NamedTuple):
    beta1: int
    beta2: int = 0

    @property
    def degree(self) -> int:
        return self.beta1 + self.beta2


def basis_dimension(d: int, k: int) -> int:
    """Number of monomials xi^beta with 1 <= |beta| <= k, i.e. binom(d+k,k)-1."""
    if d not in (1, 2):
        raise ValueError(f"unsupported dimension d={d}; only d in {{1,2}}")
    if k < 1:
        raise ValueError(f"degree must be >= 1, got k={k}")
    return math.comb(d + k, k) - 1


def _basis_order(d: int, k: int) -> tuple[MultiIndex, ...]:
    if d == 1:
        return tuple(MultiIndex(b, 0) for b in range(1, k + 1))
    order = [MultiIndex(b1, b2) for b1 in range(0, k) for b2 in range(1, k - b1 + 1)]
    order += [MultiIndex(b1, 0) for b1 in range(1, k + 1)]
    return tuple(order)


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered monomial basis of the degree-k surface in dimension d."""

    d: int
    k: int
    order: tuple[MultiIndex, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    def index_of(self, beta: MultiIndex) -> int:
        return self.order.index(beta)


def monomial_basis(d: int, k: int) -> MonomialBasis:
    n = basis_dimension(d, k)
    order = _basis_order(d, k)
    assert len(order) == n
    return MonomialBasis(d=d, k=k, order=order)


def phi(basis: MonomialBasis, xi) -> np.ndarray:
    """Evaluate the monomial map at a point of [0,1]^d, in basis order."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape[0] != basis.d:
        raise ValueError(f"point has dimension {xi.shape[0]}, basis has d={basis.d}")
    if np.any(xi < 0.0) or np.any(xi > 1.0):
        raise ValueError(f"point {xi} outside [0,1]^{basis.d}")
    out = np.empty(basis.n)
    for i, b in enumerate(basis.order):
        v = xi[0] ** b.beta1
        if basis.d == 2:
            v *= xi[1] ** b.beta2
        out[i] = v
    return out


@dataclass(frozen=True)
class PhaseCoefficients:
    """A real polynomial phase P(xi) = sum_beta x_beta xi^beta, |beta| in [1,k]."""

    basis: MonomialBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.basis.n,):
            raise ValueError(f"expected {self.basis.n} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def k(self) -> int:
        return self.basis.k

    @property
    def leading(self) -> float:
        """Coefficient of xi1^k (the paper-style normalizing coefficient)."""
        return float(self.coeffs[-1])

    def l1(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def coef_matrix(self) -> np.ndarray:
        """Coefficients as a (k+1, k+1) array C with C[i, j] on xi1^i xi2^j.

        Only valid for d = 2; slots with i + j > k or i = j = 0 are zero.
        """
        if self.d != 2:
            raise ValueError("coef_matrix requires d=2")
        c = np.zeros((self.k + 1, self.k + 1))
        for x, b in zip(self.coeffs, self.basis.order):
            c[b.beta1, b.beta2] = x
        return c

    def coef_1d(self) -> np.ndarray:
        """Univariate coefficient array [0, x_1, ..., x_k] (d = 1 only)."""
        if self.d != 1:
            raise ValueError("coef_1d requires d=1")
        return np.concatenate(([0.0], self.coeffs))

    def to_json(self) -> str:
        return json.dumps({"d": self.d, "k": self.k, "coeffs": list(self.coeffs)})


def phase(d: int, k: int, coeffs) -> PhaseCoefficients:
    return PhaseCoefficients(basis=monomial_basis(d, k), coeffs=np.asarray(coeffs, dtype=float))


def phase_from_matrix(k: int, coef_matrix: np.ndarray) -> PhaseCoefficients:
    """Inverse of :meth:`PhaseCoefficients.coef_matrix` (d = 2)."""
    basis = monomial_basis(2, k)
    coeffs = np.array([coef_matrix[b.beta1, b.beta2] for b in basis.order])
    return PhaseCoefficients(basis=basis, coeffs=coeffs)


def phase_from_json(text: str) -> PhaseCoefficients:
    obj = json.loads(text)
    return phase(int(obj["d"]), int(obj["k"]), obj["coeffs"])


def eval_phase(x: PhaseCoefficients, xi) -> float:
    """Evaluate P(xi; x) by Horner recursion on the coefficient grid."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape[0] != x.d:
        raise ValueError(f"point has dimension {xi.shape[0]}, phase has d={x.d}")
    if x.d == 1:
        acc = 0.0
        for c in x.coef_1d()[::-1]:
            acc = acc * xi[0] + c
        return float(acc)
    cm = x.coef_matrix()
    acc = 0.0
    for i in range(x.k, -1, -1):
        row = 0.0
        for j in range(x.k, -1, -1):
            row = row * xi[1] + cm[i, j]
        acc = acc * xi[0] + row
    return float(acc)
