"""Shifted-power rebasing and anisotropic rescaling of two-variable phases.

``rebase`` rewrites P(xi; x) in powers of u = xi1 + theta*xi2 - w with
coefficients gamma_m that are polynomials in xi2, via iterated synthetic
division of the xi1-polynomial by (xi1 - z(xi2)), z = w - theta*xi2, carried
out on bivariate coefficient arrays in plain double precision.  No linear
solve is involved, so the transform is exact up to float rounding and is
linear in x.

``rescale`` divides each coefficient by K^beta1, which compresses the first
variable: P((xi1, xi2); x) = P((K xi1, xi2); rescale(x, K)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import PhaseCoefficients, phase_from_matrix


def coeff_l1_norm(poly) -> float:
    """l1 sum of the coefficients of a univariate polynomial."""
    return float(np.abs(np.asarray(poly, dtype=float)).sum())


@dataclass(frozen=True)
class RebasedExpansion:
    """P(xi; x) = sum_m gamma[m](xi2) * (xi1 + theta*xi2 - w)^m."""

    k: int
    theta: float
    w: float
    gamma: tuple[np.ndarray, ...]  # gamma[m] has degree <= k - m in xi2

    def gamma_matrix(self) -> np.ndarray:
        """(k+1, k+1) array G with G[m, j] the xi2^j coefficient of gamma[m]."""
        g = np.zeros((self.k + 1, self.k + 1))
        for m, gm in enumerate(self.gamma):
            g[m, : gm.shape[0]] = gm
        return g

    def reassemble(self, xi) -> float:
        xi1, xi2 = float(xi[0]), float(xi[1])
        u = xi1 + self.theta * xi2 - self.w
        acc = 0.0
        for m in range(self.k, -1, -1):
            gm = 0.0
            for c in self.gamma[m][::-1]:
                gm = gm * xi2 + c
            acc = acc * u + gm
        return acc


def _shift_expand(c: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Substitute v = v' + alpha*xi2 + beta in a bivariate coefficient array.

    ``c[i, j]`` multiplies v^i xi2^j; the result holds coefficients on
    v'^i xi2^j.  Implemented as iterated synthetic division by (v - z) with
    z(xi2) = alpha*xi2 + beta, i.e. repeated Taylor steps in the ring of
    xi2-polynomials.
    """
    k = c.shape[0] - 1
    z0, z1 = beta, alpha
    work = [c[i].copy() for i in range(k + 1)]
    out = np.zeros_like(c)
    for m in range(k + 1):
        # synthetic division of sum_i work[i] v^i by (v - z): quotient q, remainder r
        deg = k - m
        if deg == 0:
            out[m] = work[0]
            break
        q = [np.zeros(k + 1) for _ in range(deg)]
        q[deg - 1] = work[deg]
        for i in range(deg - 1, 0, -1):
            zq = np.zeros(k + 1)
            zq[0] = z0 * q[i][0]
            zq[1:] = z0 * q[i][1:] + z1 * q[i][:-1]
            q[i - 1] = work[i] + zq
        zq = np.zeros(k + 1)
        zq[0] = z0 * q[0][0]
        zq[1:] = z0 * q[0][1:] + z1 * q[0][:-1]
        out[m] = work[0] + zq
        work = q
    return out


def rebase(x: PhaseCoefficients, theta: float, w: float) -> RebasedExpansion:
    """Expand P(xi; x) in powers of (xi1 + theta*xi2 - w)."""
    if x.d != 2:
        raise ValueError("rebase requires d=2")
    c = x.coef_matrix()
    out = _shift_expand(c, -float(theta), float(w))
    k = x.k
    gamma = tuple(out[m, : k - m + 1].copy() for m in range(k + 1))
    return RebasedExpansion(k=k, theta=float(theta), w=float(w), gamma=gamma)


def unrebase(exp: RebasedExpansion) -> PhaseCoefficients:
    """Inverse of :func:`rebase`: recover the phase from its expansion."""
    k = exp.k
    g = exp.gamma_matrix()
    c = _shift_expand(g, exp.theta, -exp.w)
    if abs(c[0, 0]) > 1e-9 * (1.0 + np.abs(g).sum()):
        raise ValueError("expansion does not reassemble to a constant-free phase")
    c[0, 0] = 0.0
    return phase_from_matrix(k, c)


def rebase_matrix(k: int, theta: float, w: float) -> np.ndarray:
    """Matrix of the linear map x -> stacked gamma coefficients.

    Rows are indexed by gamma slots in the flat order (m, j), m = 0..k,
    j = 0..k-m; columns follow the global basis order.  Built column by
    column from rebasing unit phases, so it stays consistent with
    :func:`rebase` by construction.
    """
    from .basis import monomial_basis, phase

    basis = monomial_basis(2, k)
    slots = [(m, j) for m in range(k + 1) for j in range(k - m + 1)]
    mat = np.zeros((len(slots), basis.n))
    for col in range(basis.n):
        e = np.zeros(basis.n)
        e[col] = 1.0
        exp = rebase(phase(2, k, e), theta, w)
        flat = np.concatenate(exp.gamma)
        mat[:, col] = flat
    return mat


def rescale(x: PhaseCoefficients, big_k: int) -> PhaseCoefficients:
    """Anisotropic rescale x_beta -> x_beta / K^beta1 (d = 2, dyadic K >= 1)."""
    if x.d != 2:
        raise ValueError("rescale requires d=2")
    k_int = int(big_k)
    if k_int != big_k or k_int < 1:
        raise ValueError(f"K must be a positive integer, got {big_k}")
    if k_int & (k_int - 1):
        raise ValueError(f"K must be dyadic (a power of 2), got {big_k}")
    scale = np.array([k_int ** (-b.beta1) for b in x.basis.order], dtype=float)
    return PhaseCoefficients(basis=x.basis, coeffs=x.coeffs * scale)
