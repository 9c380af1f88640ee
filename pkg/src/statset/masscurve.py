"""Extension-operator values and L^p mass over balls of growing radius.

The mass M_p(R) = int_{B_R} |E1|^p dx diverges exactly at the critical
exponent; below we expose two estimators.  The two-dimensional-surface case
(coefficient space of dimension N = k(k+3)/2) uses Monte Carlo over the
ball.  The one-dimensional validation track (d = 1, coefficient space R^k)
is cheap enough for deterministic polar-grid quadrature, which is what the
dyadic-increment checks run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import basis_dimension, phase
from .quadrature import QuadResult, direct_integral_1d, direct_integral_2d
from .seeding import rng_stream
from .utils import parallel_map


def extension_value(k: int, point, tol: float = 1e-8) -> complex:
    """E1 at a coefficient point: int_{[0,1]^2} e(x . phi(xi)) dxi."""
    pt = np.asarray(point, dtype=float)
    res = direct_integral_2d(phase(2, k, pt), tol=tol)
    if not res.ok:
        raise RuntimeError("quadrature budget exceeded in extension_value")
    return res.value


def extension_value_1d(k: int, point, tol: float = 1e-9) -> QuadResult:
    pt = np.asarray(point, dtype=float)
    return direct_integral_1d(np.concatenate(([0.0], pt)), 0.0, 1.0, tol=tol)


@dataclass(frozen=True)
class MassCurve:
    d: int
    k: int
    p: float
    R_values: np.ndarray
    estimates: np.ndarray
    stderrs: np.ndarray
    samples: int
    seed: int | None
    method: str


def ball_volume(n: int, radius: float) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * radius ** n


def mass_curve_mc(
    k: int,
    p: float,
    R_list,
    samples: int,
    seed: int,
    tol: float = 1e-6,
    workers: int = 1,
) -> MassCurve:
    """Monte Carlo M_p(R) for the d = 2 surface: vol(B_R) * mean |E|^p."""
    n_dim = basis_dimension(2, k)
    if n_dim > 9:
        raise ValueError("default budgets stop at k=3 (9 coefficient dimensions)")
    if samples < 10 ** 3:
        raise ValueError(f"need samples >= 1000, got {samples}")
    est = np.empty(len(R_list))
    err = np.empty(len(R_list))
    for i, radius in enumerate(R_list):
        rng = rng_stream(seed, 0x3A55, i)
        g = rng.standard_normal((samples, n_dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        radii = radius * rng.random(samples) ** (1.0 / n_dim)
        pts = g * radii[:, None]

        def one(pt):
            return abs(extension_value(k, pt, tol=tol)) ** p

        vals = np.array(parallel_map(one, list(pts), workers))
        vol = ball_volume(n_dim, radius)
        est[i] = vol * float(vals.mean())
        err[i] = vol * float(vals.std(ddof=1)) / math.sqrt(samples)
    return MassCurve(2, k, p, np.asarray(R_list, float), est, err, samples, seed, "montecarlo")


def _disk_mass_1d(k: int, p: float, r_lo: float, r_hi: float, tol: float, workers: int, nodes_per_unit: float = 1.0) -> float:
    """int over the annulus r_lo <= |x| <= r_hi of |E^{(1,k)}1|^p, N = k = 2 only
    needs polar quadrature; unit-sized Gauss-Legendre panels resolve the
    integrand, which varies on O(1) coefficient scale."""
    gl_nodes, gl_wts = np.polynomial.legendre.leggauss(4)
    n_r = max(2, int(math.ceil((r_hi - r_lo) * nodes_per_unit)))
    edges = np.linspace(r_lo, r_hi, n_r + 1)

    def ring(args):
        lo, hi = args
        half = 0.5 * (hi - lo)
        total = 0.0
        for gr, wr in zip(gl_nodes, gl_wts):
            r = lo + half + half * gr
            n_phi = max(4, int(math.ceil(2.0 * math.pi * r * nodes_per_unit)))
            phi_edges = np.linspace(0.0, 2.0 * math.pi, n_phi + 1)
            acc_phi = 0.0
            for j in range(n_phi):
                ph_half = 0.5 * (phi_edges[j + 1] - phi_edges[j])
                c = phi_edges[j] + ph_half
                for gp, wp in zip(gl_nodes, gl_wts):
                    ang = c + ph_half * gp
                    pt = (r * math.cos(ang), r * math.sin(ang))
                    q = np.array([0.0, pt[0], pt[1]])
                    val = abs(direct_integral_1d(q, 0.0, 1.0, tol=tol).value)
                    acc_phi += wp * ph_half * val ** p
            total += wr * half * acc_phi * r
        return total

    parts = parallel_map(ring, list(zip(edges[:-1], edges[1:])), workers)
    return float(sum(parts))


def mass_curve_1d(
    k: int,
    p: float,
    R_list,
    tol: float = 1e-7,
    workers: int = 1,
) -> MassCurve:
    """Deterministic M_p(R) for the d = 1, k = 2 track (coefficient plane)."""
    if k != 2:
        raise ValueError("the deterministic track is implemented for k=2 (N=2)")
    r_sorted = sorted(float(r) for r in R_list)
    masses = {}
    total = _disk_mass_1d(k, p, 0.0, r_sorted[0], tol, workers)
    masses[r_sorted[0]] = total
    for lo, hi in zip(r_sorted[:-1], r_sorted[1:]):
        total += _disk_mass_1d(k, p, lo, hi, tol, workers)
        masses[hi] = total
    rs = np.asarray(R_list, float)
    est = np.array([masses[float(r)] for r in rs])
    return MassCurve(1, k, p, rs, est, np.zeros_like(est), 0, None, "quadrature")


def mass_curve(
    k: int,
    p: float,
    R_list,
    samples: int = 2000,
    seed: int = 0,
    d: int = 2,
    tol: float = 1e-6,
    workers: int = 1,
) -> MassCurve:
    if d == 1:
        return mass_curve_1d(k, p, R_list, tol=max(tol, 1e-9), workers=workers)
    return mass_curve_mc(k, p, R_list, samples, seed, tol=tol, workers=workers)
