"""Direct evaluation of oscillatory integrals; the oracle for everything else.

All integrands are exp(2*pi*i*q) with polynomial q.  Panels are refined
until the exact coefficient-based bound on the range of q over each panel
is below pi/4 (in q units), then whole sweeps at successively halved
thresholds provide a Richardson error estimate against the requested
tolerance.  No oscillation-specific rule (Filon, Levin, asymptotics) is
used: the baseline must stay rule-agnostic so it can serve as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backends
from .basis import PhaseCoefficients

PANEL_CAP = 2 ** 20
SPLIT_DEFAULT = math.pi / 4
_MAX_SWEEPS = 24


@dataclass(frozen=True)
class QuadResult:
    value: complex
    est_error: float
    panels: int
    ok: bool = True


def _sweeps(run_one, tol, span):
    """Run sweeps at split = pi/2, pi/4, pi/8, ... until Richardson settles."""
    split = 2.0 * SPLIT_DEFAULT
    prev_val, _, _ = run_one(split)
    floor = 4e-16 * max(1.0, span)
    err = math.inf
    for _ in range(_MAX_SWEEPS):
        split *= 0.5
        val, panels, ok = run_one(split)
        err = abs(val - prev_val)
        if not ok:
            return QuadResult(val, max(err, floor), panels, ok=False)
        if err <= tol and split <= SPLIT_DEFAULT:
            return QuadResult(val, max(err, floor), panels, ok=True)
        prev_val = val
    return QuadResult(val, max(err, floor), panels, ok=False)


def direct_integral_1d(q_coeffs, a: float, b: float, tol: float = 1e-9) -> QuadResult:
    """Integrate e(q(v)) over [a, b]; ``q_coeffs[i]`` multiplies v^i."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if tol < 1e-12:
        raise ValueError(f"tol must be >= 1e-12, got {tol}")
    coefs = np.asarray(q_coeffs, dtype=float)

    def run_one(split):
        re, im, panels, ok = backends.osc1d(coefs, float(a), float(b), split, PANEL_CAP)
        return complex(re, im), panels, ok

    return _sweeps(run_one, tol, b - a)


def integrate_gamma_2d(gam: np.ndarray, theta: float, w: float, tol: float = 1e-8) -> QuadResult:
    """Integrate e(P) over [0,1]^2 with P given by a sheared gamma expansion.

    ``gam[m, j]`` is the xi2^j coefficient of gamma_m in
    P = sum_m gamma_m(xi2) (xi1 + theta*xi2 - w)^m; theta = w = 0 is the
    plain tensor integral.  The inner xi1 integral per outer panel node is
    the 1-D rule above.
    """
    gam = np.asarray(gam, dtype=float)

    def run_one(split):
        re, im, panels, ok = backends.osc2d(gam, float(theta), float(w), split, PANEL_CAP)
        return complex(re, im), panels, ok

    return _sweeps(run_one, tol, 1.0)


def direct_integral_2d(x: PhaseCoefficients, tol: float = 1e-8) -> QuadResult:
    """Integrate e(P(xi; x)) over the unit square (d = 2)."""
    if x.d != 2:
        raise ValueError("direct_integral_2d requires d=2")
    if tol < 1e-10:
        raise ValueError(f"tol must be >= 1e-10, got {tol}")
    return integrate_gamma_2d(x.coef_matrix(), 0.0, 0.0, tol)


IKROMOV_A = -0.5
IKROMOV_B = 0.75


def ikromov_check(
    k: int,
    A_list,
    epsilon: float,
    trials: int,
    seed: int,
    tol: float = 1e-8,
) -> np.ndarray:
    """Sample the normalized moduli |int e(q)| * alpha_k^(1/k) on [a, b].

    Phases q(v) = alpha_k v^k + ... + alpha_1 v are drawn with
    alpha_k in [A^k, (2A)^k] and |alpha_j| <= eps*A^j.  Per row:
    (A, epsilon, trial, product).  The product stabilizes for large A and
    small eps; the caller checks spread, no closed-form constant is assumed.
    """
    if any(a < 4 for a in A_list):
        raise ValueError("A values must be >= 4")
    if epsilon > 0.1:
        raise ValueError("epsilon must be <= 0.1")
    from .seeding import rng_stream

    rows = np.empty((len(A_list) * trials, 4))
    pos = 0
    for ia, a_val in enumerate(A_list):
        rng = rng_stream(seed, 0x1C0B, ia)
        for t in range(trials):
            coefs = np.zeros(k + 1)
            coefs[k] = rng.uniform(a_val ** k, (2 * a_val) ** k)
            for j in range(1, k):
                coefs[j] = rng.uniform(-epsilon * a_val ** j, epsilon * a_val ** j)
            q = np.concatenate(([0.0], coefs[1:]))
            res = direct_integral_1d(q, IKROMOV_A, IKROMOV_B, tol=tol)
            rows[pos] = (a_val, epsilon, t, abs(res.value) * coefs[k] ** (1.0 / k))
            pos += 1
    return rows
