"""Sublevel-window volumes, level profiles, and the reconstruction identity.

For a phase P on [0,1]^2 the window set at level mu and width c is
{xi : mu <= P(xi) <= mu + c}.  Its measure is estimated either on a dyadic
center grid (deterministic) or by Monte Carlo (unbiased, with stderr).  The
level profile beta -> |{|P - beta| <= delta0}| reconstructs the oscillatory
integral after integration against e(beta) and division by the window
normalizer sin(2*pi*delta0)/pi; that identity is the computational heart of
the upper-bound estimate and is exercised directly by the acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backends
from .basis import PhaseCoefficients
from .quadrature import direct_integral_2d
from .seeding import rng_stream

E = lambda t: np.exp(2j * np.pi * t)  # noqa: E731 - the paper-style exponential

GRID_M_DEFAULT = 10
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    method: str  # "grid" or "montecarlo"
    samples_or_resolution: int
    seed: int | None = None


@dataclass(frozen=True)
class LevelProfile:
    delta0: float
    beta_grid: np.ndarray
    values: np.ndarray
    stderrs: np.ndarray
    phase: PhaseCoefficients
    method: str
    samples_or_resolution: int
    seed: int | None = None


@dataclass(frozen=True)
class MonotonicityReport:
    change_count: int
    breakpoints: list[float]
    tolerance: float


def _budget_to_m(budget: int) -> int:
    """Grid resolution exponent whose cell count roughly matches the budget."""
    m = max(6, min(14, int(math.log2(max(budget, 2))) // 2))
    return m


def _phase_values(x: PhaseCoefficients, method: str, budget: int, seed: int):
    """Sampled P values plus the measure each sample represents."""
    if x.d != 2:
        raise ValueError("stationary-set operations require d=2 phases")
    gam = x.coef_matrix()
    if method == "grid":
        m = _budget_to_m(budget)
        vals = backends.phase_grid(gam, 2 ** m)
        return vals, 2 ** m, None
    if method == "montecarlo":
        out = np.empty(budget)
        pos = 0
        chunk = 0
        while pos < budget:
            n = min(MC_CHUNK, budget - pos)
            rng = rng_stream(seed, 0x3C, chunk)
            pts = rng.random((n, 2))
            out[pos : pos + n] = backends.phase_points(gam, pts[:, 0], pts[:, 1])
            pos += n
            chunk += 1
        return out, budget, seed
    raise ValueError(f"unknown method {method!r}")


def window_volume(
    x: PhaseCoefficients,
    mu: float,
    c: float,
    method: str = "grid",
    budget: int = 2 ** 20,
    seed: int = 0,
) -> VolumeEstimate:
    """Measure of {xi in [0,1]^2 : mu <= P(xi) <= mu + c}."""
    if c <= 0:
        raise ValueError(f"window width must be positive, got c={c}")
    if budget < 10 ** 3:
        raise ValueError(f"budget too small: {budget} < 1000")
    vals, sor, sd = _phase_values(x, method, budget, seed)
    inside = np.count_nonzero((vals >= mu) & (vals <= mu + c))
    p_hat = inside / vals.size
    stderr = 0.0 if method == "grid" else math.sqrt(p_hat * (1.0 - p_hat) / vals.size)
    return VolumeEstimate(p_hat, stderr, method, sor, sd)


def _sliding_sup(sorted_vals: np.ndarray, c: float):
    """Max count of values in a closed window [v, v+c], v ranging over data."""
    hi = np.searchsorted(sorted_vals, sorted_vals + c, side="right")
    counts = hi - np.arange(sorted_vals.size)
    i = int(np.argmax(counts))
    return float(sorted_vals[i]), int(counts[i])


def sup_window_measure(
    x: PhaseCoefficients,
    c: float,
    method: str = "grid",
    budget: int = 2 ** 20,
    seed: int = 0,
):
    """(mu*, measure) maximizing the window measure over mu.

    The optimum over real mu is attained with the window's lower edge at a
    sampled value, so a sliding window over the sorted sample is exact for
    the sampled measure; no scan resolution enters.
    """
    if c <= 0:
        raise ValueError(f"window width must be positive, got c={c}")
    vals, sor, sd = _phase_values(x, method, budget, seed)
    vals.sort()
    mu_star, count = _sliding_sup(vals, c)
    p_hat = count / vals.size
    stderr = 0.0 if method == "grid" else math.sqrt(p_hat * (1.0 - p_hat) / vals.size)
    return mu_star, VolumeEstimate(p_hat, stderr, method, sor, sd)


def level_profile(
    x: PhaseCoefficients,
    delta0: float = 0.1,
    n_beta: int = 512,
    budget: int = 2 ** 20,
    method: str = "grid",
    seed: int = 0,
) -> LevelProfile:
    """Sampled profile beta -> |{xi : beta - delta0 <= P(xi) <= beta + delta0}|."""
    if not 0.0 < delta0 < 0.5:
        raise ValueError(f"delta0 must lie in (0, 0.5), got {delta0}")
    if n_beta < 64:
        raise ValueError(f"n_beta must be >= 64, got {n_beta}")
    vals, sor, sd = _phase_values(x, method, budget, seed)
    vals.sort()
    beta = np.linspace(vals[0] - delta0, vals[-1] + delta0, n_beta)
    lo = np.searchsorted(vals, beta - delta0, side="left")
    hi = np.searchsorted(vals, beta + delta0, side="right")
    p = (hi - lo) / vals.size
    stderrs = (
        np.zeros_like(p) if method == "grid" else np.sqrt(p * (1.0 - p) / vals.size)
    )
    return LevelProfile(delta0, beta, p, stderrs, x, method, sor, sd)


def monotonicity_changes(profile: LevelProfile, tolerance: float = 1e-3) -> MonotonicityReport:
    """Count direction alternations of the profile after plateau merging.

    Movements whose total excursion stays within the merge threshold count
    as plateau; a direction is confirmed only once the values travel more
    than the threshold away from the running extremum, and the count is the
    number of confirmed up/down alternations.  The threshold is
    tolerance * max(values), floored at the sampler's quantization unit (one
    grid column, or the largest bin stderr for Monte Carlo profiles) so that
    single-quantum wiggles never register.  The profile is compactly
    supported, so the walk starts and ends at zero.
    """
    if not 0.0 <= tolerance <= 0.1:
        raise ValueError(f"tolerance must lie in [0, 0.1], got {tolerance}")
    v = np.asarray(profile.values)
    if v.size == 0:
        raise ValueError("empty profile")
    if profile.method == "grid":
        floor = 2.0 / profile.samples_or_resolution
    else:
        floor = float(np.max(profile.stderrs)) if profile.stderrs.size else 0.0
    thr = max(tolerance * float(v.max()), floor) if v.max() > 0 else 0.0
    padded = np.concatenate(([0.0], v, [0.0]))
    beta = profile.beta_grid
    changes = 0
    breakpoints: list[float] = []
    direction = 0
    run_max = run_min = padded[0]
    arg_ext = 0
    for i in range(1, padded.size):
        val = padded[i]
        if val > run_max:
            run_max = val
            if direction >= 0:
                arg_ext = i
        if val < run_min:
            run_min = val
            if direction <= 0:
                arg_ext = i
        if direction >= 0 and run_max - val > thr:
            if direction == 1:
                changes += 1
                j = min(max(arg_ext - 1, 0), beta.size - 1)
                breakpoints.append(float(beta[j]))
            direction = -1
            run_min = val
            arg_ext = i
        elif direction <= 0 and val - run_min > thr:
            if direction == -1:
                changes += 1
                j = min(max(arg_ext - 1, 0), beta.size - 1)
                breakpoints.append(float(beta[j]))
            direction = 1
            run_max = val
            arg_ext = i
    return MonotonicityReport(changes, breakpoints, tolerance)


def window_normalizer(delta0: float) -> float:
    """int_{-delta0}^{delta0} e(alpha) d alpha = sin(2*pi*delta0)/pi, nonzero for delta0 < 1/2."""
    return math.sin(2.0 * math.pi * delta0) / math.pi


def reconstruct_from_profile(profile: LevelProfile) -> complex:
    integrand = profile.values * E(profile.beta_grid)
    total = np.trapezoid(integrand, profile.beta_grid)
    return complex(total / window_normalizer(profile.delta0))


def reconstruct_stderr(profile: LevelProfile) -> float:
    """Propagated MC standard error of the reconstructed value (0 for grid)."""
    if profile.method == "grid":
        return 0.0
    dbeta = float(profile.beta_grid[1] - profile.beta_grid[0])
    var = float(np.sum((profile.stderrs * dbeta) ** 2))
    return math.sqrt(var) / abs(window_normalizer(profile.delta0))


def stationary_reconstruct(
    x: PhaseCoefficients,
    delta0: float = 0.1,
    n_beta: int = 512,
    budget: int = 2 ** 20,
    method: str = "grid",
    seed: int = 0,
) -> complex:
    """Recover int e(P) dxi from the level profile alone."""
    prof = level_profile(x, delta0, n_beta, budget, method, seed)
    return reconstruct_from_profile(prof)


def auto_n_beta(x: PhaseCoefficients, delta0: float = 0.1, step: float = 0.01) -> int:
    """Beta grid fine enough for the trapezoid rule against e(beta)."""
    span = 2.0 * x.l1() + 2.0 * delta0
    return int(min(1 << 14, max(512, math.ceil(span / step) + 1)))


def theorem1_ratio(x: PhaseCoefficients, budget: int = 2 ** 20, tol: float = 1e-8) -> float:
    """|int e(P)| divided by the maximal unit-window measure.

    The denominator is positive for every phase: some unit window among
    ceil(span)+1 many covering the range carries at least its pigeonhole
    share of the full measure.
    """
    num = abs(direct_integral_2d(x, tol=tol).value)
    _, est = sup_window_measure(x, 1.0, method="grid", budget=budget)
    return num / est.value
