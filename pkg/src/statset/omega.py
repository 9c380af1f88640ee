"""Coefficient boxes on which the extension integral stays large.

For node parameters theta_r = r/(100*lambda) and w_r' = 1/4 + r'/(2*lambda),
a box constrains the rebased expansion of the phase around (theta_r, w_r'):
the leading coefficient gamma_k lies in [lambda^k, (2*lambda)^k], the middle
gamma_k' have l1 norm at most eps*lambda^k', and gamma_0 may only wiggle by
eps around its constant term.  The box is a product of intervals in the
rebased coefficients excluding the (0,0) slot, which is determined by the
absence of a constant term in the phase; since the change of coordinates to
raw coefficients is unit-triangular, the product of interval lengths is the
exact volume of the image.

Per-slot interval lengths divide eps by the slot count of their level, so
every point of the box satisfies the l1 conditions with certainty (interval
arithmetic), at the cost of a k-dependent constant in volume; the lambda
power k(k+1)(k+2)/6 is preserved exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import PhaseCoefficients
from .quadrature import integrate_gamma_2d
from .rebase import rebase, unrebase, RebasedExpansion
from .seeding import rng_stream
from .utils import parallel_map


def theta_node(r: int, lam: float) -> float:
    return r / (100.0 * lam)


def w_node(r_prime: int, lam: float) -> float:
    return 0.25 + r_prime / (2.0 * lam)


def critical_exponent(k: int) -> int:
    """q_k = k(k+1)(k+2)/6 + 2, the divergence exponent of the mass integral."""
    return k * (k + 1) * (k + 2) // 6 + 2


def volume_power(k: int) -> int:
    """Exponent of lambda in the box volume: k(k+1)(k+2)/6."""
    return k * (k + 1) * (k + 2) // 6


def gamma_slots(k: int) -> list[tuple[int, int]]:
    """Free rebased-coefficient slots (m, l), flat order, (0,0) excluded."""
    return [(m, l) for m in range(k + 1) for l in range(k - m + 1) if (m, l) != (0, 0)]


def exponent_parity_table(k_max: int = 12) -> list[tuple[int, int, str, int]]:
    """(k, q_k, parity, k mod 4) for k = 2..k_max; reported, not asserted."""
    out = []
    for k in range(2, k_max + 1):
        qk = critical_exponent(k)
        out.append((k, qk, "even" if qk % 2 == 0 else "odd", k % 4))
    return out


@dataclass(frozen=True)
class OmegaBox:
    k: int
    lam: float
    r: int
    r_prime: int
    epsilon: float
    slots: list[tuple[int, int]]
    lo: np.ndarray
    hi: np.ndarray

    @property
    def theta(self) -> float:
        return theta_node(self.r, self.lam)

    @property
    def w(self) -> float:
        return w_node(self.r_prime, self.lam)

    @property
    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def sample_gamma(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n draws of the full gamma matrix stack, shape (n, k+1, k+1)."""
        u = rng.random((n, len(self.slots)))
        draws = self.lo[None, :] + u * (self.hi - self.lo)[None, :]
        out = np.zeros((n, self.k + 1, self.k + 1))
        for idx, (m, l) in enumerate(self.slots):
            out[:, m, l] = draws[:, idx]
        # the (0,0) slot is pinned by the absence of a constant term
        const = np.zeros(n)
        for m in range(1, self.k + 1):
            const -= out[:, m, 0] * (-self.w) ** m
        out[:, 0, 0] = const
        return out

    def sample_phases(self, n: int, rng: np.random.Generator) -> list[PhaseCoefficients]:
        gams = self.sample_gamma(n, rng)
        out = []
        for g in gams:
            exp = RebasedExpansion(
                k=self.k,
                theta=self.theta,
                w=self.w,
                gamma=tuple(g[m, : self.k - m + 1].copy() for m in range(self.k + 1)),
            )
            out.append(unrebase(exp))
        return out


def omega_box_construct(k: int, lam: float, r: int, r_prime: int, epsilon: float) -> OmegaBox:
    if lam < 4:
        raise ValueError(f"lambda must be >= 4, got {lam}")
    if not (0 <= r <= lam and 0 <= r_prime <= lam):
        raise ValueError(f"need 0 <= r, r' <= lambda, got r={r}, r'={r_prime}")
    if not 0.0 < epsilon <= 0.1:
        raise ValueError(f"epsilon must lie in (0, 0.1], got {epsilon}")
    slots = gamma_slots(k)
    lo = np.empty(len(slots))
    hi = np.empty(len(slots))
    for idx, (m, l) in enumerate(slots):
        if m == k:
            lo[idx], hi[idx] = lam ** k, (2.0 * lam) ** k
        else:
            half = 0.5 * epsilon * lam ** m / (k - m + 1)
            lo[idx], hi[idx] = -half, half
    return OmegaBox(k, float(lam), int(r), int(r_prime), float(epsilon), slots, lo, hi)


def omega_membership(
    x: PhaseCoefficients, k: int, lam: float, r: int, r_prime: int, epsilon: float
) -> bool:
    """Check the rebased-norm conditions defining the box region."""
    exp = rebase(x, theta_node(r, lam), w_node(r_prime, lam))
    lead = exp.gamma[k][0]
    if not lam ** k <= lead <= (2.0 * lam) ** k:
        return False
    for m in range(1, k):
        if np.abs(exp.gamma[m]).sum() > epsilon * lam ** m:
            return False
    if np.abs(exp.gamma[0][1:]).sum() > epsilon:
        return False
    return True


@dataclass(frozen=True)
class FieldCheckRow:
    r: int
    r_prime: int
    samples: int
    min_lam_e: float
    median_lam_e: float
    failures: int


def omega_field_check(
    k: int,
    lam: float,
    epsilon: float,
    boxes,
    samples: int,
    seed: int,
    tol: float = 1e-6,
    workers: int = 1,
) -> list[FieldCheckRow]:
    """Sample lambda*|E| over each box; the claim under test is a uniform
    positive lower bound, stable across dyadic lambda."""
    if samples < 50:
        raise ValueError(f"need samples >= 50, got {samples}")
    rows = []
    for b_idx, (r, r_prime) in enumerate(boxes):
        box = omega_box_construct(k, lam, r, r_prime, epsilon)
        rng = rng_stream(seed, 0x0F1E, b_idx)
        gams = box.sample_gamma(samples, rng)

        def one(g, _theta=box.theta, _w=box.w):
            res = integrate_gamma_2d(g, _theta, _w, tol=tol)
            return abs(res.value), res.ok

        vals = parallel_map(one, list(gams), workers)
        mags = np.array([v for v, _ in vals])
        failures = sum(0 if okf else 1 for _, okf in vals)
        rows.append(
            FieldCheckRow(
                r=int(r),
                r_prime=int(r_prime),
                samples=samples,
                min_lam_e=float(lam * mags.min()),
                median_lam_e=float(lam * np.median(mags)),
                failures=failures,
            )
        )
    return rows


DEFAULT_BOX_FRACTIONS = ((0.0, 0.0), (1.0, 1.0), (0.5, 0.5), (0.0, 1.0), (1.0, 0.0))


@dataclass(frozen=True)
class LedgerRow:
    lam: float
    n_boxes: int
    samples: int
    volume: float
    median_abs_e_p: float
    contribution: float
    min_lam_e: float
    failures: int


def divergence_ledger(
    k: int,
    p: float,
    lambda_list,
    epsilon: float,
    samples: int,
    seed: int,
    n_boxes: int = 5,
    tol: float = 1e-6,
    workers: int = 1,
) -> list[LedgerRow]:
    """Per-scale contribution (lambda+1)^2 * |box| * median |E|^p.

    Boxes sit at fixed fractions of the (r, r') range so the same relative
    geometry is probed at every lambda, and the uniform draws are keyed
    independently of lambda (common random numbers): contribution ratios
    then reflect scaling, not sampling noise.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    fractions = DEFAULT_BOX_FRACTIONS[:n_boxes]
    rows = []
    for lam in lambda_list:
        pooled = []
        failures = 0
        volume = None
        for b_idx, (fr, fw) in enumerate(fractions):
            r = int(round(fr * lam))
            r_prime = int(round(fw * lam))
            box = omega_box_construct(k, lam, r, r_prime, epsilon)
            volume = box.volume
            rng = rng_stream(seed, 0x1ED9, b_idx)
            gams = box.sample_gamma(samples, rng)

            def one(g, _theta=box.theta, _w=box.w):
                res = integrate_gamma_2d(g, _theta, _w, tol=tol)
                return abs(res.value), res.ok

            vals = parallel_map(one, list(gams), workers)
            pooled.extend(v for v, _ in vals)
            failures += sum(0 if okf else 1 for _, okf in vals)
        mags = np.array(pooled)
        med = float(np.median(mags ** p))
        rows.append(
            LedgerRow(
                lam=float(lam),
                n_boxes=len(fractions),
                samples=samples,
                volume=float(volume),
                median_abs_e_p=med,
                contribution=float((lam + 1) ** 2 * volume * med),
                min_lam_e=float(lam * mags.min()),
                failures=failures,
            )
        )
    return rows


def ledger_checks(rows: list[LedgerRow], k: int, p: float) -> dict:
    """Flatness at the critical exponent, power-law decay above it.

    At p = q_k the contributions must agree within a factor of 4 across the
    table.  Away from q_k the expected scaling is lambda^(q_k - p); each row
    is compared against the first with a factor-4 tolerance on the expected
    ratio.
    """
    qk = critical_exponent(k)
    contribs = np.array([row.contribution for row in rows])
    lams = np.array([row.lam for row in rows])
    out: dict = {"q_k": qk, "p": p}
    if math.isclose(p, qk):
        ratio = float(contribs.max() / contribs.min())
        out["mode"] = "flat"
        out["max_over_min"] = ratio
        out["ok"] = ratio <= 4.0
        return out
    out["mode"] = "decay"
    ok = True
    ratios = []
    for i in range(1, len(rows)):
        expected = (lams[i] / lams[0]) ** (p - qk)
        measured = float(contribs[0] / contribs[i])
        ratios.append({"lam": float(lams[i]), "expected": expected, "measured": measured})
        if not expected / 4.0 <= measured <= expected * 4.0:
            ok = False
    out["ratios"] = ratios
    out["ok"] = ok
    return out
