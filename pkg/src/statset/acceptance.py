"""Acceptance suite: every exit criterion as a callable check.

Each criterion returns a CriterionResult with a pass flag and a one-line
detail; ``run_acceptance`` executes a subset and prints one line per
criterion.  Tolerances are pinned here, not configurable.  Criterion 10's
p=5 branch asserts the stated decay-ratio constant 0.7 even though the
asymptotically exact ratio is 2^(-1/2) = 0.7071; it is expected to fail and
is reported as such (see the project notes for the analysis).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basis import PhaseCoefficients, basis_dimension, phase
from .dualbox import build_delta_tuple, dual_bound
from .masscurve import mass_curve_1d
from .omega import (
    DEFAULT_BOX_FRACTIONS,
    critical_exponent,
    divergence_ledger,
    ledger_checks,
    omega_box_construct,
    omega_field_check,
    omega_membership,
    volume_power,
)
from .quadrature import direct_integral_2d
from .rebase import rebase, rescale
from .seeding import rng_stream
from .stationary import (
    auto_n_beta,
    level_profile,
    monotonicity_changes,
    reconstruct_from_profile,
    sup_window_measure,
    theorem1_ratio,
)

BASE_SEED = 42


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    artifacts: dict = field(default_factory=dict)


def _random_phase(rng, k: int, bound: float = 5.0) -> PhaseCoefficients:
    return phase(2, k, rng.uniform(-bound, bound, basis_dimension(2, k)))


def criterion_1(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Reconstruction identity on 200 seeded random degree-3 phases."""
    rng = rng_stream(seed, 1)
    worst = 0.0
    for _ in range(200):
        x = _random_phase(rng, 3)
        prof = level_profile(x, 0.1, auto_n_beta(x), 2 ** 20, "grid")
        recon = reconstruct_from_profile(prof)
        direct = direct_integral_2d(x, tol=1e-8).value
        worst = max(worst, abs(recon - direct))
    ok = worst <= 0.02
    return CriterionResult(1, "reconstruction-identity", ok, f"max |recon - direct| = {worst:.4e} (allowed 0.02)")


def criterion_2(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Closed forms for the slope-10.5 linear phase."""
    x = phase(2, 2, [0.0, 0.0, 0.0, 10.5, 0.0])
    target = 2.0 / (21.0 * math.pi)
    mag = abs(direct_integral_2d(x, tol=1e-9).value)
    _, est = sup_window_measure(x, 1.0, method="grid", budget=2 ** 20)
    ratio = theorem1_ratio(x)
    checks = [
        (abs(mag - target) <= 1e-3, f"|I|={mag:.6f} vs {target:.6f}"),
        (abs(est.value - 1.0 / 10.5) <= 2.0 * 2.0 ** -10, f"sup={est.value:.6f} vs {1/10.5:.6f}"),
        (abs(ratio - 0.3183) <= 0.01, f"ratio={ratio:.4f} vs 0.3183"),
    ]
    ok = all(c for c, _ in checks)
    return CriterionResult(2, "closed-forms", ok, "; ".join(d for _, d in checks))


def criterion_3(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Empirical constant: ratio finite with max <= 10 over 500 phases."""
    rng = rng_stream(seed, 3)
    ratios = []
    for _ in range(500):
        x = _random_phase(rng, 3)
        ratios.append(theorem1_ratio(x))
    arr = np.array(ratios)
    ok = bool(np.all(np.isfinite(arr)) and arr.max() <= 10.0)
    artifacts = {}
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "theorem1_ratio_max.json"
        path.write_text(
            json.dumps(
                {
                    "phases": 500,
                    "degree": 3,
                    "coeff_bound": 5.0,
                    "seed": seed,
                    "max_ratio": float(arr.max()),
                    "median_ratio": float(np.median(arr)),
                    "note": "empirical observation, no sharpness claimed",
                },
                indent=1,
                sort_keys=True,
            )
            + "\n"
        )
        artifacts["ratio_max"] = str(path)
    return CriterionResult(3, "empirical-ratio-bound", ok, f"max ratio {arr.max():.4f}, median {np.median(arr):.4f}", artifacts)


def criterion_4(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Monotonicity-change cap and beta-grid refinement stability."""
    rng = rng_stream(seed, 4)
    counts = np.empty((500, 2), dtype=int)
    for i in range(500):
        x = _random_phase(rng, 3)
        p1 = level_profile(x, 0.1, 512, 2 ** 20, "grid")
        p2 = level_profile(x, 0.1, 1024, 2 ** 20, "grid")
        counts[i, 0] = monotonicity_changes(p1).change_count
        counts[i, 1] = monotonicity_changes(p2).change_count
    max_count = int(counts.max())
    stable = float(np.mean(counts[:, 0] == counts[:, 1]))
    ok = max_count <= 8 and stable >= 0.95
    return CriterionResult(4, "monotonicity-cap", ok, f"max count {max_count} (<=8), stable fraction {stable:.3f} (>=0.95)")


def criterion_5(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Rebase reassembly and rescale identity residuals."""
    rng = rng_stream(seed, 5)
    worst_re = 0.0
    worst_sc = 0.0
    for _ in range(10):
        k = int(rng.integers(2, 4))
        x = _random_phase(rng, k)
        theta = rng.uniform(-0.01, 0.01)
        w = rng.uniform(0.25, 0.75)
        exp = rebase(x, theta, w)
        big_k = 2 ** int(rng.integers(0, 4))
        xs = rescale(x, big_k)
        from .basis import eval_phase

        for _ in range(100):
            xi = rng.uniform(0.0, 1.0, 2)
            worst_re = max(worst_re, abs(eval_phase(x, xi) - exp.reassemble(xi)) / (1.0 + x.l1()))
            xi_k = np.array([xi[0] / big_k, xi[1]])
            worst_sc = max(worst_sc, abs(eval_phase(x, xi_k) - eval_phase(xs, (big_k * xi_k[0], xi_k[1]))) / (1.0 + x.l1()))
    ok = worst_re <= 1e-9 and worst_sc <= 1e-12
    return CriterionResult(5, "rebase-rescale-exactness", ok, f"reassembly {worst_re:.2e} (<=1e-9), rescale {worst_sc:.2e} (<=1e-12)")


def criterion_6(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Box volume scaling across lambda, exact arithmetic."""
    details = []
    ok = True
    for k in (2, 3):
        ratios = [
            omega_box_construct(k, lam, 0, 0, 0.01).volume / lam ** volume_power(k)
            for lam in (8, 16, 32)
        ]
        spread = max(ratios) / min(ratios)
        ok = ok and spread < 2.0
        details.append(f"k={k}: spread {spread:.6f}")
    return CriterionResult(6, "box-volume-law", ok, "; ".join(details))


def criterion_7(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Disjointness: samples of one box never pass another box's membership."""
    rng = rng_stream(seed, 7)
    lam, k, eps = 16, 2, 0.01
    violations = 0
    for pair in range(20):
        ra, rpa = int(rng.integers(0, lam + 1)), int(rng.integers(0, lam + 1))
        while True:
            rb, rpb = int(rng.integers(0, lam + 1)), int(rng.integers(0, lam + 1))
            if (rb, rpb) != (ra, rpa):
                break
        box = omega_box_construct(k, lam, ra, rpa, eps)
        for x in box.sample_phases(10 ** 4, rng_stream(seed, 7, pair)):
            if omega_membership(x, k, lam, rb, rpb, eps):
                violations += 1
    ok = violations == 0
    return CriterionResult(7, "box-disjointness", ok, f"{violations} violations over 20 pairs x 1e4 samples")


def criterion_8(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Field lower bound: min lambda |E| positive and lambda-stable."""
    k, eps = 2, 0.01
    mins = []
    details = []
    for lam in (8, 16, 32):
        boxes = [(int(round(f * lam)), int(round(g * lam))) for f, g in DEFAULT_BOX_FRACTIONS]
        rows = omega_field_check(k, lam, eps, boxes, 100, seed, tol=1e-6, workers=workers)
        m = min(r.min_lam_e for r in rows)
        mins.append(m)
        details.append(f"lam={lam}: min {m:.4f}")
        if any(r.failures for r in rows):
            return CriterionResult(8, "field-lower-bound", False, "quadrature failures")
    spread = max(mins) / min(mins)
    ok = min(mins) > 0.0 and spread < 2.0
    return CriterionResult(8, "field-lower-bound", ok, "; ".join(details) + f"; spread {spread:.3f} (<2)")


def criterion_9(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Ledger flatness at q_k, lambda-fold decay at q_k + 1."""
    lambdas = [8, 16, 32]
    parts = []
    ok = True
    for k, p, samples in ((2, 6.0, 24), (2, 7.0, 24), (3, 12.0, 16)):
        rows = divergence_ledger(k, p, lambdas, 0.01, samples, seed, n_boxes=5, tol=1e-5, workers=workers)
        checks = ledger_checks(rows, k, p)
        ok = ok and checks["ok"]
        if checks["mode"] == "flat":
            parts.append(f"k={k} p={p:g}: max/min {checks['max_over_min']:.3f}")
        else:
            worst = max(
                max(c["measured"] / c["expected"], c["expected"] / c["measured"])
                for c in checks["ratios"]
            )
            parts.append(f"k={k} p={p:g}: decay within factor {worst:.2f} of lambda-fold")
    return CriterionResult(9, "critical-exponent-ledger", ok, "; ".join(parts))


def criterion_10(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """1-D track: log-flat increments at p=4, geometric decay at p=5.

    The p=5 branch asserts the stated ratio bound 0.7; the true asymptotic
    ratio is 2^(-1/2) = 0.70711, so this branch fails by design of the
    stated constant.  Both measured tables are reported.
    """
    rs = [4, 8, 16, 32, 64]
    c4 = mass_curve_1d(2, 4.0, rs, workers=workers)
    inc4 = np.diff(c4.estimates)
    flat = float(inc4.max() / inc4.min())
    ok4 = flat <= 1.3
    c5 = mass_curve_1d(2, 5.0, rs, workers=workers)
    inc5 = np.diff(c5.estimates)
    ratios = inc5[1:] / inc5[:-1]
    ok5 = bool(np.all(ratios <= 0.7))
    detail = (
        f"p=4 increment max/min {flat:.4f} (<=1.3); "
        f"p=5 ratios {np.array2string(ratios, precision=4)} (required <=0.7; "
        f"asymptotic value is 2^-0.5 = 0.7071, so this bound is not attainable)"
    )
    return CriterionResult(10, "one-dim-track", ok4 and ok5, detail, {"p4_increments": inc4.tolist(), "p5_ratios": ratios.tolist()})


def criterion_11(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Determinant factorization on 100 random nondegenerate tuples."""
    rng = rng_stream(seed, 11)
    worst = 0.0
    tested = 0
    for k in (2, 3):
        while tested < (50 if k == 2 else 100):
            tup = build_delta_tuple(k, 8, 2 ** -6, rng)
            res = dual_bound(tup)
            if res.degenerate:
                continue
            tested += 1
            worst = max(worst, abs(abs(res.det_direct) - abs(res.det_blocks)) / abs(res.det_direct))
    ok = worst <= 1e-9
    return CriterionResult(11, "determinant-factorization", ok, f"worst relative mismatch {worst:.2e} (<=1e-9)")


def criterion_12(workers: int = 2, outdir: Path | None = None, seed: int = BASE_SEED) -> CriterionResult:
    """Byte-identical outputs for identical config at any worker count."""
    import tempfile

    from .cli import main as cli_main

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        outputs = []
        for run, w in ((0, 1), (1, 2), (2, 1)):
            out = tmp / f"ledger_{run}.csv"
            code = cli_main(
                [
                    "ledger", "--k", "2", "--p", "6", "--lambdas", "8,16",
                    "--samples", "6", "--n-boxes", "2", "--tol", "1e-4",
                    "--seed", str(seed), "--workers", str(w), "--out", str(out),
                ]
            )
            if code not in (0,):
                return CriterionResult(12, "determinism", False, f"ledger run exited {code}")
            outputs.append(out.read_bytes())
        mc_outputs = []
        for run, w in ((0, 1), (1, 2)):
            out = tmp / f"profile_{run}.csv"
            code = cli_main(
                [
                    "profile", "--coeffs", "1,0.5,-2,3,1", "--d", "2", "--k", "2",
                    "--method", "montecarlo", "--budget", "200000", "--n-beta", "128",
                    "--seed", str(seed), "--workers", str(w), "--out", str(out),
                ]
            )
            if code != 0:
                return CriterionResult(12, "determinism", False, f"profile run exited {code}")
            mc_outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2] and mc_outputs[0] == mc_outputs[1]
    return CriterionResult(12, "determinism", ok, "ledger and montecarlo profile outputs byte-identical across reruns and worker counts")


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_acceptance(only=None, workers: int = 2, outdir: Path | str = "artifacts", seed: int = BASE_SEED):
    outdir = Path(outdir)
    results = []
    for number, fn in sorted(CRITERIA.items()):
        if only and number not in only:
            continue
        t0 = time.perf_counter()
        res = fn(workers=workers, outdir=outdir, seed=seed)
        dt = time.perf_counter() - t0
        mark = "PASS" if res.passed else "FAIL"
        print(f"[{mark}] criterion {number:2d} {res.name} ({dt:.1f}s): {res.detail}")
        results.append(res)
    outdir.mkdir(parents=True, exist_ok=True)
    report = {
        "seed": seed,
        "results": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
    }
    (outdir / "acceptance_report.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    return results
