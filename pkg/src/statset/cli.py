"""Command-line front end.

Subcommands: eval, identity-check, profile, monotonicity, geometry, omega,
ledger, mass, ikromov, dual-bound, accept.  Flags common to all:
--config PATH (JSON with the same keys as the flags, unknown keys rejected),
--seed, --workers, --out, --format.  Exit codes: 0 all assertions met,
1 config/usage error, 2 assertion failure, 3 quadrature budget failure.

Outputs are deterministic for a fixed config and seed at any worker count;
the config and seed are echoed in '#' header lines of every file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .basis import basis_dimension, phase, phase_from_json
from .dualbox import build_delta_tuple, dual_bound
from .gridset import (
    best_window_gridset,
    lagrange_window_check,
    projection_intervals,
    shifted_core,
    strip_census,
)
from .masscurve import mass_curve
from .omega import (
    divergence_ledger,
    ledger_checks,
    omega_box_construct,
    omega_field_check,
    omega_membership,
)
from .quadrature import direct_integral_1d, direct_integral_2d, ikromov_check
from .report import RunReport, emit_table
from .seeding import rng_stream
from .stationary import (
    auto_n_beta,
    level_profile,
    monotonicity_changes,
    reconstruct_from_profile,
    reconstruct_stderr,
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _parse_list(text: str, cast=float) -> list:
    return [cast(v) for v in str(text).replace(";", ",").split(",") if v != ""]


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for chunk in str(text).split(";"):
        if not chunk:
            continue
        a, b = chunk.split(",")
        out.append((int(a), int(b)))
    return out


def _load_phase(args):
    if getattr(args, "phase_json", None):
        return phase_from_json(Path(args.phase_json).read_text())
    if getattr(args, "coeffs", None) is not None:
        return phase(args.d, args.k, _parse_list(args.coeffs))
    raise CliError("provide --phase-json or --coeffs with --d/--k")


def _meta(args, **extra) -> dict:
    skip = {"config", "workers", "out", "func", "pbm", "phase_json"}
    meta = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in skip and v is not None and not callable(v)
    }
    meta.update(extra)
    return meta


def _out_path(args, default_name: str) -> Path:
    return Path(args.out) if args.out else Path(default_name)


# ---------------------------- subcommand handlers ----------------------------


def _cmd_eval(args, report: RunReport):
    x = _load_phase(args)
    if x.d == 1:
        res = direct_integral_1d(x.coef_1d(), 0.0, 1.0, tol=args.tol)
    else:
        res = direct_integral_2d(x, tol=args.tol)
    if not res.ok:
        report.budget_failures += 1
    print(_fmt_complex(res.value))
    if args.out:
        emit_table(
            args.out,
            _meta(args),
            ["re", "im", "est_error", "panels", "ok"],
            [(res.value.real, res.value.imag, res.est_error, res.panels, res.ok)],
            args.format,
        )
        report.artifacts.append(str(args.out))
    report.record("eval", True, _fmt_complex(res.value))


def _cmd_identity_check(args, report: RunReport):
    n_dim = basis_dimension(2, args.degree)
    rng = rng_stream(args.seed, 0x1DC)
    rows = []
    worst = 0.0
    for i in range(args.count):
        x = phase(2, args.degree, rng.uniform(-args.coeff_bound, args.coeff_bound, n_dim))
        prof = level_profile(x, args.delta0, auto_n_beta(x, args.delta0), args.budget, args.method, args.seed + i)
        recon = reconstruct_from_profile(prof)
        err = reconstruct_stderr(prof)
        direct = direct_integral_2d(x, tol=1e-8)
        if not direct.ok:
            report.budget_failures += 1
        dev = abs(recon - direct.value)
        allowed = 0.02 + 3.0 * err
        worst = max(worst, dev)
        rows.append((i, recon.real, recon.imag, direct.value.real, direct.value.imag, dev, allowed, dev <= allowed))
    out = _out_path(args, "identity_check.csv")
    emit_table(out, _meta(args), ["index", "recon_re", "recon_im", "direct_re", "direct_im", "deviation", "allowed", "ok"], rows, args.format)
    report.artifacts.append(str(out))
    report.record("identity-deviation", all(r[-1] for r in rows), f"max deviation {worst:.3e}")


def _cmd_profile(args, report: RunReport):
    x = _load_phase(args)
    n_beta = args.n_beta or auto_n_beta(x, args.delta0)
    prof = level_profile(x, args.delta0, n_beta, args.budget, args.method, args.seed)
    rows = list(zip(prof.beta_grid, prof.values, prof.stderrs))
    out = _out_path(args, "profile.csv")
    emit_table(out, _meta(args, delta0=prof.delta0, n_beta=n_beta), ["beta", "value", "stderr"], rows, args.format)
    report.artifacts.append(str(out))
    report.record("profile", True, f"{n_beta} bins, support [{prof.beta_grid[0]:.3g}, {prof.beta_grid[-1]:.3g}]")


def _cmd_monotonicity(args, report: RunReport):
    x = _load_phase(args)
    n_beta = args.n_beta or auto_n_beta(x, args.delta0)
    prof = level_profile(x, args.delta0, n_beta, args.budget, args.method, args.seed)
    rep = monotonicity_changes(prof, args.tolerance)
    rows = [(i, b) for i, b in enumerate(rep.breakpoints)]
    out = _out_path(args, "monotonicity.csv")
    emit_table(out, _meta(args, change_count=rep.change_count), ["index", "breakpoint"], rows, args.format)
    report.artifacts.append(str(out))
    report.record("monotonicity", True, f"{rep.change_count} changes")


def _cmd_geometry(args, report: RunReport):
    x = _load_phase(args)
    mu, grid = best_window_gridset(x, 1.0, args.m)
    shift = args.shift_frac * grid.measure
    core = shifted_core(grid, shift, x.k)
    census = strip_census(grid, args.K)
    intervals = projection_intervals(grid)
    lag = lagrange_window_check(x, core, args.delta, mu)
    rows = [
        ("mu_star", mu),
        ("measure", grid.measure),
        ("core_measure", core.measure),
        ("core_shift", shift),
        ("strip_hits", census.hit_count),
        ("projection_intervals", len(intervals)),
        ("lagrange_max_dev", lag),
    ]
    out = _out_path(args, "geometry.csv")
    emit_table(out, _meta(args), ["quantity", "value"], rows, args.format)
    report.artifacts.append(str(out))
    if args.pbm:
        grid.to_pbm(args.pbm)
        report.artifacts.append(str(args.pbm))
    report.record("geometry", True, f"measure {grid.measure:.4g}, {census.hit_count} strips hit")


def _cmd_omega(args, report: RunReport):
    if args.action == "construct":
        box = omega_box_construct(args.k, args.lam, args.r, args.r_prime, args.epsilon)
        rows = [(m, l, lo, hi) for (m, l), lo, hi in zip(box.slots, box.lo, box.hi)]
        out = _out_path(args, "omega_box.csv")
        emit_table(out, _meta(args, volume=box.volume, theta=box.theta, w=box.w), ["slot_m", "slot_l", "lo", "hi"], rows, args.format)
        report.artifacts.append(str(out))
        report.record("omega-construct", True, f"volume {box.volume:.6g}")
    elif args.action == "membership":
        x = _load_phase(args)
        member = omega_membership(x, args.k, args.lam, args.r, args.r_prime, args.epsilon)
        print("member" if member else "not-member")
        report.record("omega-membership", True, str(member))
    elif args.action == "field":
        boxes = _parse_pairs(args.boxes)
        rows_fc = omega_field_check(args.k, args.lam, args.epsilon, boxes, args.samples, args.seed, tol=args.tol, workers=args.workers)
        failures = sum(r.failures for r in rows_fc)
        if failures:
            report.budget_failures += failures
        rows = [(r.r, r.r_prime, r.samples, r.min_lam_e, r.median_lam_e, r.failures) for r in rows_fc]
        out = _out_path(args, "omega_field.csv")
        emit_table(out, _meta(args), ["r", "r_prime", "samples", "min_lam_e", "median_lam_e", "failures"], rows, args.format)
        report.artifacts.append(str(out))
        min_all = min(r.min_lam_e for r in rows_fc)
        report.record("omega-field", min_all > 0.0, f"min lambda|E| = {min_all:.4g}")
    else:
        raise CliError(f"unknown omega action {args.action!r}")


def _cmd_ledger(args, report: RunReport):
    lambdas = _parse_list(args.lambdas, float)
    rows_l = divergence_ledger(args.k, args.p, lambdas, args.epsilon, args.samples, args.seed, n_boxes=args.n_boxes, tol=args.tol, workers=args.workers)
    failures = sum(r.failures for r in rows_l)
    if failures:
        report.budget_failures += failures
    checks = ledger_checks(rows_l, args.k, args.p)
    rows = [
        (r.lam, r.n_boxes, r.samples, r.volume, r.median_abs_e_p, r.contribution, r.min_lam_e, r.failures)
        for r in rows_l
    ]
    out = _out_path(args, "ledger.csv")
    emit_table(
        out,
        _meta(args, q_k=checks["q_k"], mode=checks["mode"]),
        ["lambda", "n_boxes", "samples", "volume", "median_abs_E_p", "contribution", "min_lam_e", "failures"],
        rows,
        args.format,
    )
    report.artifacts.append(str(out))
    if checks["mode"] == "flat":
        detail = f"max/min contribution = {checks['max_over_min']:.3f}"
    else:
        detail = "; ".join(f"lam={c['lam']:g}: measured {c['measured']:.3g} vs expected {c['expected']:.3g}" for c in checks["ratios"])
    report.record(f"ledger-{checks['mode']}", checks["ok"], detail)


def _cmd_mass(args, report: RunReport):
    rs = _parse_list(args.R_list, float)
    curve = mass_curve(args.k, args.p, rs, samples=args.samples, seed=args.seed, d=args.d, tol=args.tol, workers=args.workers)
    rows = list(zip(curve.R_values, curve.estimates, curve.stderrs))
    out = _out_path(args, "mass.csv")
    emit_table(out, _meta(args, method=curve.method), ["scale", "value", "stderr"], rows, args.format)
    report.artifacts.append(str(out))
    report.record("mass", True, f"M({rs[-1]:g}) = {curve.estimates[-1]:.6g}")


def _cmd_ikromov(args, report: RunReport):
    a_list = _parse_list(args.A_list, float)
    table = ikromov_check(args.k, a_list, args.epsilon, args.trials, args.seed, tol=args.tol)
    out = _out_path(args, "ikromov.csv")
    emit_table(out, _meta(args), ["A", "epsilon", "trial", "product"], [tuple(r) for r in table], args.format)
    report.artifacts.append(str(out))
    spreads = []
    for a_val in a_list:
        prods = table[table[:, 0] == a_val, 3]
        spreads.append((prods.max() - prods.min()) / np.median(prods))
    report.record("ikromov", True, "relative spreads " + ", ".join(f"{s:.4f}" for s in spreads))


def _cmd_dual_bound(args, report: RunReport):
    rng = rng_stream(args.seed, 0xD0A1)
    rows = []
    worst = 0.0
    for i in range(args.count):
        tup = build_delta_tuple(args.k, args.K, args.delta, rng)
        res = dual_bound(tup)
        rel = (
            abs(abs(res.det_direct) - abs(res.det_blocks)) / abs(res.det_direct)
            if not res.degenerate
            else 0.0
        )
        worst = max(worst, rel)
        rows.append((i, res.bound, res.det_direct, res.det_blocks, rel, res.degenerate))
    out = _out_path(args, "dual_bound.csv")
    emit_table(out, _meta(args), ["index", "bound", "det_direct", "det_blocks", "rel_mismatch", "degenerate"], rows, args.format)
    report.artifacts.append(str(out))
    report.record("dual-bound-factorization", worst <= 1e-9, f"worst relative mismatch {worst:.3e}")


def _cmd_accept(args, report: RunReport):
    from . import acceptance

    only = set(_parse_list(args.only, int)) if args.only else None
    outdir = Path(args.out) if args.out else Path("artifacts")
    results = acceptance.run_acceptance(only=only, workers=args.workers, outdir=outdir, seed=args.seed)
    for res in results:
        report.record(f"criterion-{res.number:02d} {res.name}", res.passed, res.detail)
    report.artifacts.append(str(outdir))


# ------------------------------- parser wiring -------------------------------


def _add_common(sp, out_default=True):
    sp.add_argument("--config", type=str, default=None, help="JSON config file")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_phase_opts(sp):
    sp.add_argument("--phase-json", type=str, default=None)
    sp.add_argument("--coeffs", type=str, default=None)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)


def build_parser() -> _Parser:
    parser = _Parser(prog="statset", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("eval", help="extension-operator value at a coefficient point")
    _add_common(sp)
    _add_phase_opts(sp)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("identity-check", help="profile reconstruction vs direct quadrature")
    _add_common(sp)
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--coeff-bound", type=float, default=5.0)
    sp.add_argument("--delta0", type=float, default=0.1)
    sp.add_argument("--method", choices=("grid", "montecarlo"), default="grid")
    sp.add_argument("--budget", type=int, default=2 ** 20)
    sp.set_defaults(func=_cmd_identity_check)

    sp = sub.add_parser("profile", help="level profile of a phase")
    _add_common(sp)
    _add_phase_opts(sp)
    sp.add_argument("--delta0", type=float, default=0.1)
    sp.add_argument("--n-beta", type=int, default=None)
    sp.add_argument("--budget", type=int, default=2 ** 20)
    sp.add_argument("--method", choices=("grid", "montecarlo"), default="grid")
    sp.set_defaults(func=_cmd_profile)

    sp = sub.add_parser("monotonicity", help="monotonicity-change count of a level profile")
    _add_common(sp)
    _add_phase_opts(sp)
    sp.add_argument("--delta0", type=float, default=0.1)
    sp.add_argument("--n-beta", type=int, default=None)
    sp.add_argument("--budget", type=int, default=2 ** 20)
    sp.add_argument("--method", choices=("grid", "montecarlo"), default="grid")
    sp.add_argument("--tolerance", type=float, default=1e-3)
    sp.set_defaults(func=_cmd_monotonicity)

    sp = sub.add_parser("geometry", help="stationary-set grid diagnostics")
    _add_common(sp)
    _add_phase_opts(sp)
    sp.add_argument("--m", type=int, default=10)
    sp.add_argument("--K", type=int, default=16)
    sp.add_argument("--delta", type=float, default=2 ** -5)
    sp.add_argument("--shift-frac", type=float, default=0.01)
    sp.add_argument("--pbm", type=str, default=None)
    sp.set_defaults(func=_cmd_geometry)

    sp = sub.add_parser("omega", help="coefficient boxes: construct / membership / field")
    _add_common(sp)
    _add_phase_opts(sp)
    sp.add_argument("--action", choices=("construct", "membership", "field"), default="construct")
    sp.add_argument("--lam", type=float, default=8.0)
    sp.add_argument("--r", type=int, default=0)
    sp.add_argument("--r-prime", type=int, default=0)
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--boxes", type=str, default="0,0")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=_cmd_omega)

    sp = sub.add_parser("ledger", help="per-scale divergence contributions")
    _add_common(sp)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--p", type=float, default=6.0)
    sp.add_argument("--lambdas", type=str, default="8,16,32")
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--samples", type=int, default=24)
    sp.add_argument("--n-boxes", type=int, default=5)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.set_defaults(func=_cmd_ledger)

    sp = sub.add_parser("mass", help="L^p mass over balls of growing radius")
    _add_common(sp)
    sp.add_argument("--d", type=int, choices=(1, 2), default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--p", type=float, default=6.0)
    sp.add_argument("--R-list", type=str, default="4,8,16,32,64")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=_cmd_mass)

    sp = sub.add_parser("ikromov", help="normalized 1-D integral stabilization table")
    _add_common(sp)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--A-list", type=str, default="8,16,32")
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=_cmd_ikromov)

    sp = sub.add_parser("dual-bound", help="determinant factorization on random tuples")
    _add_common(sp)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--K", type=int, default=8)
    sp.add_argument("--delta", type=float, default=2 ** -6)
    sp.add_argument("--count", type=int, default=100)
    sp.set_defaults(func=_cmd_dual_bound)

    sp = sub.add_parser("accept", help="run the acceptance suite")
    _add_common(sp)
    sp.add_argument("--only", type=str, default=None, help="comma-separated criterion numbers")
    sp.set_defaults(func=_cmd_accept)

    return parser


def _apply_config(parser: _Parser, argv: list[str]) -> list[str]:
    """Merge a JSON config as subparser defaults; CLI flags still win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise CliError("--config needs a path")
    path = argv[idx + 1]
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object")
    sub_from_cfg = cfg.pop("subcommand", None)
    if sub_from_cfg and (not argv or argv[0].startswith("-")):
        argv = [sub_from_cfg] + argv
    sub_name = argv[0] if argv and not argv[0].startswith("-") else None
    if sub_from_cfg and sub_name and sub_from_cfg != sub_name:
        raise CliError(f"config subcommand {sub_from_cfg!r} conflicts with {sub_name!r}")
    sub_actions = next(
        a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
    )
    if sub_name not in sub_actions.choices:
        raise CliError(f"unknown subcommand {sub_name!r}")
    sp = sub_actions.choices[sub_name]
    known = {a.dest for a in sp._actions}
    unknown = set(cfg) - known
    if unknown:
        raise CliError(f"unknown config keys: {sorted(unknown)}")
    sp.set_defaults(**cfg)
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        report = RunReport(config={k: v for k, v in vars(args).items() if not callable(v)})
        t0 = time.perf_counter()
        args.func(args, report)
        report.wall_seconds = time.perf_counter() - t0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.print(sys.stdout)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
