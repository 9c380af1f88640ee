"""Deterministic CSV/JSON emission.

Every output file starts with '#'-prefixed metadata lines carrying the
config echo (seed included), then a header row and data rows.  Floats are
written with repr (shortest round-trip), so identical configs produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(path, meta: dict, columns: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {key}={_fmt(meta[key])}" for key in sorted(meta)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def emit_json(path, meta: dict, columns: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "meta": meta,
        "columns": columns,
        "rows": [list(r) for r in rows],
    }
    path.write_text(json.dumps(payload, sort_keys=True, default=_fmt, indent=1) + "\n")


def emit_table(path, meta: dict, columns: list[str], rows, fmt: str = "csv") -> None:
    if fmt == "csv":
        emit_csv(path, meta, columns, rows)
    elif fmt == "json":
        emit_json(path, meta, columns, rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def emit_plotdata(data, path, meta: dict | None = None, fmt: str = "csv") -> None:
    """(scale, value, stderr) rows for external plotting.

    ``data`` is a MassCurve, a list of LedgerRows, or raw (scale, value,
    stderr) triples; empty input is an error.
    """
    rows: list[tuple] = []
    if hasattr(data, "R_values"):
        rows = [
            (float(r), float(v), float(s))
            for r, v, s in zip(data.R_values, data.estimates, data.stderrs)
        ]
    elif isinstance(data, (list, tuple)) and data and hasattr(data[0], "contribution"):
        rows = [(row.lam, row.contribution, 0.0) for row in data]
    else:
        rows = [tuple(r) for r in data] if data else []
    if not rows:
        raise ValueError("no data to emit")
    emit_table(path, meta or {}, ["scale", "value", "stderr"], rows, fmt)


@dataclass
class RunReport:
    config: dict
    assertions: list[tuple[str, bool, str]] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    wall_seconds: float = 0.0
    budget_failures: int = 0

    def record(self, name: str, ok: bool, detail: str = "") -> bool:
        self.assertions.append((name, ok, detail))
        return ok

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.assertions)

    def exit_code(self) -> int:
        if self.budget_failures:
            return 3
        return 0 if self.passed else 2

    def print(self, out) -> None:
        for name, ok, detail in self.assertions:
            mark = "PASS" if ok else "FAIL"
            suffix = f" -- {detail}" if detail else ""
            print(f"[{mark}] {name}{suffix}", file=out)
        for art in self.artifacts:
            print(f"artifact: {art}", file=out)
        print(f"wall: {self.wall_seconds:.1f}s", file=out)
