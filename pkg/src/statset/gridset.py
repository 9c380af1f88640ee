"""Bitmap geometry of stationary sets on dyadic grids.

A GridSet is the cell-center discretization of a subset of [0,1]^2 at
resolution h = 2^-m: cell (i1, i2) covers [i1*h, (i1+1)*h) x [i2*h, (i2+1)*h)
and carries the value of the membership test at its center.  Shifts by
multiples of h are exact bitmap translations, which is what the shifted-core
construction and the strip census rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backends
from .basis import PhaseCoefficients
from .stationary import sup_window_measure


@dataclass(frozen=True)
class GridSet:
    m: int
    bitmap: np.ndarray  # bool, shape (2^m, 2^m), [i1, i2]

    @property
    def h(self) -> float:
        return 2.0 ** -self.m

    @property
    def n(self) -> int:
        return 2 ** self.m

    @property
    def measure(self) -> float:
        return float(np.count_nonzero(self.bitmap)) * self.h * self.h

    def to_pbm(self, path) -> None:
        """Plain PBM (P1); row 0 is the top of the square (largest xi2)."""
        img = self.bitmap.T[::-1, :].astype(np.uint8)
        with open(path, "w") as f:
            f.write(f"P1\n{self.n} {self.n}\n")
            for row in img:
                f.write(" ".join("1" if v else "0" for v in row) + "\n")


@dataclass(frozen=True)
class StripCensus:
    K: int
    per_strip_measure: np.ndarray
    hit_count: int


def stationary_gridset(x: PhaseCoefficients, mu: float, c: float, m: int) -> GridSet:
    """Cells whose center value satisfies mu <= P <= mu + c."""
    if not 6 <= m <= 14:
        raise ValueError(f"resolution exponent must lie in [6, 14], got {m}")
    if x.d != 2:
        raise ValueError("gridset operations require d=2 phases")
    n = 2 ** m
    vals = backends.phase_grid(x.coef_matrix(), n).reshape(n, n)
    bitmap = (vals >= mu) & (vals <= mu + c)
    return GridSet(m=m, bitmap=bitmap)


def best_window_gridset(x: PhaseCoefficients, c: float = 1.0, m: int = 10):
    """GridSet of the measure-maximizing window, with its mu."""
    mu_star, _ = sup_window_measure(x, c, method="grid", budget=4 ** m)
    return mu_star, stationary_gridset(x, mu_star, c, m)


def shifted_core(G: GridSet, shift: float, k: int) -> GridSet:
    """Intersection of the (k+1)^2 translates G - shift*(a1, a2), a in {0..k}^2.

    The shift snaps to a whole number of cells toward zero, so the
    translation is exact on the bitmap; callers must budget one cell of
    slack when comparing against continuum statements.
    """
    if shift < 0:
        raise ValueError("shift must be nonnegative")
    n = G.n
    q = int(shift / G.h)  # snapped toward zero
    out = G.bitmap.copy()
    if q > 0:
        for a1 in range(k + 1):
            for a2 in range(k + 1):
                if a1 == 0 and a2 == 0:
                    continue
                shifted = np.zeros_like(G.bitmap)
                s1, s2 = a1 * q, a2 * q
                if s1 < n and s2 < n:
                    shifted[: n - s1, : n - s2] = G.bitmap[s1:, s2:]
                out &= shifted
    return GridSet(m=G.m, bitmap=out)


def strip_census(G: GridSet, K: int) -> StripCensus:
    """Per-strip measures over the K vertical strips of width 1/K."""
    n = G.n
    if K < 1 or K & (K - 1):
        raise ValueError(f"K must be a dyadic integer >= 1, got {K}")
    if K > n:
        raise ValueError(f"K={K} finer than the grid (n={n})")
    per_cell = G.bitmap.reshape(K, n // K, n).sum(axis=(1, 2))
    per_strip = per_cell.astype(float) * G.h * G.h
    return StripCensus(K=K, per_strip_measure=per_strip, hit_count=int(np.count_nonzero(per_cell)))


def projection_intervals(G: GridSet) -> list[tuple[float, float]]:
    """Maximal runs of nonempty columns, as xi1 intervals."""
    cols = G.bitmap.any(axis=1)
    out: list[tuple[float, float]] = []
    start = None
    for i, v in enumerate(cols):
        if v and start is None:
            start = i
        elif not v and start is not None:
            out.append((start * G.h, i * G.h))
            start = None
    if start is not None:
        out.append((start * G.h, 1.0))
    return out


def lagrange_window_check(
    x: PhaseCoefficients,
    core: GridSet,
    delta: float,
    mu: float | None = None,
) -> float:
    """Max of |P - mu| over 5x5 sample grids in delta-squares meeting the core.

    ``mu`` defaults to the measure-maximizing unit-window level for the
    phase.  Returns 0 for an empty core.
    """
    n = core.n
    cells = int(round(delta / core.h))
    if cells < 1 or abs(cells * core.h - delta) > 1e-12 or n % cells:
        raise ValueError(f"delta={delta} is not a cell multiple of h={core.h}")
    if not core.bitmap.any():
        return 0.0
    if mu is None:
        mu, _ = sup_window_measure(x, 1.0, method="grid", budget=4 ** core.m)
    nb = n // cells
    blocks = core.bitmap.reshape(nb, cells, nb, cells).any(axis=(1, 3))
    ib, jb = np.nonzero(blocks)
    offs = np.linspace(0.0, delta, 5)
    pts1 = (ib[:, None, None] * delta + offs[None, :, None]) + np.zeros((1, 1, 5))
    pts2 = (jb[:, None, None] * delta + offs[None, None, :]) + np.zeros((1, 5, 1))
    vals = backends.phase_points(
        x.coef_matrix(), pts1.reshape(-1), pts2.reshape(-1)
    )
    return float(np.max(np.abs(vals - mu)))


def column_dilation_excess(G: GridSet, cells: int) -> float:
    """Measure of ((G + [-s, s] x {0}) \\ G) on the grid, s = cells * h."""
    n = G.n
    dil = G.bitmap.copy()
    for d in range(1, cells + 1):
        dil[d:, :] |= G.bitmap[: n - d, :]
        dil[: n - d, :] |= G.bitmap[d:, :]
    extra = dil & ~G.bitmap
    return float(np.count_nonzero(extra)) * G.h * G.h
