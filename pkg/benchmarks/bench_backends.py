#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Times the three hot paths on representative workloads and prints a small
table.  Run directly:

    python benchmarks/bench_backends.py
    STATSET_BACKEND=numpy python benchmarks/bench_backends.py   # force fallback
"""

from __future__ import annotations

import math
import time

import numpy as np

from statset import _kernels_numpy
from statset.omega import omega_box_construct
from statset.seeding import rng_stream

try:
    from statset import _kernels_numba

    BACKENDS = (("numba", _kernels_numba), ("numpy", _kernels_numpy))
except ImportError:
    BACKENDS = (("numpy", _kernels_numpy),)


def run(label, fn, repeat=3):
    fn()  # warm-up / JIT
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return label, best


def main():
    split = math.pi / 4
    cap = 2 ** 20
    coefs = np.array([0.1, 0.3, 2.0, 1.3e5])  # fast cubic phase
    box = omega_box_construct(2, 32, 16, 16, 0.01)
    gam = box.sample_gamma(1, rng_stream(1, 0))[0]
    gam_flat = np.zeros((3, 3))
    gam_flat[:, : 2] = np.array([[0.3, -1.2], [4.0, 2.5], [900.0, 0.0]])

    rows = []
    for name, mod in BACKENDS:
        rows.append(run(f"osc1d cubic 1e5 periods   [{name}]",
                        lambda m=mod: m.osc1d(coefs, -0.5, 0.75, split, cap)))
        rows.append(run(f"osc2d omega-box lam=32    [{name}]",
                        lambda m=mod: m.osc2d(gam, box.theta, box.w, split, cap)))
        rows.append(run(f"osc2d raw quadratic       [{name}]",
                        lambda m=mod: m.osc2d(gam_flat, 0.0, 0.0, split, cap)))
        rows.append(run(f"phase_grid 1024^2         [{name}]",
                        lambda m=mod: m.phase_grid(gam_flat, 1024)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}   best wall")
    for label, secs in rows:
        print(f"{label:<{width}}   {secs * 1e3:9.2f} ms")
    if len(BACKENDS) == 2:
        print("\nspeedup numba vs numpy:")
        half = len(rows) // 2
        for (l1, t1), (_, t2) in zip(rows[:half], rows[half:]):
            print(f"  {l1.split('[')[0].strip():<28} {t2 / t1:5.1f}x")


if __name__ == "__main__":
    main()
