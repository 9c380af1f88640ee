"""Deterministic substream construction.

Every randomized operation takes a 64-bit seed and derives independent
Philox streams keyed by (seed, structured stream id).  Sample i always lands
at the same stream position no matter how work is split across workers, so
results are identical for any worker count.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_MULT = 0x9E3779B97F4A7C15


def stream_key(*indices: int) -> int:
    h = 0x243F6A8885A308D3
    for v in indices:
        h = ((h ^ (int(v) & _MASK)) * _MULT) & _MASK
    return h


def rng_stream(seed: int, *indices: int) -> np.random.Generator:
    key = np.array([int(seed) & _MASK, stream_key(*indices)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
