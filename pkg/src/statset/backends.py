"""Kernel backend selection.

The hot paths (oscillatory panel quadrature, bulk phase evaluation) exist
twice: a numba-compiled version and a pure-numpy one.  ``STATSET_BACKEND``
picks between them ("numba" or "numpy"); the default is numba when it
imports, numpy otherwise.  ``benchmarks/bench_backends.py`` compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_FORCED = os.environ.get("STATSET_BACKEND", "").strip().lower()

if _FORCED not in ("", "numba", "numpy"):
    raise RuntimeError(f"STATSET_BACKEND must be 'numba' or 'numpy', got {_FORCED!r}")

if _FORCED == "numpy":
    _impl = _kernels_numpy
    _name = "numpy"
else:
    try:
        from . import _kernels_numba as _impl

        _name = "numba"
    except ImportError:
        if _FORCED == "numba":
            raise
        _impl = _kernels_numpy
        _name = "numpy"


def backend_name() -> str:
    return _name


def get_backend(name: str | None = None):
    """Return the kernel module; explicit ``name`` overrides the default."""
    if name is None:
        return _impl
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")


osc1d = _impl.osc1d
osc2d = _impl.osc2d
phase_grid = _impl.phase_grid
phase_points = _impl.phase_points
