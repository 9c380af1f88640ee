import math
import os
import subprocess
import sys

import numpy as np
import pytest

from statset import _kernels_numpy
from statset.backends import get_backend

nb = pytest.importorskip("statset._kernels_numba")


def test_osc1d_backends_agree(rng):
    for _ in range(10):
        coefs = rng.uniform(-40, 40, 4)
        a, b = -0.5, 0.75
        re1, im1, p1, ok1 = nb.osc1d(coefs, a, b, math.pi / 4, 2 ** 20)
        re2, im2, p2, ok2 = _kernels_numpy.osc1d(coefs, a, b, math.pi / 4, 2 ** 20)
        assert ok1 and ok2
        assert p1 == p2
        assert complex(re1, im1) == pytest.approx(complex(re2, im2), abs=1e-12)


def test_osc2d_backends_agree(rng):
    gam = np.zeros((3, 3))
    gam[2, 0] = 120.0
    gam[1, 0] = 0.3
    gam[1, 1] = -0.2
    gam[0, 1] = 0.05
    for theta, w in ((0.0, 0.0), (0.008, 0.4)):
        re1, im1, p1, ok1 = nb.osc2d(gam, theta, w, math.pi / 4, 2 ** 20)
        re2, im2, p2, ok2 = _kernels_numpy.osc2d(gam, theta, w, math.pi / 4, 2 ** 20)
        assert ok1 and ok2
        assert p1 == p2
        assert complex(re1, im1) == pytest.approx(complex(re2, im2), abs=1e-11)


def test_phase_eval_backends_agree(rng):
    gam = rng.uniform(-3, 3, (4, 4))
    for i in range(4):
        for j in range(4):
            if i + j > 3:
                gam[i, j] = 0.0
    g1 = nb.phase_grid(gam, 64)
    g2 = _kernels_numpy.phase_grid(gam, 64)
    np.testing.assert_allclose(g1, g2, atol=1e-12)
    x1 = rng.uniform(0, 1, 500)
    x2 = rng.uniform(0, 1, 500)
    np.testing.assert_allclose(nb.phase_points(gam, x1, x2), _kernels_numpy.phase_points(gam, x1, x2), atol=1e-12)


def test_get_backend_explicit():
    assert get_backend("numpy") is _kernels_numpy
    assert get_backend("numba") is nb
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_env_flag_selects_numpy():
    env = dict(os.environ, STATSET_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", "import statset; print(statset.backend_name())"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
