"""Pure-numpy fallback kernels, same contracts as the numba versions.

The bisection is run breadth-first on panel arrays instead of a DFS stack;
vectorized GL16 evaluation keeps the cost within a small factor of the
compiled path.  Results agree with the numba kernels to rounding (the
accumulation order differs), and each backend is individually deterministic.
"""

from __future__ import annotations

import numpy as np

_NODES16, _WTS16 = np.polynomial.legendre.leggauss(16)

TWO_PI = 2.0 * np.pi


def _gl16_sum(coefs, lo, hi):
    half = 0.5 * (hi - lo)
    x = (lo + half)[:, None] + half[:, None] * _NODES16[None, :]
    q = np.zeros_like(x)
    for c in coefs[::-1]:
        q = q * x + c
    vals = np.exp(TWO_PI * 1j * q) @ _WTS16
    return complex(np.sum(vals * half))


def _range_bound_1d(coefs, lo, hi):
    m = np.maximum(np.abs(lo), np.abs(hi))
    dbound = np.zeros_like(lo)
    p = np.ones_like(lo)
    for i in range(1, coefs.shape[0]):
        dbound += i * abs(coefs[i]) * p
        p *= m
    return dbound * (hi - lo)


def osc1d(coefs, a, b, split, cap):
    coefs = np.asarray(coefs, dtype=float)
    lo = np.array([a])
    hi = np.array([b])
    min_w = (b - a) * 2.0 ** -60
    acc = 0.0 + 0.0j
    panels = 0
    ok = True
    while lo.size:
        rng = _range_bound_1d(coefs, lo, hi)
        done = (rng <= split) | (hi - lo <= min_w)
        if panels + lo.size >= cap:
            done = np.ones_like(done)
            ok = False
        if np.any(done):
            acc += _gl16_sum(coefs, lo[done], hi[done])
            panels += int(done.sum())
        lo, hi = lo[~done], hi[~done]
        if lo.size:
            mid = 0.5 * (lo + hi)
            lo = np.concatenate([lo, mid])
            hi = np.concatenate([mid, hi])
    return acc.real, acc.imag, panels, ok


def osc2d(gam, theta, w_shift, split, cap):
    gam = np.asarray(gam, dtype=float)
    kk = gam.shape[0] - 1
    u_min = min(-w_shift, theta - w_shift)
    u_max = max(1.0 - w_shift, 1.0 + theta - w_shift)
    umax = max(abs(u_min), abs(u_max))

    def outer_bound(lo, hi):
        m2 = np.maximum(np.abs(lo), np.abs(hi))
        dbound = np.full_like(lo, abs(theta))
        up = 1.0
        for mm in range(kk + 1):
            pj = np.ones_like(lo)
            for j in range(1, kk + 1):
                dbound += j * abs(gam[mm, j]) * pj * up
                pj *= m2
            up *= umax
        return dbound * (hi - lo)

    lo = np.array([0.0])
    hi = np.array([1.0])
    acc = 0.0 + 0.0j
    panels = 0
    ok = True
    while lo.size:
        rng = outer_bound(lo, hi)
        done = (rng <= split) | (hi - lo <= 2.0 ** -60)
        if panels + lo.size >= cap:
            done = np.ones_like(done)
            ok = False
        for plo, phi_ in zip(lo[done], hi[done]):
            half = 0.5 * (phi_ - plo)
            pacc = 0.0 + 0.0j
            for t in range(16):
                xi2 = plo + half + half * _NODES16[t]
                q = np.zeros(kk + 1)
                for mm in range(kk + 1):
                    accm = gam[mm, kk]
                    for j in range(kk - 1, -1, -1):
                        accm = accm * xi2 + gam[mm, j]
                    q[mm] = accm
                ua = theta * xi2 - w_shift
                ub = 1.0 + theta * xi2 - w_shift
                ire, iim, ip, iok = osc1d(q, ua, ub, split, cap)
                panels += ip
                ok = ok and iok
                pacc += _WTS16[t] * (ire + 1j * iim)
            acc += half * pacc
            panels += 1
        lo, hi = lo[~done], hi[~done]
        if lo.size:
            mid = 0.5 * (lo + hi)
            lo = np.concatenate([lo, mid])
            hi = np.concatenate([mid, hi])
    return acc.real, acc.imag, panels, ok


def phase_grid(gam, n):
    gam = np.asarray(gam, dtype=float)
    kk = gam.shape[0] - 1
    x = (np.arange(n) + 0.5) / n
    rows = np.zeros((kk + 1, n))  # rows[j, i1] = sum_i gam[i, j] x1^i
    for i in range(kk, -1, -1):
        rows = rows * x[None, :]
        rows += gam[i][:, None]
    out = np.zeros((n, n))  # out[i1, i2], Horner over the xi2 power
    for j in range(kk, -1, -1):
        out = out * x[None, :]
        out += rows[j][:, None]
    return out.reshape(-1)


def phase_points(gam, x1, x2):
    gam = np.asarray(gam, dtype=float)
    kk = gam.shape[0] - 1
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    acc = np.zeros_like(x1)
    for i in range(kk, -1, -1):
        rowv = np.full_like(x2, gam[i, kk])
        for j in range(kk - 1, -1, -1):
            rowv = rowv * x2 + gam[i, j]
        acc = acc * x1 + rowv
    return acc
