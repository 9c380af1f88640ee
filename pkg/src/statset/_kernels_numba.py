"""Numba kernels: adaptive oscillatory panel quadrature and bulk phase evaluation.

Panel rule: Gauss-Legendre with 16 nodes per panel, panels produced by
bisection until an exact coefficient-based bound on the phase range over the
panel drops below ``split`` (phase measured in the units of q where the
integrand is exp(2*pi*i*q)).  DFS order makes the accumulation order, and
hence the rounding, deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_NODES16, _WTS16 = np.polynomial.legendre.leggauss(16)

TWO_PI = 2.0 * np.pi
_STACK = 160  # bisection depth is capped well below this


@njit(cache=True, nogil=True)
def osc1d(coefs, a, b, split, cap):
    """Integrate exp(2*pi*i*q(v)) dv over [a, b] for polynomial q.

    Returns (re, im, panels, ok); ok flips to False when the panel cap was
    hit before the phase-range criterion was satisfied everywhere.
    """
    deg = coefs.shape[0] - 1
    lo_s = np.empty(_STACK)
    hi_s = np.empty(_STACK)
    lo_s[0] = a
    hi_s[0] = b
    sp = 1
    panels = 0
    ok = True
    acc_re = 0.0
    acc_im = 0.0
    min_w = (b - a) * 2.0 ** -60
    while sp > 0:
        sp -= 1
        lo = lo_s[sp]
        hi = hi_s[sp]
        w = hi - lo
        m = max(abs(lo), abs(hi))
        dbound = 0.0
        p = 1.0
        for i in range(1, deg + 1):
            dbound += i * abs(coefs[i]) * p
            p *= m
        rng = dbound * w
        if rng > split and w > min_w:
            if panels + sp >= cap:
                ok = False
            else:
                mid = 0.5 * (lo + hi)
                lo_s[sp] = mid
                hi_s[sp] = hi
                lo_s[sp + 1] = lo
                hi_s[sp + 1] = mid
                sp += 2
                continue
        c = 0.5 * (lo + hi)
        half = 0.5 * w
        pre = 0.0
        pim = 0.0
        for j in range(16):
            x = c + half * _NODES16[j]
            q = coefs[deg]
            for i in range(deg - 1, -1, -1):
                q = q * x + coefs[i]
            ang = TWO_PI * q
            pre += _WTS16[j] * np.cos(ang)
            pim += _WTS16[j] * np.sin(ang)
        acc_re += half * pre
        acc_im += half * pim
        panels += 1
    return acc_re, acc_im, panels, ok


@njit(cache=True, nogil=True)
def osc2d(gam, theta, w_shift, split, cap):
    """Integrate exp(2*pi*i*P) over [0,1]^2 in sheared coordinates.

    P(xi) = sum_m gamma_m(xi2) * u^m with u = xi1 + theta*xi2 - w_shift and
    gam[m, j] the xi2^j coefficient of gamma_m.  The xi1 integral at fixed
    xi2 is taken over u (unit Jacobian); theta = w_shift = 0 recovers the
    plain tensor integral over the unit square.
    """
    kk = gam.shape[0] - 1
    u_min = min(-w_shift, theta - w_shift)
    u_max = max(1.0 - w_shift, 1.0 + theta - w_shift)
    umax = max(abs(u_min), abs(u_max))
    lo_s = np.empty(_STACK)
    hi_s = np.empty(_STACK)
    lo_s[0] = 0.0
    hi_s[0] = 1.0
    sp = 1
    panels = 0
    ok = True
    acc_re = 0.0
    acc_im = 0.0
    q = np.empty(kk + 1)
    while sp > 0:
        sp -= 1
        lo = lo_s[sp]
        hi = hi_s[sp]
        w = hi - lo
        m2 = max(abs(lo), abs(hi))
        dbound = abs(theta)  # endpoint drift of the inner interval
        up = 1.0
        for mm in range(kk + 1):
            pj = 1.0
            for j in range(1, kk + 1):
                dbound += j * abs(gam[mm, j]) * pj * up
                pj *= m2
            up *= umax
        rng = dbound * w
        if rng > split and w > 2.0 ** -60:
            if panels + sp >= cap:
                ok = False
            else:
                mid = 0.5 * (lo + hi)
                lo_s[sp] = mid
                hi_s[sp] = hi
                lo_s[sp + 1] = lo
                hi_s[sp + 1] = mid
                sp += 2
                continue
        c = 0.5 * (lo + hi)
        half = 0.5 * w
        pre = 0.0
        pim = 0.0
        for t in range(16):
            xi2 = c + half * _NODES16[t]
            for mm in range(kk + 1):
                acc = gam[mm, kk]
                for j in range(kk - 1, -1, -1):
                    acc = acc * xi2 + gam[mm, j]
                q[mm] = acc
            ua = theta * xi2 - w_shift
            ub = 1.0 + theta * xi2 - w_shift
            ire, iim, ip, iok = osc1d(q, ua, ub, split, cap)
            panels += ip
            ok = ok and iok
            pre += _WTS16[t] * ire
            pim += _WTS16[t] * iim
        acc_re += half * pre
        acc_im += half * pim
        panels += 1
    return acc_re, acc_im, panels, ok


@njit(cache=True, nogil=True)
def phase_grid(gam, n):
    """P at the centers of the n x n cell grid on [0,1]^2, flat (i1-major)."""
    kk = gam.shape[0] - 1
    out = np.empty(n * n)
    row = np.empty(kk + 1)
    for i1 in range(n):
        x1 = (i1 + 0.5) / n
        for j in range(kk + 1):
            acc = gam[kk, j]
            for i in range(kk - 1, -1, -1):
                acc = acc * x1 + gam[i, j]
            row[j] = acc
        base = i1 * n
        for i2 in range(n):
            x2 = (i2 + 0.5) / n
            acc = row[kk]
            for j in range(kk - 1, -1, -1):
                acc = acc * x2 + row[j]
            out[base + i2] = acc
    return out


@njit(cache=True, nogil=True)
def phase_points(gam, x1, x2):
    """P at arbitrary points (x1[i], x2[i])."""
    kk = gam.shape[0] - 1
    n = x1.shape[0]
    out = np.empty(n)
    for p in range(n):
        acc = 0.0
        for i in range(kk, -1, -1):
            rowv = gam[i, kk]
            for j in range(kk - 1, -1, -1):
                rowv = rowv * x2[p] + gam[i, j]
            acc = acc * x1[p] + rowv
        out[p] = acc
    return out
