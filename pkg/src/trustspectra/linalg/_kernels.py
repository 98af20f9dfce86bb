"""Compiled inner loops.

Rotations act on rows of ``lt``/``rt``, which hold the left and right
singular vectors transposed, so every update touches contiguous memory.
"""
import math

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps


@njit(cache=True)
def _givens(f, g):
    if g == 0.0:
        return 1.0, 0.0, f
    r = math.hypot(f, g)
    return f / r, g / r, r


@njit(cache=True)
def _rot_rows(x, i, k, c, s):
    # row_i <- c row_i + s row_k ; row_k <- -s row_i + c row_k
    for t in range(x.shape[1]):
        a = x[i, t]
        b = x[k, t]
        x[i, t] = c * a + s * b
        x[k, t] = -s * a + c * b


@njit(cache=True)
def _wilkinson_shift(d, e, lo, hi):
    dm = d[hi - 1]
    dn = d[hi]
    em = e[hi - 1]
    emm = e[hi - 2] if hi - 1 > lo else 0.0
    t11 = dm * dm + emm * emm
    t12 = dm * em
    t22 = dn * dn + em * em
    if t12 == 0.0:
        return t22
    delta = 0.5 * (t11 - t22)
    sgn = 1.0 if delta >= 0.0 else -1.0
    return t22 - t12 * t12 / (delta + sgn * math.hypot(delta, t12))


@njit(cache=True)
def _gk_step(d, e, lt, rt, lo, hi):
    mu = _wilkinson_shift(d, e, lo, hi)
    y = d[lo] * d[lo] - mu
    z = d[lo] * e[lo]
    for k in range(lo, hi):
        c, s, r = _givens(y, z)
        if k > lo:
            e[k - 1] = r
        f = c * d[k] + s * e[k]
        e[k] = -s * d[k] + c * e[k]
        g = s * d[k + 1]
        d[k + 1] = c * d[k + 1]
        d[k] = f
        _rot_rows(rt, k, k + 1, c, s)
        c, s, r = _givens(d[k], g)
        d[k] = r
        f = c * e[k] + s * d[k + 1]
        d[k + 1] = -s * e[k] + c * d[k + 1]
        e[k] = f
        _rot_rows(lt, k, k + 1, c, s)
        if k < hi - 1:
            y = e[k]
            z = s * e[k + 1]
            e[k + 1] = c * e[k + 1]


@njit(cache=True)
def _chase_row(d, e, lt, i, hi):
    # d[i] == 0: push e[i] right along row i with left rotations
    bulge = e[i]
    e[i] = 0.0
    for k in range(i + 1, hi + 1):
        c, s, r = _givens(d[k], bulge)
        d[k] = r
        _rot_rows(lt, k, i, c, s)
        if k < hi:
            bulge = -s * e[k]
            e[k] = c * e[k]


@njit(cache=True)
def _chase_col(d, e, rt, lo, hi):
    # d[hi] == 0: push e[hi-1] up column hi with right rotations
    bulge = e[hi - 1]
    e[hi - 1] = 0.0
    for k in range(hi - 1, lo - 1, -1):
        c, s, r = _givens(d[k], bulge)
        d[k] = r
        _rot_rows(rt, k, hi, c, s)
        if k > lo:
            bulge = -s * e[k - 1]
            e[k - 1] = c * e[k - 1]


@njit(cache=True)
def bidiagonal_svd(d, e, lt, rt, max_sweeps):
    """Diagonalize the upper bidiagonal (d, e) in place.

    Returns the number of sweeps used, or -1 if ``max_sweeps`` ran out.
    """
    n = d.shape[0]
    anorm = 0.0
    for i in range(n):
        v = abs(d[i]) + (abs(e[i]) if i < n - 1 else 0.0)
        if v > anorm:
            anorm = v
    dtol = EPS * anorm
    sweeps = 0
    hi = n - 1
    while hi > 0:
        for i in range(hi + 1):
            if abs(d[i]) <= dtol:
                d[i] = 0.0
        for i in range(hi):
            if abs(e[i]) <= EPS * (abs(d[i]) + abs(d[i + 1])):
                e[i] = 0.0
        if e[hi - 1] == 0.0:
            hi -= 1
            continue
        lo = hi - 1
        while lo > 0 and e[lo - 1] != 0.0:
            lo -= 1
        if d[hi] == 0.0:
            _chase_col(d, e, rt, lo, hi)
            continue
        zero_at = -1
        for i in range(lo, hi):
            if d[i] == 0.0:
                zero_at = i
                break
        if zero_at >= 0:
            _chase_row(d, e, lt, zero_at, hi)
            continue
        if sweeps >= max_sweeps:
            return -1
        _gk_step(d, e, lt, rt, lo, hi)
        sweeps += 1
    return sweeps


@njit(cache=True)
def one_sided_jacobi(a, vt, max_sweeps):
    """Hestenes one-sided Jacobi on the columns of ``a`` (stored as rows).

    ``a`` is ``n x m`` (columns of the original matrix as rows) and ``vt``
    accumulates the right rotations.  On return the rows of ``a`` are
    mutually orthogonal.  Returns sweeps used, or -1 on non-convergence.
    """
    n = a.shape[0]
    m = a.shape[1]
    total = 0.0
    for i in range(n):
        for t in range(m):
            total += a[i, t] * a[i, t]
    # columns already at roundoff level carry no signal worth rotating
    floor = (EPS * EPS) * total
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for k in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for t in range(m):
                    alpha += a[i, t] * a[i, t]
                    beta += a[k, t] * a[k, t]
                    gamma += a[i, t] * a[k, t]
                if gamma == 0.0 or abs(gamma) <= EPS * math.sqrt(alpha * beta):
                    continue
                if alpha <= floor or beta <= floor:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                sgn = 1.0 if zeta >= 0.0 else -1.0
                t_ = sgn / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t_ * t_)
                s = c * t_
                # row_i <- c row_i - s row_k ; row_k <- s row_i + c row_k
                _rot_rows(a, i, k, c, -s)
                _rot_rows(vt, i, k, c, -s)
        if not rotated:
            return sweep + 1
    return -1
