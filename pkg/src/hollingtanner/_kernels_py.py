"""Pure-numpy forward-Euler steppers, used when the compiled extension is absent.

Same signatures, status codes and floating-point operation order as
``hollingtanner._ext.stepper``.
"""

import numpy as np

OK, NEGATIVE, NONFINITE, BLOWUP = 0, 1, 2, 3


def _check(arr, neg_tol, blowup):
    """Clamp roundoff negatives in place; return (status, flat index)."""
    bad = ~np.isfinite(arr)
    if bad.any():
        return NONFINITE, int(np.flatnonzero(bad)[0])
    neg = arr < 0.0
    if neg.any():
        deep = arr <= -neg_tol
        if deep.any():
            return NEGATIVE, int(np.flatnonzero(deep)[0])
        arr[neg] = 0.0
    big = arr > blowup
    if big.any():
        return BLOWUP, int(np.flatnonzero(big)[0])
    return OK, -1


def euler1d(u, v, n_steps, dt, dx, A, C, Q, S, d, neg_tol=1e-12, blowup=10.0):
    n = u.shape[0]
    inv = 1.0 / (dx * dx)
    for s in range(n_steps):
        up = np.pad(u, 1, mode="reflect")
        vp = np.pad(v, 1, mode="reflect")
        lu = ((up[:-2] + up[2:]) - 2.0 * u) * inv
        lv = ((vp[:-2] + vp[2:]) - 2.0 * v) * inv
        fu = u * ((1.0 - u) - Q * v / (u + A))
        fv = S * v * (1.0 - v / (u + C))
        un = u + dt * (lu + fu)
        vn = v + dt * (d * lv + fv)
        status, idx = _check(un, neg_tol, blowup)
        if status != OK:
            return status, s, idx
        status, idx = _check(vn, neg_tol, blowup)
        if status != OK:
            return status, s, n + idx
        u[:] = un
        v[:] = vn
    return OK, n_steps, -1


def euler2d(u, v, n_steps, dt, h, A, C, Q, S, d, neg_tol=1e-12, blowup=10.0):
    size = u.size
    inv = 1.0 / (h * h)
    for s in range(n_steps):
        up = np.pad(u, 1, mode="reflect")
        vp = np.pad(v, 1, mode="reflect")
        lu = ((up[:-2, 1:-1] + up[2:, 1:-1]) + (up[1:-1, :-2] + up[1:-1, 2:]) - 4.0 * u) * inv
        lv = ((vp[:-2, 1:-1] + vp[2:, 1:-1]) + (vp[1:-1, :-2] + vp[1:-1, 2:]) - 4.0 * v) * inv
        fu = u * ((1.0 - u) - Q * v / (u + A))
        fv = S * v * (1.0 - v / (u + C))
        un = u + dt * (lu + fu)
        vn = v + dt * (d * lv + fv)
        status, idx = _check(un, neg_tol, blowup)
        if status != OK:
            return status, s, idx
        status, idx = _check(vn, neg_tol, blowup)
        if status != OK:
            return status, s, size + idx
        u[...] = un
        v[...] = vn
    return OK, n_steps, -1
