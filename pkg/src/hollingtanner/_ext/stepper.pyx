# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Forward-Euler reaction-diffusion steppers (compiled).

The row kernels live in ``stepper_core.h``; their arithmetic follows the same
operation order as ``hollingtanner._kernels_py`` so both backends produce
bit-identical fields.
"""

import numpy as np

from libc.math cimport isfinite
from libc.string cimport memcpy

cdef enum:
    OK = 0
    NEGATIVE = 1
    NONFINITE = 2
    BLOWUP = 3


cdef extern from "stepper_core.h" nogil:
    void ht_row1d(const double* u, const double* v, double* un, double* vn, Py_ssize_t n,
                  double inv, double dt, double A, double C, double Q, double S, double d)
    void ht_row2d(const double* uN, const double* uC, const double* uS,
                  const double* vN, const double* vC, const double* vS,
                  double* un, double* vn, Py_ssize_t nx,
                  double inv, double dt, double A, double C, double Q, double S, double d)
    Py_ssize_t ht_count_bad(const double* x, Py_ssize_t n, double blowup)


cdef inline Py_ssize_t _scan(double* x, Py_ssize_t n, double neg_tol, double blowup, int* status) nogil:
    """Clamp roundoff negatives; return first offending index or -1."""
    cdef Py_ssize_t i
    if ht_count_bad(x, n, blowup) == 0:
        return -1
    for i in range(n):
        if not isfinite(x[i]):
            status[0] = NONFINITE
            return i
        if x[i] < 0.0:
            if x[i] > -neg_tol:
                x[i] = 0.0
            else:
                status[0] = NEGATIVE
                return i
        if x[i] > blowup:
            status[0] = BLOWUP
            return i
    return -1


def euler1d(double[::1] u, double[::1] v, Py_ssize_t n_steps, double dt, double dx,
            double A, double C, double Q, double S, double d,
            double neg_tol=1e-12, double blowup=10.0):
    """Advance (u, v) in place by ``n_steps`` steps.

    Returns ``(status, steps_done, index)``; ``index`` >= n refers to v.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef double[::1] bu = np.empty(n)
    cdef double[::1] bv = np.empty(n)
    cdef double* cu = &u[0]
    cdef double* cv = &v[0]
    cdef double* nu = &bu[0]
    cdef double* nv = &bv[0]
    cdef double* tmp
    cdef double inv = 1.0 / (dx * dx)
    cdef Py_ssize_t s, bad
    cdef int status = OK
    with nogil:
        for s in range(n_steps):
            ht_row1d(cu, cv, nu, nv, n, inv, dt, A, C, Q, S, d)
            bad = _scan(nu, n, neg_tol, blowup, &status)
            if bad < 0:
                bad = _scan(nv, n, neg_tol, blowup, &status)
                if bad >= 0:
                    bad += n
            if bad >= 0:
                break
            tmp = cu; cu = nu; nu = tmp
            tmp = cv; cv = nv; nv = tmp
        if cu != &u[0]:
            memcpy(&u[0], cu, n * sizeof(double))
            memcpy(&v[0], cv, n * sizeof(double))
    if status != OK:
        return status, s, bad
    return OK, n_steps, -1


def euler2d(double[:, ::1] u, double[:, ::1] v, Py_ssize_t n_steps, double dt, double h,
            double A, double C, double Q, double S, double d,
            double neg_tol=1e-12, double blowup=10.0):
    """Two-dimensional analogue of :func:`euler1d` on a (ny, nx) grid.

    ``index`` is the flat C-order position; values >= ny*nx refer to v.
    """
    cdef Py_ssize_t ny = u.shape[0]
    cdef Py_ssize_t nx = u.shape[1]
    cdef Py_ssize_t size = ny * nx
    cdef double[:, ::1] bu = np.empty((ny, nx))
    cdef double[:, ::1] bv = np.empty((ny, nx))
    cdef double* cu = &u[0, 0]
    cdef double* cv = &v[0, 0]
    cdef double* nu = &bu[0, 0]
    cdef double* nv = &bv[0, 0]
    cdef double* tmp
    cdef double inv = 1.0 / (h * h)
    cdef Py_ssize_t s, j, jn, js, bad
    cdef int status = OK
    with nogil:
        for s in range(n_steps):
            for j in range(ny):
                jn = j - 1 if j > 0 else 1
                js = j + 1 if j < ny - 1 else ny - 2
                ht_row2d(cu + jn * nx, cu + j * nx, cu + js * nx,
                         cv + jn * nx, cv + j * nx, cv + js * nx,
                         nu + j * nx, nv + j * nx, nx, inv, dt, A, C, Q, S, d)
            bad = _scan(nu, size, neg_tol, blowup, &status)
            if bad < 0:
                bad = _scan(nv, size, neg_tol, blowup, &status)
                if bad >= 0:
                    bad += size
            if bad >= 0:
                break
            tmp = cu; cu = nu; nu = tmp
            tmp = cv; cv = nv; nv = tmp
        if cu != &u[0, 0]:
            memcpy(&u[0, 0], cu, size * sizeof(double))
            memcpy(&v[0, 0], cv, size * sizeof(double))
    if status != OK:
        return status, s, bad
    return OK, n_steps, -1
