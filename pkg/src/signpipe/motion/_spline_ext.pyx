# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for natural cubic splines sharing one knot vector.

Mirrors ``_spline_py`` exactly; both are selected through ``_backend``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def natural_second_derivatives(double[::1] h, double[:, ::1] y):
    """Second derivatives at the knots for every column of ``y``.

    ``h`` holds the n interval widths, ``y`` is (n+1, m). The end values are
    zero (natural boundary); interior ones solve the tridiagonal system with
    one shared Thomas factorization.
    """
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t m = y.shape[1]
    cdef Py_ssize_t N = n - 1
    cdef Py_ssize_t r, j
    cdef double denom, s0, s1
    out = np.zeros((n + 1, m), dtype=np.float64)
    cdef double[:, ::1] M = out
    if N < 1:
        return out
    cp_arr = np.empty(N, dtype=np.float64)
    inv_arr = np.empty(N, dtype=np.float64)
    cdef double[::1] cp = cp_arr
    cdef double[::1] inv = inv_arr

    # factorization, shared by all columns
    denom = 2.0 * (h[0] + h[1])
    inv[0] = 1.0 / denom
    cp[0] = (h[1] * inv[0]) if N > 1 else 0.0
    for r in range(1, N):
        denom = 2.0 * (h[r] + h[r + 1]) - h[r] * cp[r - 1]
        inv[r] = 1.0 / denom
        cp[r] = (h[r + 1] * inv[r]) if r < N - 1 else 0.0

    for j in range(m):
        # forward sweep; M[r + 1] temporarily holds d'
        s0 = (y[1, j] - y[0, j]) / h[0]
        s1 = (y[2, j] - y[1, j]) / h[1]
        M[1, j] = 6.0 * (s1 - s0) * inv[0]
        for r in range(1, N):
            s0 = s1
            s1 = (y[r + 2, j] - y[r + 1, j]) / h[r + 1]
            M[r + 1, j] = (6.0 * (s1 - s0) - h[r] * M[r, j]) * inv[r]
        for r in range(N - 2, -1, -1):
            M[r + 1, j] = M[r + 1, j] - cp[r] * M[r + 2, j]
    return out


cdef inline Py_ssize_t _interval(const double[::1] knots, double t) noexcept nogil:
    # index k with knots[k] <= t < knots[k+1], clamped to [0, n-1]
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = knots.shape[0] - 1
    cdef Py_ssize_t mid
    if t < knots[1]:
        return 0
    if t >= knots[hi - 1]:
        return hi - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if knots[mid] <= t:
            lo = mid
        else:
            hi = mid
    return lo


def evaluate(const double[::1] knots, const double[:, :, ::1] coef, const double[::1] t, int nu):
    """Evaluate the ``nu``-th derivative of every column at times ``t``.

    ``coef`` is (4, n, m) holding a, b, c, d of a + b dt + c dt^2 + d dt^3.
    """
    cdef Py_ssize_t k = t.shape[0]
    cdef Py_ssize_t m = coef.shape[2]
    cdef Py_ssize_t i, j, seg
    cdef double dt
    out_arr = np.empty((k, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(k):
            seg = _interval(knots, t[i])
            dt = t[i] - knots[seg]
            if nu == 0:
                for j in range(m):
                    out[i, j] = coef[0, seg, j] + dt * (coef[1, seg, j] + dt * (coef[2, seg, j] + dt * coef[3, seg, j]))
            elif nu == 1:
                for j in range(m):
                    out[i, j] = coef[1, seg, j] + dt * (2.0 * coef[2, seg, j] + 3.0 * dt * coef[3, seg, j])
            elif nu == 2:
                for j in range(m):
                    out[i, j] = 2.0 * coef[2, seg, j] + 6.0 * dt * coef[3, seg, j]
            elif nu == 3:
                for j in range(m):
                    out[i, j] = 6.0 * coef[3, seg, j]
            else:
                for j in range(m):
                    out[i, j] = 0.0
    return out_arr
