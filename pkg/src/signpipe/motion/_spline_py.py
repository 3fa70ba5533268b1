"""NumPy fallback for the compiled spline kernels (same signatures)."""

from __future__ import annotations

import numpy as np


def natural_second_derivatives(h: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    M = np.zeros((n + 1, y.shape[1]))
    N = n - 1
    if N < 1:
        return M
    slopes = np.diff(y, axis=0) / h[:, None]
    rhs = 6.0 * (slopes[1:] - slopes[:-1])
    cp = np.zeros(N)
    inv = np.empty(N)
    inv[0] = 1.0 / (2.0 * (h[0] + h[1]))
    if N > 1:
        cp[0] = h[1] * inv[0]
    for r in range(1, N):
        inv[r] = 1.0 / (2.0 * (h[r] + h[r + 1]) - h[r] * cp[r - 1])
        if r < N - 1:
            cp[r] = h[r + 1] * inv[r]
    M[1] = rhs[0] * inv[0]
    for r in range(1, N):
        M[r + 1] = (rhs[r] - h[r] * M[r]) * inv[r]
    for r in range(N - 2, -1, -1):
        M[r + 1] -= cp[r] * M[r + 2]
    return M


def evaluate(knots: np.ndarray, coef: np.ndarray, t: np.ndarray, nu: int) -> np.ndarray:
    n = knots.shape[0] - 1
    seg = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, n - 1)
    dt = (t - knots[seg])[:, None]
    a, b, c, d = coef[:, seg, :]
    if nu == 0:
        return a + dt * (b + dt * (c + dt * d))
    if nu == 1:
        return b + dt * (2.0 * c + 3.0 * dt * d)
    if nu == 2:
        return 2.0 * c + 6.0 * dt * d
    if nu == 3:
        return np.broadcast_to(6.0 * d, (t.shape[0], coef.shape[2])).copy()
    return np.zeros((t.shape[0], coef.shape[2]))
