"""Natural cubic splines over keyframe tracks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DuplicateKnotTime
from . import _backend


@dataclass(frozen=True)
class KeyframeTrack:
    """One scalar coordinate sampled at strictly increasing times."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or values.shape != times.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if times.shape[0] < 2:
            raise ValueError("a track needs at least 2 keyframes")
        _check_increasing(times)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


def _check_increasing(times: np.ndarray) -> None:
    bad = np.flatnonzero(np.diff(times) <= 0)
    if bad.size:
        i = int(bad[0]) + 1
        raise DuplicateKnotTime(i, float(times[i]))


class CubicSpline:
    """Piecewise cubic ``a + b*dt + c*dt**2 + d*dt**3`` with ``dt = t - knots[k]``.

    ``coefficients`` has shape (4, n) for a scalar spline or (4, n, m) for m
    tracks that share the same knots.
    """

    def __init__(self, knots: np.ndarray, coefficients: np.ndarray):
        self.knots = np.ascontiguousarray(knots, dtype=np.float64)
        coef = np.asarray(coefficients, dtype=np.float64)
        self._scalar = coef.ndim == 2
        self._coef = np.ascontiguousarray(coef[:, :, None] if self._scalar else coef)
        if self._coef.shape[1] != self.knots.shape[0] - 1:
            raise ValueError("need one coefficient set per knot interval")

    @property
    def coefficients(self) -> np.ndarray:
        return self._coef[:, :, 0] if self._scalar else self._coef

    a = property(lambda self: self.coefficients[0])
    b = property(lambda self: self.coefficients[1])
    c = property(lambda self: self.coefficients[2])
    d = property(lambda self: self.coefficients[3])

    @property
    def tracks(self) -> int:
        return self._coef.shape[2]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.knots[0]), float(self.knots[-1])

    def __call__(self, t, nu: int = 0):
        """Value (``nu=0``) or ``nu``-th derivative at ``t``; ends extrapolate."""
        t_arr = np.asarray(t, dtype=np.float64)
        flat = np.ascontiguousarray(t_arr.reshape(-1))
        out = _backend.kernels.evaluate(self.knots, self._coef, flat, int(nu))
        if self._scalar:
            out = out[:, 0]
            return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)
        return out[0] if t_arr.ndim == 0 else out.reshape(t_arr.shape + (self.tracks,))

    def derivative(self, t, order: int = 1):
        return self(t, nu=order)


def _coefficients(times: np.ndarray, values: np.ndarray, M: np.ndarray) -> np.ndarray:
    h = np.diff(times)[:, None]
    slopes = np.diff(values, axis=0) / h
    coef = np.empty((4,) + slopes.shape)
    coef[0] = values[:-1]
    coef[1] = slopes - h * (2.0 * M[:-1] + M[1:]) / 6.0
    coef[2] = M[:-1] / 2.0
    coef[3] = (M[1:] - M[:-1]) / (6.0 * h)
    return coef


def fit_splines(times, values) -> CubicSpline:
    """Fit one natural cubic spline per column of ``values`` (shape (n+1, m)).

    All columns share the knot vector, so the tridiagonal factorization is
    done once.
    """
    times = np.ascontiguousarray(times, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    scalar = values.ndim == 1
    if scalar:
        values = values[:, None]
    if times.ndim != 1 or values.shape[0] != times.shape[0]:
        raise ValueError("values must have one row per knot")
    if times.shape[0] < 2:
        raise ValueError("a spline needs at least 2 knots")
    _check_increasing(times)
    h = np.ascontiguousarray(np.diff(times))
    M = _backend.kernels.natural_second_derivatives(h, values)
    coef = _coefficients(times, values, np.asarray(M))
    return CubicSpline(times, coef[:, :, 0] if scalar else coef)


def fit_spline(track: KeyframeTrack) -> CubicSpline:
    return fit_splines(track.times, track.values)


def linear_interpolate(times, values, t) -> np.ndarray:
    """Piecewise-linear interpolation of every column; the comparison baseline."""
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    flat = values.reshape(values.shape[0], -1)
    seg = np.clip(np.searchsorted(times, t, side="right") - 1, 0, times.shape[0] - 2)
    w = ((t - times[seg]) / (times[seg + 1] - times[seg]))[:, None]
    out = flat[seg] * (1.0 - w) + flat[seg + 1] * w
    return out.reshape(t.shape + values.shape[1:])
