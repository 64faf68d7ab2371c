"""Ordinary-least-squares position predictor over a sliding window.

Fits value = slope * t + intercept per coordinate on the last k points and
evaluates the line at the horizon time. Times are centered on the window mean
before fitting; that is algebraically a no-op but avoids cancellation at
large absolute timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, InsufficientHistoryError, ValidationError
from .interp import HorizonRule, Sample3, horizon_time
from .trace import Trajectory

__all__ = ["LinearFit", "fit_ols", "lr_predict_position"]


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    window: tuple[float, float]
    n: int

    def __call__(self, t: float) -> float:
        return self.slope * t + self.intercept


def fit_ols(times, values) -> LinearFit:
    """Closed-form OLS line: slope = cov(t, v)/var(t)."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValidationError("times and values must be equal-length 1-D sequences")
    if t.size < 2:
        raise ValidationError(f"need >= 2 samples, got {t.size}")
    if np.any(np.diff(t) <= 0):
        raise ValidationError("times must be strictly increasing")
    t_mean = t.mean()
    tc = t - t_mean
    var_t = float(tc @ tc)
    if var_t == 0.0:
        raise DegenerateGeometryError("all sample times equal, var(t) = 0")
    slope = float(tc @ (v - v.mean())) / var_t
    intercept = float(v.mean() - slope * t_mean)
    return LinearFit(slope, intercept, (float(t[0]), float(t[-1])), int(t.size))


def lr_predict_position(
    traj: Trajectory, at_index: int, window_k: int, rule: HorizonRule
) -> tuple[float, tuple[float, float]]:
    """OLS prediction of (x, y) at the horizon past ``points[at_index]``.

    Both coordinates are fit over the last window_k points ending at
    at_index; the horizon is computed from the window's last three
    timestamps.
    """
    if window_k < 2:
        raise ValidationError(f"window_k must be >= 2, got {window_k}")
    if at_index < window_k - 1:
        raise InsufficientHistoryError(
            f"need {window_k} history points, have {at_index + 1}"
        )
    pts = traj.points[at_index - window_k + 1 : at_index + 1]
    times = [p.t for p in pts]
    if len(pts) >= 3:
        tail = tuple(times[-3:])
    else:
        # 2-point window: synthesize a strictly ordered triple for the rule
        tail = (2 * times[0] - times[1], times[0], times[1])
    t_h = horizon_time(Sample3(tail, (0.0, 0.0, 0.0)), rule)
    fx = fit_ols(times, [p.x for p in pts])
    fy = fit_ols(times, [p.y for p in pts])
    return t_h, (fx(t_h), fy(t_h))
