"""Polynomial extrapolation over three-sample windows.

Two scalar predictors are provided:

  - quadratic Lagrange interpolation through the last three samples,
    evaluated at a horizon time;
  - a divided-difference correction on top of the previous prediction
    (Newton form): P' + (t_h - t0)(t_h - t1) * dd2, where dd2 is the second
    divided difference of the three samples.

Both are applied per coordinate by ``predict_position_poly``. The horizon can
be the literal "last time + mean of sample times + discovery period" rule
(which grows with absolute time; kept verbatim as ``paper_eq2``) or a plain
fixed offset past the last sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateGeometryError, InsufficientHistoryError, ValidationError
from .trace import Trajectory

__all__ = [
    "Sample3",
    "HorizonKind",
    "HorizonRule",
    "lagrange_eval",
    "horizon_time",
    "newton_predict",
    "predict_position_poly",
]

# below this sample-window width the interpolation denominators amplify
# rounding error beyond usefulness
MIN_WINDOW_WIDTH = 1e-6


@dataclass(frozen=True)
class Sample3:
    """Three (time, value) samples with strictly increasing times."""

    times: tuple[float, float, float]
    values: tuple[float, float, float]

    def __post_init__(self):
        t0, t1, t2 = self.times
        if not (t0 < t1 < t2):
            raise ValidationError(f"times not strictly increasing: {self.times}")
        if t2 - t0 < MIN_WINDOW_WIDTH:
            raise DegenerateGeometryError(
                f"sample times span {t2 - t0:g} s (< {MIN_WINDOW_WIDTH:g} s)"
            )
        if not all(math.isfinite(v) for v in self.times + self.values):
            raise ValidationError("non-finite sample")


class HorizonKind(Enum):
    PAPER_EQ2 = "paper_eq2"
    FIXED_OFFSET = "fixed_offset"


@dataclass(frozen=True)
class HorizonRule:
    """How far past the last sample to predict.

    ``paper_eq2``: t2 + (t0+t1+t2)/3 + discovery_period. The middle term is
    the mean of absolute sample times, so the horizon grows with absolute t;
    implemented literally. ``fixed_offset``: t2 + offset.
    """

    kind: HorizonKind = HorizonKind.FIXED_OFFSET
    discovery_period: float = 0.0
    offset: float = 1.0

    def __post_init__(self):
        if self.discovery_period < 0:
            raise ValidationError("discovery_period must be >= 0")
        if self.kind is HorizonKind.FIXED_OFFSET and self.offset <= 0:
            raise ValidationError("fixed_offset requires offset > 0")


def lagrange_eval(s: Sample3, t: float) -> float:
    """Evaluate the unique degree-<=2 polynomial through the samples at t.

    Uses the Newton (divided-difference) arrangement, which is numerically
    stable for clustered nodes and algebraically identical to the three-term
    Lagrange basis formula.
    """
    if not math.isfinite(t):
        raise ValidationError(f"non-finite query time: {t!r}")
    t0, t1, t2 = s.times
    p0, p1, p2 = s.values
    d01 = (p1 - p0) / (t1 - t0)
    d12 = (p2 - p1) / (t2 - t1)
    d012 = (d12 - d01) / (t2 - t0)
    return p0 + (t - t0) * (d01 + (t - t1) * d012)


def second_divided_difference(s: Sample3) -> float:
    """f[t0,t1,t2] = (f[t1,t2] - f[t0,t1]) / (t2 - t0)."""
    t0, t1, t2 = s.times
    p0, p1, p2 = s.values
    return ((p2 - p1) / (t2 - t1) - (p1 - p0) / (t1 - t0)) / (t2 - t0)


def horizon_time(s: Sample3, rule: HorizonRule) -> float:
    t0, t1, t2 = s.times
    if rule.kind is HorizonKind.PAPER_EQ2:
        return t2 + (t0 + t1 + t2) / 3.0 + rule.discovery_period
    return t2 + rule.offset


def newton_predict(s: Sample3, prev_pred: float, rule: HorizonRule) -> float:
    """Divided-difference correction of the previous prediction.

    Returns prev_pred + (t_h - t0)(t_h - t1) * f[t0,t1,t2] with t_h the
    horizon time. The correction vanishes on affine data, so the previous
    prediction is passed through unchanged.
    """
    if not math.isfinite(prev_pred):
        raise ValidationError(f"non-finite prev_pred: {prev_pred!r}")
    t0, t1, _ = s.times
    t_h = horizon_time(s, rule)
    return prev_pred + (t_h - t0) * (t_h - t1) * second_divided_difference(s)


def predict_position_poly(
    traj: Trajectory,
    at_index: int,
    method: str,
    rule: HorizonRule,
    prev_pred: tuple[float, float] | None = None,
) -> tuple[float, tuple[float, float]]:
    """Predict the vehicle position one horizon past ``points[at_index]``.

    The scalar predictor runs independently on the x and y series of the
    three points ending at at_index. For ``newton`` without a previous
    prediction, the first step is bootstrapped with the Lagrange value at the
    same horizon.
    """
    if method not in ("lagrange", "newton"):
        raise ValueError(f"unknown method {method!r}")
    if at_index < 2:
        raise InsufficientHistoryError(
            f"need 3 history points, have {at_index + 1} at index {at_index}"
        )
    pts = traj.points[at_index - 2 : at_index + 1]
    times = tuple(p.t for p in pts)
    sx = Sample3(times, tuple(p.x for p in pts))
    sy = Sample3(times, tuple(p.y for p in pts))
    t_h = horizon_time(sx, rule)
    if method == "lagrange":
        return t_h, (lagrange_eval(sx, t_h), lagrange_eval(sy, t_h))
    if prev_pred is None:
        prev_pred = (lagrange_eval(sx, t_h), lagrange_eval(sy, t_h))
    return t_h, (
        newton_predict(sx, prev_pred[0], rule),
        newton_predict(sy, prev_pred[1], rule),
    )
