"""Pairwise communication-link forecasting under a unit-disk range model.

Two vehicles can talk iff their Euclidean separation is at most R meters
(boundary inclusive, so the zero-measure tie is deterministic). Positions at
future instants come from any single-step position predictor; multi-step
lookahead re-anchors each step on the previously predicted points rather
than peeking at future ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import AlignmentError, InsufficientHistoryError, ValidationError
from .trace import TracePoint, Trajectory

__all__ = ["LinkState", "LinkForecast", "link_state", "forecast_pair"]


class LinkState:
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class LinkForecast:
    pair: tuple[str, str]
    t_pred: float
    predicted_distance: float
    range: float
    state: str
    break_eta: float | None = None


def link_state(p_a, p_b, range_m: float) -> str:
    """'up' iff the pair is within range (distance <= R)."""
    if range_m <= 0:
        raise ValidationError(f"range must be > 0, got {range_m}")
    xa, ya = p_a
    xb, yb = p_b
    if not all(math.isfinite(v) for v in (xa, ya, xb, yb)):
        raise ValidationError("non-finite position")
    return LinkState.UP if math.hypot(xa - xb, ya - yb) <= range_m else LinkState.DOWN


# A single-step predictor maps a history trajectory (anchored at its last
# point) to (t_pred, (x, y)). The cli module builds these from the predictor
# families; the forecaster only needs this callable shape.
StepPredictor = Callable[[Trajectory], tuple[float, tuple[float, float]]]


def _index_at(traj: Trajectory, at_time: float, half_step: float) -> int:
    best, best_err = None, math.inf
    for i, p in enumerate(traj.points):
        err = abs(p.t - at_time)
        if err < best_err:
            best, best_err = i, err
    if best is None or best_err > half_step:
        raise AlignmentError(
            f"vehicle {traj.vehicle_id!r}: no sample within {half_step:g} s "
            f"of t={at_time}"
        )
    return best


def _median_step(traj: Trajectory) -> float:
    ts = traj.times()
    if len(ts) < 2:
        return math.inf
    gaps = sorted(b - a for a, b in zip(ts, ts[1:]))
    return gaps[len(gaps) // 2]


def forecast_pair(
    traj_a: Trajectory,
    traj_b: Trajectory,
    at_time: float,
    predictor: StepPredictor,
    range_m: float,
    lookahead_steps: int = 1,
) -> LinkForecast:
    """Forecast the link between two vehicles from time ``at_time`` onward.

    Rolls the single-step predictor forward ``lookahead_steps`` times for
    both vehicles, appending each predicted point to the working history.
    The reported distance/state are for the first horizon; break_eta is the
    first horizon at which the pair falls out of range, if any.
    """
    if lookahead_steps < 1:
        raise ValidationError("lookahead_steps must be >= 1")
    step = min(_median_step(traj_a), _median_step(traj_b))
    if not math.isfinite(step):
        raise InsufficientHistoryError("trajectories too short to infer a grid")
    ia = _index_at(traj_a, at_time, step / 2.0)
    ib = _index_at(traj_b, at_time, step / 2.0)
    if abs(traj_a.points[ia].t - traj_b.points[ib].t) > step / 2.0:
        raise AlignmentError(
            f"anchor timestamps differ by more than half a step: "
            f"{traj_a.points[ia].t} vs {traj_b.points[ib].t}"
        )

    hist_a = Trajectory(traj_a.vehicle_id, traj_a.points[: ia + 1])
    hist_b = Trajectory(traj_b.vehicle_id, traj_b.points[: ib + 1])

    first_t = first_dist = first_state = None
    break_eta = None
    for _ in range(lookahead_steps):
        ta, pa = predictor(hist_a)
        tb, pb = predictor(hist_b)
        t_pred = (ta + tb) / 2.0  # identical grids make these equal
        dist = math.hypot(pa[0] - pb[0], pa[1] - pb[1])
        state = LinkState.UP if dist <= range_m else LinkState.DOWN
        if first_t is None:
            first_t, first_dist, first_state = t_pred, dist, state
        if state == LinkState.DOWN and break_eta is None:
            break_eta = t_pred
            break
        hist_a = Trajectory(
            hist_a.vehicle_id, hist_a.points + (TracePoint(ta, pa[0], pa[1]),)
        )
        hist_b = Trajectory(
            hist_b.vehicle_id, hist_b.points + (TracePoint(tb, pb[0], pb[1]),)
        )

    return LinkForecast(
        pair=(traj_a.vehicle_id, traj_b.vehicle_id),
        t_pred=first_t,
        predicted_distance=first_dist,
        range=range_m,
        state=first_state,
        break_eta=break_eta,
    )
