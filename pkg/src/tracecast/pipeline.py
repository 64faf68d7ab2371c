"""Uniform driver for the four predictor families.

Everything downstream (evaluation, link forecasting, the CLI) consumes
predictors through two shapes:

  - ``predict_along``: slide a window over a full trajectory and emit one
    single-step prediction per anchor instant (the divided-difference
    predictor keeps its previous-prediction recursion per vehicle);
  - ``make_step_predictor``: wrap one family as a history -> (t, position)
    callable for recursive link rollouts.

When no horizon rule is given, each step predicts exactly one sampling
interval ahead (the next grid timestamp), which is what the evaluation
harness needs so ground truth exists at every predicted instant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TracecastError
from .interp import HorizonKind, HorizonRule, predict_position_poly
from .regress import lr_predict_position
from .svr import (
    DEFAULT_REGIME_PARAMS,
    DEFAULT_THRESHOLDS,
    RegimeLabel,
    RegimeThresholds,
    SvrParams,
    svr_predict_position,
)
from .trace import Trajectory

__all__ = [
    "PREDICTOR_NAMES",
    "SvrConfig",
    "PredictionRecord",
    "predict_along",
    "make_step_predictor",
]

PREDICTOR_NAMES = ("lagrange", "newton", "lr", "svr")


@dataclass(frozen=True)
class SvrConfig:
    regime_params: dict[RegimeLabel, SvrParams] = field(
        default_factory=lambda: dict(DEFAULT_REGIME_PARAMS)
    )
    thresholds: RegimeThresholds = DEFAULT_THRESHOLDS


@dataclass(frozen=True)
class PredictionRecord:
    vehicle_id: str
    predictor: str
    anchor_index: int
    t_pred: float
    position: tuple[float, float] | None
    regime: RegimeLabel | None = None
    error: str | None = None  # set when the predictor failed at this instant


def _step_rule(traj: Trajectory, at_index: int, rule: HorizonRule | None) -> HorizonRule:
    if rule is not None:
        return rule
    if at_index + 1 < len(traj.points):
        offset = traj.points[at_index + 1].t - traj.points[at_index].t
    else:
        offset = traj.points[at_index].t - traj.points[at_index - 1].t
    return HorizonRule(HorizonKind.FIXED_OFFSET, offset=offset)


def _one_step(traj, at_index, name, window_k, rule, svr_cfg, prev_pred):
    """Returns (t_pred, position, regime, new_prev_pred)."""
    step_rule = _step_rule(traj, at_index, rule)
    if name in ("lagrange", "newton"):
        t_p, pos = predict_position_poly(
            traj, at_index, name, step_rule,
            prev_pred=prev_pred if name == "newton" else None,
        )
        return t_p, pos, None, pos
    if name == "lr":
        t_p, pos = lr_predict_position(traj, at_index, window_k, step_rule)
        return t_p, pos, None, pos
    if name == "svr":
        t_p, pos, regime = svr_predict_position(
            traj, at_index, window_k,
            regime_params=svr_cfg.regime_params,
            thresholds=svr_cfg.thresholds,
            rule=step_rule,
        )
        return t_p, pos, regime, pos
    raise ValueError(f"unknown predictor {name!r}")


def predict_along(
    traj: Trajectory,
    name: str,
    window_k: int = 5,
    rule: HorizonRule | None = None,
    svr_cfg: SvrConfig | None = None,
    start_index: int | None = None,
) -> list[PredictionRecord]:
    """One single-step prediction per anchor index >= window_k - 1.

    Predictor failures at individual instants become records with ``error``
    set instead of aborting the sweep.
    """
    if svr_cfg is None:
        svr_cfg = SvrConfig()
    first = max(window_k - 1, 2) if start_index is None else start_index
    records = []
    prev_pred = None
    for i in range(first, len(traj.points)):
        try:
            t_p, pos, regime, prev_pred = _one_step(
                traj, i, name, window_k, rule, svr_cfg, prev_pred
            )
            records.append(
                PredictionRecord(traj.vehicle_id, name, i, t_p, pos, regime)
            )
        except TracecastError as exc:
            records.append(
                PredictionRecord(
                    traj.vehicle_id, name, i,
                    traj.points[i].t, None, None, error=str(exc),
                )
            )
    return records


def make_step_predictor(
    name: str,
    window_k: int = 5,
    rule: HorizonRule | None = None,
    svr_cfg: SvrConfig | None = None,
):
    """History -> (t_pred, position) callable anchored at the last point."""
    if svr_cfg is None:
        svr_cfg = SvrConfig()
    state: dict[str, tuple[float, float]] = {}

    def step(hist: Trajectory) -> tuple[float, tuple[float, float]]:
        prev = state.get(hist.vehicle_id)
        t_p, pos, _, new_prev = _one_step(
            hist, len(hist.points) - 1, name, window_k, rule, svr_cfg, prev
        )
        state[hist.vehicle_id] = new_prev
        return t_p, pos

    return step
