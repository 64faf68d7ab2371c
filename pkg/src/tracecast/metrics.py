"""Trajectory-deviation series and the four aggregate error metrics.

The per-instant deviation is the Euclidean distance between real and
predicted position; a zero series means the predicted trajectory coincides
with the real one. The aggregate metrics treat that scalar deviation d_i as
the residual:

    MSE  = mean(d_i^2)         MAE  = mean(d_i)
    RMSE = sqrt(MSE)           MAPE = 100 * mean(d_i / ||P_i||)

MAPE divides by the real position's norm measured from the scenario
bounding-box corner; instants closer than 1e-6 m to that origin are excluded
and counted, and MAPE is reported absent (not zero) if nothing survives.
RMSE is computed as sqrt(MSE) by construction, so the identity holds even
though the published table this layout mirrors does not satisfy it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ValidationError
from .interp import HorizonRule
from .pipeline import SvrConfig, predict_along
from .svr import RegimeLabel
from .trace import TraceSet, Trajectory

__all__ = [
    "DeviationSeries",
    "MetricValues",
    "EvalReport",
    "deviation",
    "error_metrics",
    "build_report",
    "report_to_csv",
    "format_table",
]

METRIC_NAMES = ("MSE", "MAE", "RMSE", "MAPE")
PREDICTOR_ORDER = ("lr", "svr", "lagrange", "newton")
SCENARIO_ORDER = ("city", "road", "intersection")
MAPE_ORIGIN_EPS = 1e-6


@dataclass(frozen=True)
class DeviationSeries:
    times: tuple[float, ...]
    dist: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.dist):
            raise ValidationError("times and dist must have equal length")
        if any(d < 0 for d in self.dist):
            raise ValidationError("negative deviation")


@dataclass(frozen=True)
class MetricValues:
    mse: float
    mae: float
    rmse: float
    mape: float | None  # None when every instant was MAPE-excluded
    mape_excluded: int = 0

    def as_dict(self) -> dict[str, float | None]:
        return {"MSE": self.mse, "MAE": self.mae, "RMSE": self.rmse, "MAPE": self.mape}


@dataclass(frozen=True)
class PredictorStats:
    metrics: MetricValues
    n: int  # evaluated instants
    errors: int  # predictor failures excluded from aggregation
    interpolated_truth: int  # off-grid horizons compared to interpolated truth
    deviations: DeviationSeries = field(repr=False, default=DeviationSeries((), ()))


@dataclass(frozen=True)
class EvalReport:
    scenario: str
    per_predictor: dict[str, PredictorStats]
    config_echo: str
    per_vehicle_deviations: dict[tuple[str, str], DeviationSeries] = field(
        default_factory=dict, repr=False
    )


def deviation(real: Trajectory, predicted) -> DeviationSeries:
    """Per-instant Euclidean distance between real and predicted points.

    Every predicted timestamp must match a real sample exactly (1e-9 slack
    for float round-trips); otherwise an AlignmentError lists the offenders.
    """
    index = {round(p.t, 9): p for p in real.points}
    times, dists, missing = [], [], []
    for t, pos in predicted:
        p = index.get(round(t, 9))
        if p is None:
            missing.append(t)
            continue
        times.append(p.t)
        dists.append(math.hypot(p.x - pos[0], p.y - pos[1]))
    if missing:
        raise AlignmentError(
            f"vehicle {real.vehicle_id!r}: predicted timestamps with no "
            f"matching real sample: {missing[:10]}"
        )
    return DeviationSeries(tuple(times), tuple(dists))


def error_metrics(real_positions, predicted_positions, origin=(0.0, 0.0)) -> MetricValues:
    """Aggregate MSE/MAE/RMSE/MAPE of paired real vs predicted positions.

    ``origin`` is subtracted from real positions before taking the MAPE
    denominator norm.
    """
    real = np.asarray(real_positions, dtype=float)
    pred = np.asarray(predicted_positions, dtype=float)
    if real.shape != pred.shape or real.ndim != 2 or real.shape[1] != 2:
        raise ValidationError("need equal-length sequences of 2-D points")
    if real.shape[0] == 0:
        raise ValidationError("empty input")
    d = np.hypot(real[:, 0] - pred[:, 0], real[:, 1] - pred[:, 1])
    mse = float(np.mean(d**2))
    mae = float(np.mean(d))
    rmse = math.sqrt(mse)
    norms = np.hypot(real[:, 0] - origin[0], real[:, 1] - origin[1])
    keep = norms >= MAPE_ORIGIN_EPS
    excluded = int(np.sum(~keep))
    mape = float(100.0 * np.mean(d[keep] / norms[keep])) if np.any(keep) else None
    return MetricValues(mse, mae, rmse, mape, mape_excluded=excluded)


def _bbox_origin(traces: TraceSet) -> tuple[float, float]:
    xs = [p.x for tr in traces.trajectories.values() for p in tr.points]
    ys = [p.y for tr in traces.trajectories.values() for p in tr.points]
    return (min(xs), min(ys))


def _truth_at(traj: Trajectory, t: float):
    """Real position at t: exact sample, or linear interpolation off-grid.

    Returns (position, interpolated?) or None when t is outside the trace.
    """
    pts = traj.points
    if t < pts[0].t - 1e-9 or t > pts[-1].t + 1e-9:
        return None
    for i, p in enumerate(pts):
        if abs(p.t - t) <= 1e-9:
            return (p.x, p.y), False
        if p.t > t:
            a = pts[i - 1]
            w = (t - a.t) / (p.t - a.t)
            return (a.x + w * (p.x - a.x), a.y + w * (p.y - a.y)), True
    return None


def build_report(
    traces: TraceSet,
    predictors=PREDICTOR_ORDER,
    window_k: int = 5,
    rule: HorizonRule | None = None,
    svr_cfg: SvrConfig | None = None,
) -> EvalReport:
    """Slide a window along every trajectory and aggregate the four metrics.

    One single-step prediction per instant per predictor; instants whose
    horizon falls past the trace end are skipped, predictor failures are
    counted and excluded (never silently dropped). Aggregation folds vehicles
    in id order so the output is deterministic.
    """
    if not predictors:
        raise ValidationError("no predictors selected")
    if svr_cfg is None:
        svr_cfg = SvrConfig()
    origin = _bbox_origin(traces)
    per_predictor = {}
    per_vehicle: dict[tuple[str, str], DeviationSeries] = {}
    for name in predictors:
        real_pts, pred_pts = [], []
        times_all, dists_all = [], []
        errors = 0
        interpolated = 0
        for vid in traces.vehicle_ids():
            traj = traces.trajectories[vid]
            v_times, v_dists = [], []
            for rec in predict_along(traj, name, window_k, rule, svr_cfg):
                if rec.error is not None:
                    errors += 1
                    continue
                truth = _truth_at(traj, rec.t_pred)
                if truth is None:
                    continue  # horizon beyond trace end: nothing to compare
                real_pos, interp_flag = truth
                interpolated += int(interp_flag)
                real_pts.append(real_pos)
                pred_pts.append(rec.position)
                d = math.hypot(
                    real_pos[0] - rec.position[0], real_pos[1] - rec.position[1]
                )
                v_times.append(rec.t_pred)
                v_dists.append(d)
            per_vehicle[(vid, name)] = DeviationSeries(tuple(v_times), tuple(v_dists))
            times_all.extend(v_times)
            dists_all.extend(v_dists)
        if not real_pts:
            raise ValidationError(
                f"predictor {name!r}: no evaluable instants in scenario "
                f"{traces.scenario_name!r}"
            )
        mv = error_metrics(real_pts, pred_pts, origin=origin)
        per_predictor[name] = PredictorStats(
            metrics=mv,
            n=len(real_pts),
            errors=errors,
            interpolated_truth=interpolated,
            deviations=DeviationSeries(tuple(times_all), tuple(dists_all)),
        )
    echo = _config_echo(predictors, window_k, rule, svr_cfg)
    return EvalReport(traces.scenario_name, per_predictor, echo, per_vehicle)


def _config_echo(predictors, window_k, rule, svr_cfg: SvrConfig) -> str:
    parts = [
        f"predictors={','.join(predictors)}",
        f"window.k={window_k}",
        f"horizon={'next-sample' if rule is None else f'{rule.kind.value} discovery={rule.discovery_period} offset={rule.offset}'}",
        f"regime.high_speed={svr_cfg.thresholds.high_speed}",
        f"regime.low_speed={svr_cfg.thresholds.low_speed}",
        f"regime.stop_speed={svr_cfg.thresholds.stop_speed}",
        f"regime.slope_eps={svr_cfg.thresholds.slope_eps}",
    ]
    for label in ("SVR1", "SVR2", "SVR3", "SVR4"):
        p = svr_cfg.regime_params[RegimeLabel(label)]
        key = label.lower()
        parts.append(f"{key}.c={p.C} {key}.epsilon={p.epsilon} {key}.gamma={p.gamma}")
    return "; ".join(parts)


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def report_to_csv(reports) -> str:
    """`scenario,predictor,metric,value,n,excluded` rows for one or more reports."""
    if isinstance(reports, EvalReport):
        reports = [reports]
    out = io.StringIO()
    out.write("scenario,predictor,metric,value,n,excluded\n")
    for rep in reports:
        for name, stats in rep.per_predictor.items():
            vals = stats.metrics.as_dict()
            for metric in METRIC_NAMES:
                excluded = stats.errors
                if metric == "MAPE":
                    excluded += stats.metrics.mape_excluded
                out.write(
                    f"{rep.scenario},{name},{metric},{_fmt(vals[metric])},"
                    f"{stats.n},{excluded}\n"
                )
    return out.getvalue()


def _scenario_sort_key(name: str):
    lname = name.lower()
    if lname in SCENARIO_ORDER:
        return (SCENARIO_ORDER.index(lname), name)
    return (len(SCENARIO_ORDER), name)


def format_table(reports) -> str:
    """Aligned text table: scenarios as rows, metric x predictor columns.

    Scenario rows come in City, Road, Intersection order when those names are
    present; the divided-difference column is marked supplementary with '*'.
    """
    if isinstance(reports, EvalReport):
        reports = [reports]
    reports = sorted(reports, key=lambda r: _scenario_sort_key(r.scenario))
    predictors = [
        p
        for p in PREDICTOR_ORDER
        if any(p in rep.per_predictor for rep in reports)
    ]
    display = {"lr": "LR", "svr": "SVR", "lagrange": "Lagrange", "newton": "Newton*"}

    header = ["Scenario"]
    for metric in METRIC_NAMES:
        for p in predictors:
            header.append(f"{metric}/{display[p]}")
    rows = [header]
    for rep in reports:
        row = [rep.scenario.capitalize()]
        for metric in METRIC_NAMES:
            for p in predictors:
                stats = rep.per_predictor.get(p)
                if stats is None:
                    row.append("-")
                    continue
                v = stats.metrics.as_dict()[metric]
                row.append("n/a" if v is None else f"{v:.4g}")
        rows.append(row)

    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows
    ]
    if "newton" in predictors:
        lines.append("* divided-difference predictor, extra column")
    return "\n".join(lines) + "\n"
