"""Command-line front end: synth -> predict -> evaluate / linkcheck.

All commands are deterministic given their flags, seed, and config file.
Data goes to the output files only; warnings go to stderr (and a sidecar
log for skipped vehicles). Exit codes: 0 success, 1 usage error, 2
data/validation error, 3 numerical-convergence error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import synth
from .config import load_config
from .errors import (
    AlignmentError,
    ConvergenceError,
    InsufficientHistoryError,
    ParseError,
    TracecastError,
    ValidationError,
)
from .interp import HorizonKind, HorizonRule
from .link import forecast_pair
from .metrics import build_report, format_table, report_to_csv
from .pipeline import PREDICTOR_NAMES, SvrConfig, make_step_predictor, predict_along
from .trace import TraceSet, emit_csv, parse_csv, parse_fcd_xml

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fmt(v: float) -> str:
    return repr(float(v))


def _load_traces(path: str) -> TraceSet:
    data = Path(path).read_bytes()
    name = Path(path).stem
    if data.lstrip().startswith(b"<"):
        return parse_fcd_xml(data, scenario_name=name)
    return parse_csv(data, scenario_name=name)


def _parse_horizon(spec: str) -> HorizonRule | None:
    if spec == "next":
        return None
    kind, _, arg = spec.partition(":")
    try:
        val = float(arg) if arg else None
    except ValueError:
        raise ValidationError(f"bad horizon argument {arg!r}") from None
    if kind == "fixed":
        return HorizonRule(HorizonKind.FIXED_OFFSET, offset=val if val else 1.0)
    if kind == "eq2":
        return HorizonRule(HorizonKind.PAPER_EQ2,
                           discovery_period=val if val is not None else 0.0)
    raise ValidationError(f"unknown horizon rule {spec!r} (next | fixed:S | eq2:S)")


def _predictor_list(arg: str) -> list[str]:
    names = [p.strip() for p in arg.split(",") if p.strip()]
    if not names:
        raise ValidationError("no predictors selected")
    for n in names:
        if n not in PREDICTOR_NAMES:
            raise ValidationError(
                f"unknown predictor {n!r} (choose from {', '.join(PREDICTOR_NAMES)})"
            )
    return names


def _svr_setup(args) -> tuple[SvrConfig, int]:
    if getattr(args, "config", None):
        svr_cfg, cfg_window = load_config(args.config)
    else:
        svr_cfg, cfg_window = SvrConfig(), None
    window_k = args.window_k if args.window_k is not None else (cfg_window or 5)
    return svr_cfg, window_k


# ---------------------------------------------------------------------------


def cmd_synth(args) -> int:
    spec = synth.ScenarioSpec(
        kind=synth.ScenarioKind.from_name(args.kind),
        duration=args.duration,
        dt=args.dt,
        seed=args.seed,
        noise_sigma=args.noise,
        n_vehicles=args.vehicles,
    )
    traces = synth.generate_traces(spec)
    Path(args.output).write_bytes(emit_csv(traces))
    return EXIT_OK


def cmd_predict(args) -> int:
    traces = _load_traces(args.input)
    predictors = _predictor_list(args.predictors)
    rule = _parse_horizon(args.horizon)
    svr_cfg, window_k = _svr_setup(args)

    rows = []
    skipped = []
    for vid in traces.vehicle_ids():
        traj = traces.trajectories[vid]
        if len(traj) < window_k:
            skipped.append(f"{vid}: only {len(traj)} points, need {window_k}")
            continue
        for name in predictors:
            for rec in predict_along(traj, name, window_k, rule, svr_cfg):
                if rec.error is not None:
                    skipped.append(f"{vid}/{name}@{rec.anchor_index}: {rec.error}")
                    continue
                regime = rec.regime.value if rec.regime is not None else ""
                rows.append(
                    (vid, rec.t_pred, name,
                     f"{vid},{_fmt(rec.t_pred)},{_fmt(rec.position[0])},"
                     f"{_fmt(rec.position[1])},{name},{regime}")
                )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    out = "vehicle_id,t,x_pred,y_pred,predictor,regime\n" + "".join(
        r[3] + "\n" for r in rows
    )
    Path(args.output).write_text(out, encoding="utf-8")
    if skipped:
        log = Path(args.output).with_suffix(Path(args.output).suffix + ".log")
        log.write_text("".join(s + "\n" for s in skipped), encoding="utf-8")
        for s in skipped:
            sys.stderr.write(f"warning: {s}\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    traces = _load_traces(args.input)
    predictors = _predictor_list(args.predictors)
    rule = _parse_horizon(args.horizon)
    svr_cfg, window_k = _svr_setup(args)

    report = build_report(traces, predictors, window_k, rule, svr_cfg)
    csv_text = f"# config: {report.config_echo}\n" + report_to_csv(report)
    Path(args.output).write_text(csv_text, encoding="utf-8")

    dev_path = args.deviations or str(Path(args.output).with_suffix("")) + "_deviations.csv"
    lines = ["vehicle_id,t,predictor,dist\n"]
    for vid in traces.vehicle_ids():
        for name in predictors:
            series = report.per_vehicle_deviations.get((vid, name))
            if series is None:
                continue
            for t, d in zip(series.times, series.dist):
                lines.append(f"{vid},{_fmt(t)},{name},{_fmt(d)}\n")
    Path(dev_path).write_text("".join(lines), encoding="utf-8")

    sys.stdout.write(format_table(report))
    sys.stdout.write(f"config: {report.config_echo}\n")
    return EXIT_OK


def cmd_linkcheck(args) -> int:
    traces = _load_traces(args.input)
    if len(traces) < 2:
        raise ValidationError("need >= 2 vehicles for link forecasting")
    rule = _parse_horizon(args.horizon)
    svr_cfg, window_k = _svr_setup(args)
    min_hist = max(window_k, 3) if args.predictor in ("lr", "svr") else 3

    rows = []
    vids = traces.vehicle_ids()
    for va, vb in itertools.combinations(vids, 2):
        ta = traces.trajectories[va]
        tb = traces.trajectories[vb]
        n_anchor = min(len(ta), len(tb))
        for i in range(min_hist - 1, n_anchor):
            at_time = ta.points[i].t
            predictor = make_step_predictor(
                args.predictor, window_k, rule, svr_cfg
            )
            try:
                fc = forecast_pair(
                    ta, tb, at_time, predictor, args.range, args.lookahead
                )
            except (InsufficientHistoryError, AlignmentError) as exc:
                sys.stderr.write(f"warning: {va}/{vb}@{at_time}: {exc}\n")
                continue
            eta = "" if fc.break_eta is None else _fmt(fc.break_eta)
            rows.append(
                (at_time, va, vb,
                 f"{_fmt(at_time)},{va},{vb},{_fmt(fc.predicted_distance)},"
                 f"{fc.state},{eta}")
            )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    out = "t,veh_a,veh_b,dist_pred,state,break_eta\n" + "".join(
        r[3] + "\n" for r in rows
    )
    Path(args.output).write_text(out, encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="tracecast",
                     description="Vehicle trajectory prediction and link forecasting")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scenario trace")
    p.add_argument("--kind", required=True,
                   help="road | intersection | city (or the full archetype names)")
    p.add_argument("--duration", type=float, required=True)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="positional jitter sigma, m")
    p.add_argument("--vehicles", type=int, default=3)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    def common_predict_flags(p):
        p.add_argument("-i", "--input", required=True, help="trace CSV or FCD XML")
        p.add_argument("--window-k", type=int, default=None)
        p.add_argument("--horizon", default="next",
                       help="next | fixed:SECONDS | eq2:DISCOVERY_PERIOD")
        p.add_argument("--config", default=None, help="SVR/regime key=value file")

    p = sub.add_parser("predict", help="per-vehicle predicted traces")
    common_predict_flags(p)
    p.add_argument("--predictors", default="lagrange,newton,lr,svr")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="error-metric report and deviation series")
    common_predict_flags(p)
    p.add_argument("--predictors", default="lagrange,newton,lr,svr")
    p.add_argument("--deviations", default=None,
                   help="deviation-series CSV path (default: <output>_deviations.csv)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("linkcheck", help="pairwise link-state forecasts")
    common_predict_flags(p)
    p.add_argument("--predictor", default="lagrange", choices=PREDICTOR_NAMES)
    p.add_argument("--range", type=float, default=250.0,
                   help="transmission range R, meters")
    p.add_argument("--lookahead", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_linkcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONVERGENCE
    except (ParseError, ValidationError, AlignmentError,
            InsufficientHistoryError, TracecastError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
