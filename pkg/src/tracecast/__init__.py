"""Vehicle trajectory extrapolation and link-stability forecasting.

Predicts future vehicle positions from mobility-trace history with four
predictor families (quadratic Lagrange interpolation, divided-difference
correction, windowed OLS, regime-switched epsilon-SVR), converts position
predictions into pairwise communication-link forecasts under a unit-disk
range model, and evaluates predictors against ground truth with deviation
series and MSE/MAE/RMSE/MAPE reports.
"""

from .errors import (
    AlignmentError,
    ConvergenceError,
    DegenerateGeometryError,
    InsufficientHistoryError,
    ParseError,
    TracecastError,
    ValidationError,
)
from .interp import HorizonKind, HorizonRule, Sample3, lagrange_eval, newton_predict
from .link import LinkForecast, LinkState, forecast_pair, link_state
from .metrics import (
    DeviationSeries,
    EvalReport,
    MetricValues,
    build_report,
    deviation,
    error_metrics,
    format_table,
    report_to_csv,
)
from .pipeline import SvrConfig, make_step_predictor, predict_along
from .regress import LinearFit, fit_ols, lr_predict_position
from .svr import (
    DEFAULT_REGIME_PARAMS,
    DEFAULT_THRESHOLDS,
    RegimeLabel,
    RegimeThresholds,
    SvrModel,
    SvrParams,
    classify_regime,
    rbf_kernel,
    svr_predict,
    svr_predict_position,
    svr_train,
)
from .synth import ScenarioKind, ScenarioSpec, generate, generate_traces
from .trace import (
    TracePoint,
    TraceSet,
    Trajectory,
    derive_speeds,
    emit_csv,
    parse_csv,
    parse_fcd_xml,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "ConvergenceError",
    "DegenerateGeometryError",
    "InsufficientHistoryError",
    "ParseError",
    "TracecastError",
    "ValidationError",
    "HorizonKind",
    "HorizonRule",
    "Sample3",
    "lagrange_eval",
    "newton_predict",
    "LinkForecast",
    "LinkState",
    "forecast_pair",
    "link_state",
    "DeviationSeries",
    "EvalReport",
    "MetricValues",
    "build_report",
    "deviation",
    "error_metrics",
    "format_table",
    "report_to_csv",
    "SvrConfig",
    "make_step_predictor",
    "predict_along",
    "LinearFit",
    "fit_ols",
    "lr_predict_position",
    "DEFAULT_REGIME_PARAMS",
    "DEFAULT_THRESHOLDS",
    "RegimeLabel",
    "RegimeThresholds",
    "SvrModel",
    "SvrParams",
    "classify_regime",
    "rbf_kernel",
    "svr_predict",
    "svr_predict_position",
    "svr_train",
    "ScenarioKind",
    "ScenarioSpec",
    "generate",
    "generate_traces",
    "TracePoint",
    "TraceSet",
    "Trajectory",
    "derive_speeds",
    "emit_csv",
    "parse_csv",
    "parse_fcd_xml",
    "__version__",
]
