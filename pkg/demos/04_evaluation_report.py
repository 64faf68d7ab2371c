"""Sliding-window evaluation: deviations and the four error metrics.

Run:  python3 demos/04_evaluation_report.py
"""

from tracecast import (
    ScenarioKind,
    ScenarioSpec,
    build_report,
    error_metrics,
    format_table,
    generate_traces,
    report_to_csv,
)

# The metrics treat the per-instant Euclidean deviation as the residual.
# Deviations (3, 4) give MSE (9 + 16)/2 = 12.5 and MAE 3.5.
mv = error_metrics([(10.0, 0.0), (0.0, 10.0)], [(13.0, 0.0), (0.0, 14.0)])
print(f"hand case: MSE {mv.mse}, MAE {mv.mae}, RMSE {mv.rmse:.4f}")
assert abs(mv.rmse**2 - mv.mse) < 1e-12  # the identity always holds here

# Evaluate all four predictor families on each scenario; one single-step
# prediction per window position, compared against the ground-truth sample
# at the predicted instant.
reports = []
for kind, name in ((ScenarioKind.CITY_STOP_AND_GO, "city"),
                   (ScenarioKind.STRAIGHT_HIGHWAY, "road"),
                   (ScenarioKind.INTERSECTION_TURN, "intersection")):
    traces = generate_traces(ScenarioSpec(kind, duration=40, seed=3))
    reports.append(build_report(traces, predictors=("lr", "svr", "lagrange")))

print()
print(format_table(reports))

# The same numbers in machine-readable form.
print(report_to_csv(reports[1]))
