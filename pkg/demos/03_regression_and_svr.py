"""Windowed least squares and regime-switched epsilon-SVR.

Run:  python3 demos/03_regression_and_svr.py
"""

import numpy as np

from tracecast import (
    RegimeLabel,
    ScenarioKind,
    ScenarioSpec,
    SvrParams,
    classify_regime,
    fit_ols,
    generate_traces,
    svr_predict,
    svr_predict_position,
    svr_train,
)
from tracecast.interp import HorizonKind, HorizonRule

FIXED1 = HorizonRule(HorizonKind.FIXED_OFFSET, offset=1.0)

# --- ordinary least squares over a sliding window -------------------------
rng = np.random.default_rng(0)
t = np.arange(10.0)
x = 12.0 * t + 40.0 + rng.normal(0, 0.8, 10)
fit = fit_ols(t, x)
print(f"OLS slope {fit.slope:.3f} (true 12), intercept {fit.intercept:.3f} "
      f"(true 40), x(12) = {fit(12.0):.1f}")

# --- a small SVR, trained and queried ------------------------------------
t = np.arange(8.0)
y = 3.0 * t + rng.normal(0, 0.3, 8)
model = svr_train(t, y, SvrParams(C=100.0, epsilon=0.05, gamma=0.1))
print(f"SVR: {int(np.sum(model.betas != 0))}/{len(t)} support vectors, "
      f"KKT residual {model.kkt_residual:.2e}")
for tq in (8.0, 9.0):
    print(f"     y({tq:.0f}) predicted {svr_predict(model, tq):6.2f} "
          f"(line gives {3.0 * tq:.2f})")

# --- regime classification over speed windows ----------------------------
windows = {
    "constant high": [30, 30, 30, 30, 30],
    "dip and recover": [12, 8, 5, 8, 12],
    "decay to stop": [10, 6, 2, 0, 0],
    "start from stop": [0, 0, 2, 5, 9],
}
for name, w in windows.items():
    print(f"{name:16s} -> {classify_regime(w).value}")

# --- the full position predictor on an intersection turn -----------------
traces = generate_traces(ScenarioSpec(ScenarioKind.INTERSECTION_TURN, duration=60))
traj = traces.trajectories["v0"]
seen = []
for i in range(4, len(traj.points)):
    _, _, regime = svr_predict_position(traj, i, 5, rule=FIXED1)
    if not seen or seen[-1] is not regime:
        seen.append(regime)
print("regime sequence through the turn:", " -> ".join(r.value for r in seen))
assert RegimeLabel.SVR2 in seen  # the slowdown window is recognized
