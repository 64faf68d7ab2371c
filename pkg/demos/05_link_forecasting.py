"""Pairwise link-stability forecasts under a unit-disk range model.

Run:  python3 demos/05_link_forecasting.py
"""

from tracecast import TracePoint, Trajectory, forecast_pair, link_state, make_step_predictor


def linear(vid, x0, vx, n=30):
    return Trajectory(
        vid, tuple(TracePoint(float(i), x0 + vx * i, 0.0) for i in range(n))
    )


# Two vehicles can talk iff their separation is at most R meters.
print("100 m apart, R=200:", link_state((0, 0), (100, 0), 200.0))
print("300 m apart, R=200:", link_state((0, 0), (300, 0), 200.0))

# A diverging pair: gap grows 5 m/s, so with R = 62 the link must break at
# t = 12.4 -- the forecast lands on the first out-of-range grid sample.
a = linear("a", 0.0, +2.5)
b = linear("b", 0.0, -2.5)
fc = forecast_pair(a, b, at_time=2.0,
                   predictor=make_step_predictor("lagrange"),
                   range_m=62.0, lookahead_steps=20)
print(f"\ndiverging pair at t=2: distance {fc.predicted_distance:.1f} m, "
      f"state {fc.state}, break expected at t={fc.break_eta}")

# The rollout is recursive: each step re-anchors on the previous predicted
# points, never on future ground truth. With an exact predictor (quadratic
# interpolation on these linear paths) the rollout matches the real future.
truth_break = next(
    p.t for p, q in zip(a.points, b.points) if abs(p.x - q.x) > 62.0
)
print(f"ground-truth break time: t={truth_break}")
assert fc.break_eta == truth_break

# Stable pairs report no break within the lookahead.
c = linear("c", 30.0, +2.5)
fc2 = forecast_pair(a, c, 2.0, make_step_predictor("lagrange"), 100.0, 20)
print(f"parallel pair: state {fc2.state}, break_eta {fc2.break_eta}")
