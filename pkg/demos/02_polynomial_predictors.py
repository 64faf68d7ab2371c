"""Quadratic interpolation and its divided-difference correction.

Run:  python3 demos/02_polynomial_predictors.py
"""

from tracecast import HorizonKind, HorizonRule, Sample3, lagrange_eval, newton_predict

# Three samples of x(t) = t^2 pin down the parabola exactly, so the
# extrapolation at any horizon is exact too.
s = Sample3((0.0, 1.0, 2.0), (0.0, 1.0, 4.0))
for t in (3.0, 5.0, 10.0):
    print(f"lagrange  x({t:4.1f}) = {lagrange_eval(s, t):7.2f}   (true {t * t:.2f})")

# The correction step takes a previous prediction and adds a curvature term
# built from the second divided difference of the latest window. Feeding it
# a deliberately bad previous prediction shows the term at work: it adds
# (t_h - t0)(t_h - t1) * f[t0,t1,t2] on top of whatever it is given.
rule = HorizonRule(HorizonKind.FIXED_OFFSET, offset=1.0)
for prev in (9.0, 0.0, 100.0):
    corrected = newton_predict(s, prev, rule)
    print(f"newton    prev {prev:6.1f} -> {corrected:7.2f}")

# On affine data the second divided difference vanishes, so the correction
# passes the previous prediction through untouched.
affine = Sample3((10.0, 11.0, 12.0), (35.0, 38.0, 41.0))
print("affine pass-through:", newton_predict(affine, 44.0, rule))

# Two horizon rules exist: a plain fixed offset, and the published rule that
# averages absolute sample times (which makes horizons grow with absolute t
# -- kept selectable for fidelity, not because it is recommended).
averaging = HorizonRule(HorizonKind.PAPER_EQ2, discovery_period=1.0)
from tracecast.interp import horizon_time

print("fixed-offset horizon:", horizon_time(s, rule))
print("time-averaging horizon:", horizon_time(s, averaging))
