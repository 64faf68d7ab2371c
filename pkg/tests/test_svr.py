import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import svr_dual_qp
from tracecast.errors import InsufficientHistoryError, ValidationError
from tracecast.interp import HorizonKind, HorizonRule
from tracecast.svr import (
    DEFAULT_THRESHOLDS,
    RegimeLabel,
    RegimeThresholds,
    SvrParams,
    classify_regime,
    dual_objective,
    kkt_gap,
    rbf_kernel,
    svr_predict,
    svr_predict_position,
    svr_train,
)
from tracecast.synth import ScenarioKind, ScenarioSpec, generate
from tracecast.trace import TracePoint, Trajectory

FIXED1 = HorizonRule(HorizonKind.FIXED_OFFSET, offset=1.0)


# -------------------------------------------------------------- kernel


def test_kernel_zero_distance():
    assert rbf_kernel([1.0, 2.0], [1.0, 2.0], gamma=3.7) == 1.0


def test_kernel_unit_distance():
    assert rbf_kernel([0.0], [1.0], gamma=1.0) == pytest.approx(np.exp(-1), rel=1e-12)


def test_kernel_dimension_mismatch():
    with pytest.raises(ValidationError):
        rbf_kernel([0.0], [1.0, 2.0], gamma=1.0)


@given(
    st.lists(st.floats(-8, 8), min_size=2, max_size=2),
    st.lists(st.floats(-8, 8), min_size=2, max_size=2),
    st.floats(0.01, 2),
)
@settings(max_examples=200, deadline=None)
def test_kernel_symmetric_and_bounded(a, b, gamma):
    kab = rbf_kernel(a, b, gamma)
    assert kab == rbf_kernel(b, a, gamma)
    assert 0.0 < kab <= 1.0


# -------------------------------------------------------------- training


def test_constant_targets_all_beta_zero():
    m = svr_train(np.arange(6.0), np.full(6, 3.25), SvrParams(epsilon=0.1))
    assert np.all(m.betas == 0.0)
    for t in (-5.0, 2.5, 40.0):
        assert svr_predict(m, t) == pytest.approx(3.25, abs=1e-9)


def test_two_points_within_tube():
    # |y1 - y2| <= 2 eps normalized: spread 2 in normalized units needs eps >= 1
    m = svr_train([0.0, 1.0], [5.0, 5.1], SvrParams(epsilon=1.0))
    assert np.all(m.betas == 0.0)
    assert dual_objective(np.eye(2), np.zeros(2), m.betas, 1.0) == 0.0
    a, b = svr_predict(m, 0.0), svr_predict(m, 1.0)
    assert a == pytest.approx(b, abs=1e-12)  # constant within both tubes
    assert abs(a - 5.0) <= 0.11 and abs(a - 5.1) <= 0.11


def _random_set(rng, n):
    t = np.cumsum(rng.uniform(0.3, 1.5, n))
    y = rng.uniform(-3, 3) * t + rng.normal(0, 2.0, n) + rng.uniform(-5, 5)
    return t, y


def test_eight_point_oracle_equivalence():
    rng = np.random.default_rng(11)
    t, y = _random_set(rng, 8)
    params = SvrParams(C=10.0, epsilon=0.1, gamma=0.5, tolerance=1e-8)
    m = svr_train(t, y, params)
    z, yn = m.inputs, m.targets
    d = z[:, None] - z[None, :]
    K = np.exp(-params.gamma * d * d)
    mine = dual_objective(K, yn, m.betas, params.epsilon)
    _, oracle_obj = svr_dual_qp(K, yn, params.C, params.epsilon)
    assert mine == pytest.approx(oracle_obj, abs=1e-4)


def test_oracle_predictions_match():
    rng = np.random.default_rng(23)
    t, y = _random_set(rng, 8)
    params = SvrParams(C=10.0, epsilon=0.1, gamma=0.5, tolerance=1e-8)
    m = svr_train(t, y, params)
    z, yn = m.inputs, m.targets
    d = z[:, None] - z[None, :]
    K = np.exp(-params.gamma * d * d)
    beta_o, _ = svr_dual_qp(K, yn, params.C, params.epsilon)
    # oracle bias: intersect the per-sample KKT intervals for the multiplier
    F = yn - K @ beta_o
    C, eps = params.C, params.epsilon
    tol = 1e-5 * C
    lo, hi = [], []
    for b, f in zip(beta_o, F):
        if abs(b) <= tol:
            lo.append(f - eps)
            hi.append(f + eps)
        elif b >= C - tol:
            hi.append(f - eps)
        elif b <= -C + tol:
            lo.append(f + eps)
        elif b > 0:
            lo.append(f - eps)
            hi.append(f - eps)
        else:
            lo.append(f + eps)
            hi.append(f + eps)
    bias_o = (max(lo) + min(hi)) / 2.0
    t_mean, t_scale = m.input_scaler
    y_mean, y_scale = m.target_scaler
    for tq in np.linspace(t[0] - 1, t[-1] + 1, 20):
        zq = (tq - t_mean) / t_scale
        fo = float(beta_o @ np.exp(-params.gamma * (z - zq) ** 2)) + bias_o
        assert svr_predict(m, tq) == pytest.approx(
            fo * y_scale + y_mean, abs=1e-3 * max(1.0, abs(y_scale))
        )


def test_dual_feasibility_and_kkt():
    rng = np.random.default_rng(5)
    for n in (4, 6, 9):
        t, y = _random_set(rng, n)
        params = SvrParams(C=5.0, epsilon=0.05, gamma=1.0, tolerance=1e-7)
        m = svr_train(t, y, params)
        assert abs(float(np.sum(m.betas))) < 1e-8
        assert np.all(np.abs(m.betas) <= params.C + 1e-12)
        assert kkt_gap(m) < params.tolerance


def test_monotone_dual_objective():
    rng = np.random.default_rng(77)
    t, y = _random_set(rng, 10)
    m = svr_train(t, y, SvrParams(C=50.0, epsilon=0.02, gamma=0.8, tolerance=1e-8))
    trace = np.array(m.objective_trace)
    assert np.all(np.diff(trace) <= 1e-12)


def test_training_points_inside_tube_when_unsaturated():
    t = np.arange(6.0)
    y = 2.0 * t + 1.0
    params = SvrParams(C=1000.0, epsilon=0.05, gamma=0.05, tolerance=1e-8)
    m = svr_train(t, y, params)
    if np.all(np.abs(m.betas) < params.C - 1e-9):
        _, y_scale = m.target_scaler
        for ti, yi in zip(t, y):
            assert abs(svr_predict(m, ti) - yi) <= (
                params.epsilon + 10 * params.tolerance
            ) * y_scale + 1e-9


def test_prediction_continuity():
    rng = np.random.default_rng(3)
    t, y = _random_set(rng, 7)
    m = svr_train(t, y, SvrParams(C=10, epsilon=0.05, gamma=1.0, tolerance=1e-7))
    q = np.linspace(t[0], t[-1], 2000)
    vals = np.array([svr_predict(m, ti) for ti in q])
    assert np.max(np.abs(np.diff(vals))) < 0.05 * (np.max(vals) - np.min(vals) + 1.0)


@given(st.integers(0, 10_000))
@settings(max_examples=100, deadline=None)
def test_tube_degeneracy_fuzz(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    t = np.cumsum(rng.uniform(0.2, 2.0, n))
    y = rng.normal(0, 5.0, n)
    m = svr_train(t, y, SvrParams(C=10.0, epsilon=8.0, gamma=0.5))
    # normalized targets have range < 2*eps for eps this large
    assert np.all(m.betas == 0.0)
    assert svr_predict(m, t[0] - 3) == pytest.approx(svr_predict(m, t[-1] + 3))


def test_validation():
    with pytest.raises(ValidationError):
        svr_train([0.0], [1.0], SvrParams())
    with pytest.raises(ValidationError):
        svr_train([0.0, 0.0], [1.0, 2.0], SvrParams())
    with pytest.raises(ValidationError):
        SvrParams(C=-1)
    with pytest.raises(ValidationError):
        SvrParams(gamma=0)


# -------------------------------------------------------------- regimes


def test_regime_archetypes():
    assert classify_regime([30, 30, 30, 30, 30]) is RegimeLabel.SVR1
    assert classify_regime([10, 6, 2, 0, 0]) is RegimeLabel.SVR3
    assert classify_regime([0, 0, 2, 5, 9]) is RegimeLabel.SVR4
    assert classify_regime([12, 8, 5, 8, 12]) is RegimeLabel.SVR2


def test_regime_determinism():
    window = [12, 8, 5, 8, 12]
    assert all(classify_regime(window) is RegimeLabel.SVR2 for _ in range(10))


def test_regime_stationary_is_parked():
    assert classify_regime([0, 0, 0, 0, 0]) is RegimeLabel.SVR3


def test_regime_window_too_short():
    with pytest.raises(ValidationError):
        classify_regime([1.0, 2.0])


def test_regime_thresholds_validation():
    with pytest.raises(ValidationError):
        RegimeThresholds(high_speed=5, low_speed=10, stop_speed=1)


@given(st.lists(st.floats(0, 50), min_size=3, max_size=12))
@settings(max_examples=300, deadline=None)
def test_regime_total_function(window):
    label = classify_regime(window, DEFAULT_THRESHOLDS)
    assert label in RegimeLabel


# -------------------------------------------------------------- position


def test_position_stationary():
    traj = Trajectory(
        "v", tuple(TracePoint(float(t), 8.0, -3.0) for t in range(8))
    )
    _, pos, regime = svr_predict_position(traj, 7, 5, rule=FIXED1)
    assert pos == pytest.approx((8.0, -3.0), abs=1e-9)
    assert regime in (RegimeLabel.SVR3, RegimeLabel.SVR4)


def test_position_constant_velocity_near_exact():
    res = generate(ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=12))
    traj = res.traces.trajectories["v0"]
    t_h, pos, regime = svr_predict_position(traj, 8, 5, rule=FIXED1)
    true_x, true_y = res.paths["v0"](t_h)
    assert regime is RegimeLabel.SVR1
    # within the epsilon tube scale plus extrapolation slack
    assert abs(pos[0] - true_x) < 5.0
    assert abs(pos[1] - true_y) < 5.0


def test_position_regime_switches_once_on_turn():
    res = generate(ScenarioSpec(ScenarioKind.INTERSECTION_TURN, duration=60))
    traj = res.traces.trajectories["v0"]
    labels = []
    for i in range(4, len(traj.points)):
        _, _, regime = svr_predict_position(traj, i, 5, rule=FIXED1)
        labels.append(regime)
    blocks = [labels[0]]
    for lab in labels[1:]:
        if lab is not blocks[-1]:
            blocks.append(lab)
    assert blocks == [RegimeLabel.SVR1, RegimeLabel.SVR2, RegimeLabel.SVR1]


def test_position_insufficient_history():
    traj = Trajectory("v", tuple(TracePoint(float(t), t, 0.0) for t in range(3)))
    with pytest.raises(InsufficientHistoryError):
        svr_predict_position(traj, 2, 5, rule=FIXED1)
