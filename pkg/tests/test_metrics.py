import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracecast.errors import AlignmentError, ValidationError
from tracecast.metrics import (
    DeviationSeries,
    build_report,
    deviation,
    error_metrics,
    format_table,
    report_to_csv,
)
from tracecast.synth import ScenarioKind, ScenarioSpec, generate_traces
from tracecast.trace import TracePoint, Trajectory


def _traj(points):
    return Trajectory("v", tuple(TracePoint(float(t), x, y) for t, x, y in points))


# ------------------------------------------------------------- deviation


def test_deviation_zero_for_identical():
    real = _traj([(0, 0, 0), (1, 1, 0), (2, 2, 0)])
    pred = [(0.0, (0.0, 0.0)), (1.0, (1.0, 0.0)), (2.0, (2.0, 0.0))]
    series = deviation(real, pred)
    assert series.dist == (0.0, 0.0, 0.0)


def test_deviation_three_four_five():
    real = _traj([(0, 0, 0)])
    series = deviation(real, [(0.0, (3.0, 4.0))])
    assert series.dist == (5.0,)


def test_deviation_requires_matching_timestamps():
    real = _traj([(0, 0, 0), (1, 1, 0)])
    with pytest.raises(AlignmentError):
        deviation(real, [(0.5, (0.0, 0.0))])


def test_deviation_series_validation():
    with pytest.raises(ValidationError):
        DeviationSeries((0.0,), (-1.0,))
    with pytest.raises(ValidationError):
        DeviationSeries((0.0, 1.0), (0.0,))


# --------------------------------------------------------- error_metrics


def test_hand_case_single_point():
    # one instant, deviation 2, real position 4 m from the origin:
    # MSE 4, MAE 2, RMSE 2, MAPE 100 * 2/4 = 50
    mv = error_metrics([(4.0, 0.0)], [(4.0, 2.0)])
    assert mv.mse == pytest.approx(4.0)
    assert mv.mae == pytest.approx(2.0)
    assert mv.rmse == pytest.approx(2.0)
    assert mv.mape == pytest.approx(50.0)


def test_hand_case_deviations_three_and_four():
    # scalar deviations (3, 4): MSE (9+16)/2 = 12.5, MAE 3.5, RMSE sqrt(12.5)
    mv = error_metrics([(10.0, 0.0), (0.0, 10.0)], [(13.0, 0.0), (0.0, 14.0)])
    assert mv.mse == 12.5
    assert mv.mae == 3.5
    assert mv.rmse == pytest.approx(math.sqrt(12.5), rel=1e-12)


def test_mape_excludes_points_at_origin():
    mv = error_metrics([(0.0, 0.0), (10.0, 0.0)], [(1.0, 0.0), (12.0, 0.0)])
    assert mv.mape_excluded == 1
    assert mv.mape == pytest.approx(100.0 * 2.0 / 10.0)


def test_mape_absent_when_all_excluded():
    mv = error_metrics([(0.0, 0.0)], [(1.0, 0.0)])
    assert mv.mape is None
    assert mv.mape_excluded == 1
    assert mv.mse == 1.0  # other metrics unaffected


def test_origin_shifts_mape_only():
    real = [(5.0, 5.0), (8.0, 5.0)]
    pred = [(6.0, 5.0), (8.0, 7.0)]
    a = error_metrics(real, pred)
    b = error_metrics(real, pred, origin=(5.0, 5.0))
    assert (a.mse, a.mae, a.rmse) == (b.mse, b.mae, b.rmse)
    assert a.mape != b.mape


def test_validation():
    with pytest.raises(ValidationError):
        error_metrics([], [])
    with pytest.raises(ValidationError):
        error_metrics([(0, 0)], [(0, 0), (1, 1)])


@given(st.integers(0, 10_000))
@settings(max_examples=200, deadline=None)
def test_identities_and_translation_invariance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    real = rng.uniform(-100, 100, (n, 2))
    pred = real + rng.normal(0, 3.0, (n, 2))
    mv = error_metrics(real, pred)
    assert mv.mae <= mv.rmse + 1e-12
    assert mv.rmse**2 == pytest.approx(mv.mse, rel=1e-9)
    shift = rng.uniform(-1000, 1000, 2)
    mv2 = error_metrics(real + shift, pred + shift)
    assert mv2.mse == pytest.approx(mv.mse, rel=1e-9)
    assert mv2.mae == pytest.approx(mv.mae, rel=1e-9)
    assert mv2.rmse == pytest.approx(mv.rmse, rel=1e-9)


# ---------------------------------------------------------- build_report


def _road_traces(duration=25):
    return generate_traces(
        ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=duration)
    )


def test_report_structure_and_identities():
    rep = build_report(_road_traces(), predictors=("lagrange", "lr"))
    assert set(rep.per_predictor) == {"lagrange", "lr"}
    for stats in rep.per_predictor.values():
        assert stats.n > 0
        mv = stats.metrics
        assert mv.mae <= mv.rmse + 1e-12
        assert mv.rmse**2 == pytest.approx(mv.mse, rel=1e-9)
        assert len(stats.deviations.times) == stats.n


def test_report_exact_predictor_on_noise_free_road():
    # the road paths are piecewise-quadratic-free on the straight; the
    # interpolating quadratic is exact there, so deviations are ~0
    rep = build_report(_road_traces(duration=10), predictors=("lagrange",))
    assert rep.per_predictor["lagrange"].metrics.mse < 1e-12


def test_report_deterministic():
    a = build_report(_road_traces(), predictors=("lagrange", "lr"))
    b = build_report(_road_traces(), predictors=("lagrange", "lr"))
    assert report_to_csv(a) == report_to_csv(b)


def test_report_csv_shape():
    rep = build_report(_road_traces(), predictors=("lagrange",))
    lines = report_to_csv(rep).splitlines()
    assert lines[0] == "scenario,predictor,metric,value,n,excluded"
    assert len(lines) == 1 + 4  # four metrics, one predictor
    assert all(line.split(",")[2] in ("MSE", "MAE", "RMSE", "MAPE")
               for line in lines[1:])


def test_format_table_layout():
    rep = build_report(_road_traces(), predictors=("lagrange", "newton", "lr"))
    text = format_table(rep)
    lines = text.splitlines()
    assert lines[0].startswith("Scenario")
    assert "Newton*" in lines[0]
    assert any(line.startswith("*") for line in lines)  # footnote present


def test_report_rejects_empty_predictor_list():
    with pytest.raises(ValidationError):
        build_report(_road_traces(), predictors=())
