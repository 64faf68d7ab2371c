import math

import pytest

from tracecast.errors import ValidationError
from tracecast.synth import ScenarioKind, ScenarioSpec, generate, generate_traces


def test_highway_collinear_constant_speed():
    res = generate(ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=10, dt=1.0))
    for traj in res.traces.trajectories.values():
        pts = traj.points
        assert len(pts) == 11
        assert all(p.speed == pts[0].speed for p in pts)
        # collinearity via cross products
        (x0, y0), (x1, y1) = pts[0].pos, pts[1].pos
        for p in pts[2:]:
            cross = (x1 - x0) * (p.y - y0) - (y1 - y0) * (p.x - x0)
            assert abs(cross) < 1e-9


def test_determinism():
    spec = ScenarioSpec(ScenarioKind.CITY_STOP_AND_GO, duration=30, seed=42,
                        noise_sigma=1.0)
    assert generate_traces(spec) == generate_traces(spec)


def test_seed_changes_noise():
    a = ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=30, seed=1, noise_sigma=1.0)
    b = ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=30, seed=2, noise_sigma=1.0)
    assert generate_traces(a) != generate_traces(b)


def test_noise_free_points_on_analytic_path():
    for kind in ScenarioKind:
        res = generate(ScenarioSpec(kind, duration=40))
        for vid, traj in res.traces.trajectories.items():
            path = res.paths[vid]
            for p in traj.points:
                x, y = path(p.t)
                assert abs(p.x - x) < 1e-12 and abs(p.y - y) < 1e-12


def test_intersection_speed_dips_at_midpoint():
    res = generate(ScenarioSpec(ScenarioKind.INTERSECTION_TURN, duration=60))
    traj = res.traces.trajectories["v0"]
    speeds = [p.speed for p in traj.points]
    k = speeds.index(min(speeds))
    assert traj.points[k].t == 30.0
    assert all(a >= b for a, b in zip(speeds[:k], speeds[1 : k + 1]))
    assert all(a <= b for a, b in zip(speeds[k:], speeds[k + 1 :]))


def test_intersection_min_speed_at_arc_midpoint():
    res = generate(ScenarioSpec(ScenarioKind.INTERSECTION_TURN, duration=60))
    path = res.paths["v0"]
    # heading should be near 45 degrees (mid-quarter-turn) at the slow point
    eps = 1e-4
    (x1, y1), (x2, y2) = path(30.0 - eps), path(30.0 + eps)
    heading = math.degrees(math.atan2(y2 - y1, x2 - x1))
    assert abs(heading - 45.0) < 1.0


def test_city_has_full_stops_with_advancing_time():
    res = generate(ScenarioSpec(ScenarioKind.CITY_STOP_AND_GO, duration=60))
    traj = res.traces.trajectories["v0"]
    stopped = [p for p in traj.points if p.speed == 0.0]
    assert len(stopped) >= 3
    positions = {p.pos for p in stopped[:4]}
    assert len(positions) == 1  # parked: same place, different timestamps
    assert all(b.t > a.t for a, b in zip(traj.points, traj.points[1:]))


def test_trajectory_invariants_hold_with_noise():
    res = generate(
        ScenarioSpec(ScenarioKind.INTERSECTION_TURN, duration=25, seed=9,
                     noise_sigma=2.0, n_vehicles=5)
    )
    assert len(res.traces) == 5
    for traj in res.traces.trajectories.values():
        assert all(b.t > a.t for a, b in zip(traj.points, traj.points[1:]))


def test_spec_validation():
    with pytest.raises(ValidationError):
        ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=1, dt=0)
    with pytest.raises(ValidationError):
        ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=0.5, dt=1.0)
    with pytest.raises(ValidationError):
        ScenarioSpec(ScenarioKind.STRAIGHT_HIGHWAY, duration=10, noise_sigma=-1)
    with pytest.raises(ValidationError):
        ScenarioKind.from_name("suburb")


def test_kind_aliases():
    assert ScenarioKind.from_name("road") is ScenarioKind.STRAIGHT_HIGHWAY
    assert ScenarioKind.from_name("city") is ScenarioKind.CITY_STOP_AND_GO
    assert ScenarioKind.from_name("intersection_turn") is ScenarioKind.INTERSECTION_TURN
