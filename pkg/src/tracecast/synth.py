"""Synthetic ground-truth trajectory generator.

Three scenario archetypes, each with a closed-form path so tests can compare
predictions against exact analytic positions:

  - ``straight_highway`` ("road"): constant 30 m/s along a straight segment,
    then a gentle large-radius bend, then straight again. The first 450 m are
    exactly collinear.
  - ``intersection_turn`` ("intersection"): speed dips quadratically to a
    minimum at the midpoint while the path goes straight, through a
    quarter-circle turn centered on the slow point, then straight again.
  - ``city_stop_and_go`` ("city"): repeated cruise / brake / full stop /
    restart cycles on a straight street. Stops emit identical positions with
    advancing timestamps on purpose; they stress the stationary edge cases.

Positional noise uses an explicit splitmix64 + Box-Muller generator (not the
platform RNG) so the byte stream is reproducible from the seed alone:
splitmix64 advances a 64-bit counter by 0x9E3779B97F4A7C15 and mixes with the
(30, 0xBF58476D1CE4E5B9), (27, 0x94D049BB133111EB), (31) xorshift-multiply
rounds; uniforms are ``(z >> 11) * 2^-53``; pairs map through Box-Muller.
Draws are consumed in (vehicle index, sample index, x-then-y) order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import ValidationError
from .trace import TracePoint, TraceSet, Trajectory

__all__ = ["ScenarioKind", "ScenarioSpec", "SynthResult", "generate", "generate_traces"]


class ScenarioKind(Enum):
    STRAIGHT_HIGHWAY = "straight_highway"
    INTERSECTION_TURN = "intersection_turn"
    CITY_STOP_AND_GO = "city_stop_and_go"

    @classmethod
    def from_name(cls, name: str) -> "ScenarioKind":
        aliases = {
            "road": cls.STRAIGHT_HIGHWAY,
            "highway": cls.STRAIGHT_HIGHWAY,
            "intersection": cls.INTERSECTION_TURN,
            "city": cls.CITY_STOP_AND_GO,
        }
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            raise ValidationError(f"unknown scenario kind {name!r}") from None


SCENARIO_LABEL = {
    ScenarioKind.STRAIGHT_HIGHWAY: "road",
    ScenarioKind.INTERSECTION_TURN: "intersection",
    ScenarioKind.CITY_STOP_AND_GO: "city",
}


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    duration: float
    dt: float = 1.0
    seed: int = 0
    noise_sigma: float = 0.0
    n_vehicles: int = 3

    def __post_init__(self):
        if self.dt <= 0:
            raise ValidationError("dt must be > 0")
        if self.duration < self.dt:
            raise ValidationError("duration must be >= dt")
        if self.noise_sigma < 0:
            raise ValidationError("noise_sigma must be >= 0")
        if self.n_vehicles < 1:
            raise ValidationError("n_vehicles must be >= 1")


@dataclass(frozen=True)
class SynthResult:
    """Generated traces plus the analytic ground truth they sample."""

    traces: TraceSet
    paths: dict[str, Callable[[float], tuple[float, float]]]
    speeds: dict[str, Callable[[float], float]]


# ---------------------------------------------------------------------------
# portable noise stream

_MASK64 = (1 << 64) - 1


class _SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        # 53 mantissa bits, in [0, 1)
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def gauss_pair(self) -> tuple[float, float]:
        u1 = self.uniform()
        while u1 == 0.0:
            u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


# ---------------------------------------------------------------------------
# analytic paths

# highway geometry: straight run, then a gentle bend, then straight
_HWY_SPEED = 25.0
_HWY_STRAIGHT = 300.0
_HWY_RADIUS = 250.0
_HWY_ARC_LEN = 600.0
_HWY_SPACING = 40.0  # arc-length gap between successive vehicles


def _highway_point(s: float) -> tuple[float, float]:
    if s <= _HWY_STRAIGHT:
        return (s, 0.0)
    theta_max = _HWY_ARC_LEN / _HWY_RADIUS
    if s <= _HWY_STRAIGHT + _HWY_ARC_LEN:
        theta = (s - _HWY_STRAIGHT) / _HWY_RADIUS
        return (
            _HWY_STRAIGHT + _HWY_RADIUS * math.sin(theta),
            _HWY_RADIUS * (1.0 - math.cos(theta)),
        )
    ex = _HWY_STRAIGHT + _HWY_RADIUS * math.sin(theta_max)
    ey = _HWY_RADIUS * (1.0 - math.cos(theta_max))
    rest = s - _HWY_STRAIGHT - _HWY_ARC_LEN
    return (ex + rest * math.cos(theta_max), ey + rest * math.sin(theta_max))


def _highway_vehicle(i: int):
    s0 = -_HWY_SPACING * i

    def path(t: float) -> tuple[float, float]:
        return _highway_point(s0 + _HWY_SPEED * t)

    def speed(t: float) -> float:
        return _HWY_SPEED

    return path, speed


# intersection geometry: straight approach, quarter circle, straight exit;
# the speed ramps down linearly to a minimum at mid-run and back up, so a
# short speed window around the midpoint shows a clear interior dip
_TURN_V0 = 15.0
_TURN_VMIN = 3.0
_TURN_RAMP = 6.0  # seconds from cruise speed down to the minimum
_TURN_RADIUS = 20.0
_TURN_SPACING = 25.0
_TURN_LANE_W = 3.5


def _turn_speed(t: float, half: float) -> float:
    u = abs(t - half)
    if u >= _TURN_RAMP:
        return _TURN_V0
    return _TURN_VMIN + (_TURN_V0 - _TURN_VMIN) * u / _TURN_RAMP


def _turn_arclen(t: float, half: float) -> float:
    # integral of _turn_speed from 0 to t
    ramp_d = (_TURN_V0 + _TURN_VMIN) / 2.0 * _TURN_RAMP

    def from_mid(u: float) -> float:
        # distance covered between the midpoint and midpoint + u (u >= 0)
        if u <= _TURN_RAMP:
            return _TURN_VMIN * u + (_TURN_V0 - _TURN_VMIN) * u * u / (2 * _TURN_RAMP)
        return ramp_d + _TURN_V0 * (u - _TURN_RAMP)

    if t <= half:
        return from_mid(half) - from_mid(half - t)
    return from_mid(half) + from_mid(t - half)


def _intersection_vehicle(i: int, duration: float):
    half = duration / 2.0
    quarter = math.pi * _TURN_RADIUS / 2.0
    s0 = -_TURN_SPACING * i
    y_off = _TURN_LANE_W * i
    # center each vehicle's quarter-circle on its own slow point
    s_turn = s0 + _turn_arclen(half, half) - quarter / 2.0

    def point(s: float) -> tuple[float, float]:
        if s <= s_turn:
            return (s, y_off)
        if s <= s_turn + quarter:
            theta = (s - s_turn) / _TURN_RADIUS
            return (
                s_turn + _TURN_RADIUS * math.sin(theta),
                y_off + _TURN_RADIUS * (1.0 - math.cos(theta)),
            )
        return (s_turn + _TURN_RADIUS, y_off + _TURN_RADIUS + (s - s_turn - quarter))

    def path(t: float) -> tuple[float, float]:
        return point(s0 + _turn_arclen(t, half))

    def speed(t: float) -> float:
        return _turn_speed(t, half)

    return path, speed


# city: straight street, cruise / brake / stop / accelerate cycles
_CITY_VCRUISE = 10.0
_CITY_CRUISE_T = 8.0
_CITY_BRAKE_T = 5.0
_CITY_STOP_T = 6.0
_CITY_ACCEL_T = 5.0
_CITY_LANE_W = 3.5
_CITY_PHASE = 7.0  # per-vehicle cycle phase shift, seconds


def _city_cycle(tau: float) -> tuple[float, float]:
    """(distance covered, speed) at phase tau within one cycle."""
    if tau < _CITY_CRUISE_T:
        return _CITY_VCRUISE * tau, _CITY_VCRUISE
    tau -= _CITY_CRUISE_T
    d = _CITY_VCRUISE * _CITY_CRUISE_T
    if tau < _CITY_BRAKE_T:
        v = _CITY_VCRUISE * (1.0 - tau / _CITY_BRAKE_T)
        return d + _CITY_VCRUISE * tau - 0.5 * _CITY_VCRUISE * tau**2 / _CITY_BRAKE_T, v
    tau -= _CITY_BRAKE_T
    d += 0.5 * _CITY_VCRUISE * _CITY_BRAKE_T
    if tau < _CITY_STOP_T:
        return d, 0.0
    tau -= _CITY_STOP_T
    if tau < _CITY_ACCEL_T:
        v = _CITY_VCRUISE * tau / _CITY_ACCEL_T
        return d + 0.5 * _CITY_VCRUISE * tau**2 / _CITY_ACCEL_T, v
    raise AssertionError("phase outside cycle")


_CITY_CYCLE_T = _CITY_CRUISE_T + _CITY_BRAKE_T + _CITY_STOP_T + _CITY_ACCEL_T
_CITY_CYCLE_D = (
    _CITY_VCRUISE * _CITY_CRUISE_T
    + 0.5 * _CITY_VCRUISE * _CITY_BRAKE_T
    + 0.5 * _CITY_VCRUISE * _CITY_ACCEL_T
)


def _city_vehicle(i: int):
    phase0 = (_CITY_PHASE * i) % _CITY_CYCLE_T
    y = _CITY_LANE_W * i

    def state(t: float) -> tuple[float, float]:
        total = t + phase0
        cycles = math.floor(total / _CITY_CYCLE_T)
        d, v = _city_cycle(total - cycles * _CITY_CYCLE_T)
        d0, _ = _city_cycle(phase0)
        return cycles * _CITY_CYCLE_D + d - d0, v

    def path(t: float) -> tuple[float, float]:
        return (state(t)[0], y)

    def speed(t: float) -> float:
        return state(t)[1]

    return path, speed


# ---------------------------------------------------------------------------


def _vehicle_models(spec: ScenarioSpec):
    for i in range(spec.n_vehicles):
        vid = f"v{i}"
        if spec.kind is ScenarioKind.STRAIGHT_HIGHWAY:
            yield vid, *_highway_vehicle(i)
        elif spec.kind is ScenarioKind.INTERSECTION_TURN:
            yield vid, *_intersection_vehicle(i, spec.duration)
        else:
            yield vid, *_city_vehicle(i)


def generate(spec: ScenarioSpec) -> SynthResult:
    """Sample the scenario's analytic paths onto the time grid.

    Deterministic for a fixed spec. With noise_sigma = 0 every emitted point
    lies exactly on the analytic path returned alongside the traces.
    """
    n_steps = math.floor(spec.duration / spec.dt + 1e-9)
    times = [round(k * spec.dt, 12) for k in range(n_steps + 1)]
    rng = _SplitMix64(spec.seed)

    trajectories = {}
    paths = {}
    speeds = {}
    for vid, path, speed in _vehicle_models(spec):
        pts = []
        for t in times:
            x, y = path(t)
            if spec.noise_sigma > 0:
                gx, gy = rng.gauss_pair()
                x += spec.noise_sigma * gx
                y += spec.noise_sigma * gy
            pts.append(TracePoint(t, x, y, speed(t)))
        trajectories[vid] = Trajectory(vid, tuple(pts))
        paths[vid] = path
        speeds[vid] = speed
    traces = TraceSet(trajectories, SCENARIO_LABEL[spec.kind])
    return SynthResult(traces, paths, speeds)


def generate_traces(spec: ScenarioSpec) -> TraceSet:
    return generate(spec).traces
