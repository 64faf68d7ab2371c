"""Mobility-trace containers and I/O.

Coordinates are planar meters (network-local x/y), never lat/lon. Timestamps
within a trajectory are strictly increasing; duplicate (vehicle, t) pairs are
a hard error because every predictor downstream divides by time differences.

Supported formats:
  - CSV with header ``vehicle_id,t,x,y[,speed]`` (LF endings, ``.`` decimals)
  - the SUMO floating-car-data XML export subset
    (``<timestep time="T">`` containing ``<vehicle id x y speed/>``)
"""

from __future__ import annotations

import io
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import ParseError, ValidationError

__all__ = [
    "TracePoint",
    "Trajectory",
    "TraceSet",
    "parse_csv",
    "parse_fcd_xml",
    "emit_csv",
    "derive_speeds",
]


@dataclass(frozen=True)
class TracePoint:
    """One time-stamped 2-D position; speed in m/s is optional."""

    t: float
    x: float
    y: float
    speed: float | None = None

    def __post_init__(self):
        for name in ("t", "x", "y"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"non-finite {name}: {v!r}")
        if self.t < 0:
            raise ValidationError(f"negative timestamp: {self.t}")
        if self.speed is not None and (not math.isfinite(self.speed) or self.speed < 0):
            raise ValidationError(f"invalid speed: {self.speed!r}")

    @property
    def pos(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Trajectory:
    """Ordered point sequence for one vehicle; timestamps strictly increase."""

    vehicle_id: str
    points: tuple[TracePoint, ...]

    def __post_init__(self):
        if not self.points:
            raise ValidationError(f"trajectory {self.vehicle_id!r} has no points")
        object.__setattr__(self, "points", tuple(self.points))
        for a, b in zip(self.points, self.points[1:]):
            if b.t <= a.t:
                raise ValidationError(
                    f"vehicle {self.vehicle_id!r}: timestamps not strictly "
                    f"increasing at t={b.t}"
                )

    def __len__(self) -> int:
        return len(self.points)

    def times(self) -> list[float]:
        return [p.t for p in self.points]


@dataclass(frozen=True)
class TraceSet:
    """Trajectories keyed by vehicle id, plus a scenario label."""

    trajectories: dict[str, Trajectory]
    scenario_name: str = ""

    def __post_init__(self):
        for vid, traj in self.trajectories.items():
            if traj.vehicle_id != vid:
                raise ValidationError(
                    f"key {vid!r} does not match trajectory id {traj.vehicle_id!r}"
                )

    def __len__(self) -> int:
        return len(self.trajectories)

    def vehicle_ids(self) -> list[str]:
        return sorted(self.trajectories)


def _as_text(stream) -> str:
    data = stream
    if not isinstance(data, (bytes, str)):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return data


def _build_traceset(rows, scenario_name: str) -> TraceSet:
    """Group (vehicle_id, TracePoint) rows, sort by t, enforce invariants."""
    grouped: dict[str, list[TracePoint]] = {}
    for vid, pt in rows:
        grouped.setdefault(vid, []).append(pt)
    trajectories = {}
    for vid, pts in grouped.items():
        pts.sort(key=lambda p: p.t)
        for a, b in zip(pts, pts[1:]):
            if b.t == a.t:
                raise ValidationError(
                    f"duplicate timestamp for vehicle {vid!r} at t={a.t}"
                )
        trajectories[vid] = Trajectory(vid, tuple(pts))
    return TraceSet(trajectories, scenario_name)


def parse_csv(stream, scenario_name: str = "") -> TraceSet:
    """Parse ``vehicle_id,t,x,y[,speed]`` CSV into a TraceSet.

    Rows may arrive in any order; they are grouped per vehicle and sorted by
    time. Malformed rows raise ParseError with the 1-based line number;
    duplicate (vehicle, t) pairs raise ValidationError.
    """
    text = _as_text(stream)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input, expected a header line")
    header = [h.strip() for h in lines[0].split(",")]
    if header[:4] != ["vehicle_id", "t", "x", "y"] or header[4:] not in ([], ["speed"]):
        raise ParseError(f"unexpected header {lines[0]!r}", line=1)
    has_speed = len(header) == 5

    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.split(",")
        if len(fields) not in (4, 5):
            raise ParseError(f"expected 4 or 5 fields, got {len(fields)}", line=lineno)
        vid = fields[0].strip()
        if not vid:
            raise ParseError("empty vehicle_id", line=lineno)
        try:
            t, x, y = (float(f) for f in fields[1:4])
            speed = None
            if len(fields) == 5 and fields[4].strip() != "":
                speed = float(fields[4])
        except ValueError as exc:
            raise ParseError(f"non-numeric field: {exc}", line=lineno) from None
        try:
            rows.append((vid, TracePoint(t, x, y, speed)))
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
    del has_speed
    return _build_traceset(rows, scenario_name)


def parse_fcd_xml(stream, scenario_name: str = "") -> TraceSet:
    """Parse the SUMO floating-car-data export subset into a TraceSet.

    Only ``timestep`` and nested ``vehicle`` elements are interpreted; unknown
    elements and attributes are ignored. Timesteps may appear out of order.
    """
    text = _as_text(stream)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(f"XML syntax error: {exc}") from None

    rows = []
    for ts in root.iter("timestep"):
        t_attr = ts.get("time")
        if t_attr is None:
            raise ValidationError("timestep element missing 'time' attribute")
        try:
            t = float(t_attr)
        except ValueError:
            raise ValidationError(f"non-numeric timestep time: {t_attr!r}") from None
        for veh in ts.iter("vehicle"):
            vid = veh.get("id")
            if vid is None:
                raise ValidationError(f"vehicle element at t={t} missing 'id'")
            try:
                x = float(veh.get("x"))
                y = float(veh.get("y"))
            except (TypeError, ValueError):
                raise ValidationError(
                    f"vehicle {vid!r} at t={t}: missing or non-numeric x/y"
                ) from None
            speed_attr = veh.get("speed")
            speed = float(speed_attr) if speed_attr is not None else None
            rows.append((vid, TracePoint(t, x, y, speed)))
    return _build_traceset(rows, scenario_name)


def _fmt(v: float) -> str:
    # repr() is the shortest decimal that round-trips the double exactly
    return repr(float(v))


def emit_csv(traces: TraceSet) -> bytes:
    """Serialize a TraceSet deterministically (vehicles by id, points by t)."""
    any_speed = any(
        p.speed is not None
        for traj in traces.trajectories.values()
        for p in traj.points
    )
    out = io.StringIO()
    out.write("vehicle_id,t,x,y,speed\n" if any_speed else "vehicle_id,t,x,y\n")
    for vid in traces.vehicle_ids():
        for p in traces.trajectories[vid].points:
            row = f"{vid},{_fmt(p.t)},{_fmt(p.x)},{_fmt(p.y)}"
            if any_speed:
                row += "," + ("" if p.speed is None else _fmt(p.speed))
            out.write(row + "\n")
    return out.getvalue().encode("utf-8")


def derive_speeds(traj: Trajectory) -> Trajectory:
    """Fill missing speeds by backward finite difference.

    Existing speeds are preserved. The first point, if missing a speed,
    inherits the (derived or given) speed of the second point; a single-point
    trajectory gets speed 0. Idempotent.
    """
    pts = list(traj.points)
    speeds: list[float | None] = [p.speed for p in pts]
    for i in range(1, len(pts)):
        if speeds[i] is None:
            dx = pts[i].x - pts[i - 1].x
            dy = pts[i].y - pts[i - 1].y
            speeds[i] = math.hypot(dx, dy) / (pts[i].t - pts[i - 1].t)
    if speeds[0] is None:
        speeds[0] = speeds[1] if len(pts) > 1 else 0.0
    new_pts = tuple(
        TracePoint(p.t, p.x, p.y, s) if p.speed is None else p
        for p, s in zip(pts, speeds)
    )
    return Trajectory(traj.vehicle_id, new_pts)
