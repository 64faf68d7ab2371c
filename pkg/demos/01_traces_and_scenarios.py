"""Traces in, traces out: synthetic scenarios, CSV/FCD parsing, speeds.

Run:  python3 demos/01_traces_and_scenarios.py
"""

from tracecast import (
    ScenarioKind,
    ScenarioSpec,
    derive_speeds,
    emit_csv,
    generate_traces,
    parse_csv,
    parse_fcd_xml,
)

# Three scenario archetypes: a straight road with a gentle bend, an
# intersection turn with a slowdown, and stop-and-go city driving.
for kind in ScenarioKind:
    traces = generate_traces(ScenarioSpec(kind, duration=20, seed=1))
    v0 = traces.trajectories["v0"]
    print(f"{kind.name:20s} {len(traces)} vehicles, {len(v0)} samples each, "
          f"v0 speed range {min(p.speed for p in v0.points):.1f}.."
          f"{max(p.speed for p in v0.points):.1f} m/s")

# CSV round-trip is lossless: emit, parse, compare.
traces = generate_traces(
    ScenarioSpec(ScenarioKind.CITY_STOP_AND_GO, duration=15, seed=7,
                 noise_sigma=0.5)
)
blob = emit_csv(traces)
again = parse_csv(blob)
assert again.trajectories == traces.trajectories
print(f"\nCSV round-trip: {len(blob)} bytes, lossless")

# The same data as a SUMO floating-car-data style XML document.
fcd = ['<fcd-export>']
for t in sorted({p.t for tr in traces.trajectories.values() for p in tr.points}):
    fcd.append(f'  <timestep time="{t!r}">')
    for vid in traces.vehicle_ids():
        for p in traces.trajectories[vid].points:
            if p.t == t:
                fcd.append(f'    <vehicle id="{vid}" x="{p.x!r}" y="{p.y!r}" '
                           f'speed="{p.speed!r}"/>')
    fcd.append("  </timestep>")
fcd.append("</fcd-export>")
from_xml = parse_fcd_xml("\n".join(fcd))
assert from_xml.trajectories == traces.trajectories
print("FCD XML parse: identical trajectories")

# Speeds are optional on input; backward finite differences fill them in.
bare = parse_csv(b"vehicle_id,t,x,y\na,0,0,0\na,1,3,4\na,2,9,12\n")
with_speeds = derive_speeds(bare.trajectories["a"])
print("derived speeds:", [p.speed for p in with_speeds.points])
