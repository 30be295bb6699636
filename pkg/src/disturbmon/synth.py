"""Parametric generator of ground-truth disturbance traces.

Each recipe builds a trajectory family that satisfies one scenario index by
construction: gaps are placed relative to the safe-distance thresholds
computed from the active parameters, the safe lead-in is enforced at the
start, and lane changes are timed against the danger onset. Recipes are
randomized within windows that preserve those guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import RssParams
from .road import Lanelet, RoadNetwork, build_lanes
from .rss import d_rss_lon
from .trace import Trace, VehicleDims, VehicleTrack

LANE_WIDTH = 3.5
CAR = VehicleDims(4.8, 2.0)

_ZONE_ATTR = {"mainZone": "main", "mergeZone": "merge", "departZone": "departure"}


def synth_map(zone: str = "mainZone", n_lanes: int = 3,
              s_min: float = -600.0, s_max: float = 1600.0) -> RoadNetwork:
    """Straight n-lane road; every lane is a two-lanelet pred/succ chain."""
    mid = (s_min + s_max) / 2.0
    lanelets = []
    for k in range(n_lanes):
        d_right = k * LANE_WIDTH
        d_left = (k + 1) * LANE_WIDTH
        # The innermost lane carries the zone-specific attribute so merge and
        # departure maps have a dedicated merge/departure lane.
        attr = _ZONE_ATTR[zone] if (k == 0 and zone != "mainZone") else "main"
        a, b = f"l{k}a", f"l{k}b"
        lanelets.append(Lanelet(a, zone, attr, s_min, mid, d_right, d_left, None, b))
        lanelets.append(Lanelet(b, zone, attr, mid, s_max, d_right, d_left, a, None))
    return build_lanes(lanelets)


def lane_ids(road: RoadNetwork) -> list[str]:
    """Lane ids ordered right to left (by lateral position)."""
    def right_bound(lane_id: str) -> float:
        first = road.lanes[lane_id].lanelets[0]
        return road.lanelets[first].d_right

    return sorted(road.lanes, key=right_bound)


def lane_center(k: int) -> float:
    """Lateral offset of a centered car's left edge in lane k."""
    return k * LANE_WIDTH + (LANE_WIDTH + CAR.width) / 2.0


@dataclass
class GeneratedScenario:
    index: int
    trace: Trace
    road: RoadNetwork
    bindings: dict[str, str]
    sv: str
    povs: tuple[str, ...]


def _ramp(times: np.ndarray, v0: float, v1: float, t_start: float,
          t_end: float) -> np.ndarray:
    return np.interp(times, [t_start, t_end], [v0, v1])


def _track(times: np.ndarray, v_lon: np.ndarray, d: np.ndarray,
           s0: float) -> VehicleTrack:
    dt = float(times[1] - times[0])
    s = s0 + np.concatenate(([0.0], np.cumsum(v_lon[:-1]) * dt))
    v_lat = np.empty_like(d)
    v_lat[:-1] = np.diff(d) / dt
    v_lat[-1] = v_lat[-2]
    v = np.hypot(v_lon, v_lat)
    theta = np.arctan2(v_lat, v_lon)
    a = np.empty_like(v)
    a[:-1] = np.diff(v) / dt
    a[-1] = a[-2]
    states = np.stack([s, v, a, d, theta], axis=1)
    return VehicleTrack(CAR, states, np.ones(times.size, dtype=bool))


def _const(times: np.ndarray, value: float) -> np.ndarray:
    return np.full(times.size, value, dtype=float)


def _lon_threshold(v_rear: float, v_front: float, p: RssParams) -> float:
    return CAR.length + d_rss_lon(v_rear, v_front, p)


def _brake_after(times, v0, t_brake, v1, rate=4.0):
    """Constant v0 until t_brake, then ramp down to v1."""
    t_done = t_brake + max(0.1, (v0 - v1) / rate)
    out = np.where(times < t_brake, v0, _ramp(times, v0, v1, t_brake, t_done))
    return out


def synthesize(index: int, seed: int, dt: float = 0.1, duration: float = 14.0,
               p: RssParams | None = None) -> GeneratedScenario:
    """One randomized trace guaranteed to match scenario `index`."""
    if not 1 <= index <= 24:
        raise ValueError(f"scenario index {index} out of range")
    p = p or RssParams()
    zone = ("mainZone", "mergeZone", "departZone")[(index - 1) // 8]
    row = (index - 1) % 8 + 1
    road = synth_map(zone)
    lanes = lane_ids(road)
    rng = np.random.default_rng(seed)
    n = int(round(duration / dt)) + 1
    times = np.arange(n) * dt

    builder = _RECIPES[row]
    tracks, lane_key = builder(times, rng, p)

    trace = Trace(times, tracks)
    povs = ("POV1", "POV2") if row == 2 else ("POV",)
    bindings = {"SV": "sv", "L": lanes[lane_key]}
    if row == 2:
        bindings.update({"POV1": "pov1", "POV2": "pov2"})
    else:
        bindings["POV"] = "pov"
    return GeneratedScenario(index, trace, road, bindings, "SV", povs)


def _recipe_cut_in(times, rng, p, sv_leaves_lane: bool = False):
    """POV merges from the left lane into the SV's lane inside the safe gap.

    Covers row 1 (SV keeps its lane) and row 5 (SV later changes lane).
    """
    v_sv = rng.uniform(24.0, 30.0)
    v_pov = v_sv
    t_merge = rng.uniform(2.0, 4.0)
    move_t = rng.uniform(1.2, 1.8)
    thr = _lon_threshold(v_sv, v_pov, p)
    gap = rng.uniform(CAR.length + 8.0, 0.75 * thr)

    sv_d = _const(times, lane_center(0))
    if sv_leaves_lane:
        t_sv = t_merge + move_t + rng.uniform(1.5, 2.5)
        sv_d = _ramp(times, lane_center(0), lane_center(1), t_sv, t_sv + move_t)
    pov_d = _ramp(times, lane_center(1), lane_center(0), t_merge, t_merge + move_t)
    tracks = {
        "sv": _track(times, _const(times, v_sv), sv_d, 0.0),
        "pov": _track(times, _const(times, v_pov), pov_d, gap),
    }
    return tracks, 0


def _recipe_three_vehicle_cut_out(times, rng, p):
    """Row 2: the vehicle directly ahead swerves out, revealing a slow one."""
    v = rng.uniform(25.0, 29.0)
    v_slow = rng.uniform(14.0, 17.0)
    thr_near = _lon_threshold(v, v, p)
    gap1 = thr_near + rng.uniform(3.0, 8.0)          # SV stays safe behind POV1
    thr_far = _lon_threshold(v, v_slow, p)
    gap2 = 1.3 * thr_far                              # danger with POV2 later
    t_out = rng.uniform(3.0, 4.0)
    move_t = rng.uniform(1.2, 1.6)
    closing = v - v_slow
    t_danger = 0.3 * thr_far / closing
    t_brake = max(t_out, t_danger) + 1.0

    sv_v = _brake_after(times, v, t_brake, v_slow, rate=5.0)
    pov1_d = _ramp(times, lane_center(0), lane_center(1), t_out, t_out + move_t)
    tracks = {
        "sv": _track(times, sv_v, _const(times, lane_center(0)), 0.0),
        "pov1": _track(times, _const(times, v), pov1_d, gap1),
        "pov2": _track(times, _const(times, v_slow), _const(times, lane_center(0)), gap2),
    }
    return tracks, 0


def _recipe_accel(times, rng, p, sv_entering: bool = False):
    """A faster POV closes in from behind (rows 3 and 7).

    Row 3: both in the same lane from the start. Row 7: the POV approaches in
    its own lane and the SV changes into that lane ahead of it.
    """
    v_sv = rng.uniform(18.0, 22.0)
    dv = rng.uniform(4.0, 6.0)
    v_pov = v_sv + dv
    thr = _lon_threshold(v_pov, v_sv, p)
    if sv_entering:
        t_enter = rng.uniform(2.0, 3.5)
        move_t = rng.uniform(1.2, 1.6)
        # Longitudinal gap already inside the safe distance; danger starts
        # once the SV is laterally close to the POV's lane.
        gap = -rng.uniform(30.0, 40.0)   # POV this far behind the SV
        t_danger = t_enter + 0.4 * move_t
        sv_d = _ramp(times, lane_center(0), lane_center(1), t_enter, t_enter + move_t)
        pov_lane = 1
    else:
        gap = -1.3 * thr                 # safely far behind at the start
        t_danger = 0.3 * thr / dv
        sv_d = _const(times, lane_center(0))
        pov_lane = 0
    pov_v = _brake_after(times, v_pov, t_danger + 1.0, v_sv, rate=3.0)
    tracks = {
        "sv": _track(times, _const(times, v_sv), sv_d, 0.0),
        "pov": _track(times, pov_v, _const(times, lane_center(pov_lane)), gap),
    }
    return tracks, pov_lane if sv_entering else 0


def _recipe_decel(times, rng, p, sv_leaves_lane: bool = False):
    """A slow or braking POV ahead in the SV's lane (rows 4 and 8)."""
    v_sv = rng.uniform(24.0, 28.0)
    dv = rng.uniform(6.0, 9.0)
    v_pov = v_sv - dv
    decel = 0.25
    thr = _lon_threshold(v_sv, v_pov, p)
    gap = 1.3 * thr
    t_danger = 0.3 * thr / dv
    pov_v = np.maximum(v_pov - decel * times, 5.0)
    sv_d = _const(times, lane_center(0))
    if sv_leaves_lane:
        t_sv = t_danger + rng.uniform(0.5, 1.0)
        move_t = rng.uniform(1.2, 1.6)
        sv_d = _ramp(times, lane_center(0), lane_center(1), t_sv, t_sv + move_t)
        sv_v = _const(times, v_sv)
    else:
        sv_v = _brake_after(times, v_sv, t_danger + 1.0, max(pov_v.min(), 5.0), rate=5.0)
    tracks = {
        "sv": _track(times, sv_v, sv_d, 0.0),
        "pov": _track(times, pov_v, _const(times, lane_center(0)), gap),
    }
    return tracks, 0


def _recipe_cut_out(times, rng, p):
    """Row 6: POV ahead swerves out around the danger onset; SV evades right
    while the danger is still in progress (so the evasion survives the trim
    to the last violation interval) and passes in the adjacent lane."""
    v_sv = rng.uniform(26.0, 30.0)
    dv = rng.uniform(4.0, 6.0)
    v_pov = v_sv - dv
    thr = _lon_threshold(v_sv, v_pov, p)
    gap = 1.35 * thr
    t_danger = 0.35 * thr / dv
    move_t = 1.5
    t_out = t_danger - rng.uniform(0.3, 0.6)
    t_sv = t_danger + rng.uniform(0.2, 0.5)

    pov_d = _ramp(times, lane_center(1), lane_center(2), t_out, t_out + move_t)
    sv_d = _ramp(times, lane_center(1), lane_center(0), t_sv, t_sv + move_t)
    tracks = {
        "sv": _track(times, _const(times, v_sv), sv_d, 0.0),
        "pov": _track(times, _const(times, v_pov), pov_d, gap),
    }
    return tracks, 1


_RECIPES = {
    1: lambda t, r, p: _recipe_cut_in(t, r, p, sv_leaves_lane=False),
    2: _recipe_three_vehicle_cut_out,
    3: lambda t, r, p: _recipe_accel(t, r, p, sv_entering=False),
    4: lambda t, r, p: _recipe_decel(t, r, p, sv_leaves_lane=False),
    5: lambda t, r, p: _recipe_cut_in(t, r, p, sv_leaves_lane=True),
    6: _recipe_cut_out,
    7: lambda t, r, p: _recipe_accel(t, r, p, sv_entering=True),
    8: lambda t, r, p: _recipe_decel(t, r, p, sv_leaves_lane=True),
}


HIGHD_GAMMA = 21.0
LOWER_MARKINGS = [10.5, 14.0, 17.5, 21.0]
UPPER_MARKINGS = [1.0, 4.5, 8.0]


def write_highd_recording(data_dir, rec_id: str, trace: Trace,
                          frame_rate: float,
                          classes: dict[str, str] | None = None) -> None:
    """Serialize a curvilinear trace as a drone-recording CSV pair.

    Vehicles are written in the lower-lane driving direction (+x); the
    inverse of the ingestion transform, so a round trip reproduces the
    curvilinear states.
    """
    from pathlib import Path

    import pandas as pd

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    classes = classes or {}
    id_map = {vid: k + 1 for k, vid in enumerate(sorted(trace.vehicles))}
    for vid in sorted(trace.vehicles):
        track = trace.vehicles[vid]
        length, width = track.dims.length, track.dims.width
        for k, t in enumerate(trace.times):
            if not track.present[k]:
                continue
            s, v, a, d, theta = track.states[k]
            v_lon, v_lat = v * np.cos(theta), v * np.sin(theta)
            y_top = HIGHD_GAMMA - d
            row = {
                "frame": int(round(float(t) * frame_rate)),
                "id": id_map[vid],
                "x": s - length,
                "y": y_top,
                "width": length,
                "height": width,
                "xVelocity": v_lon,
                "yVelocity": -v_lat,
                "xAcceleration": a,
                "yAcceleration": 0.0,
                "laneId": int(np.searchsorted(LOWER_MARKINGS, y_top + width / 2.0)),
            }
            if classes:
                row["class"] = classes.get(vid, "Car")
            rows.append(row)
    df = pd.DataFrame(rows).sort_values(["frame", "id"], kind="stable")
    df.to_csv(data_dir / f"{rec_id}_tracks.csv", index=False)
    meta = pd.DataFrame([{
        "id": rec_id,
        "frameRate": frame_rate,
        "upperLaneMarkings": ";".join(f"{m:g}" for m in UPPER_MARKINGS),
        "lowerLaneMarkings": ";".join(f"{m:g}" for m in LOWER_MARKINGS),
    }])
    meta.to_csv(data_dir / f"{rec_id}_recordingMeta.csv", index=False)


def trim_contract_trace(dt: float = 0.04, duration: float = 12.0) -> Trace:
    """Fixture with a safe window opening exactly at 2.0 s and the last
    violation interval ending exactly at 10.0 s."""
    n = int(round(duration / dt)) + 1
    times = np.round(np.arange(n) * dt, 6)
    v = 20.0
    thr = _lon_threshold(v, v, RssParams())
    near, far = 0.8 * thr, 1.2 * thr
    gap = np.where(times < 2.0, near,
                   np.where(times < 6.0, far,
                            np.where(times < 10.0, near, far)))
    sv_v = np.full(n, v)
    zeros = np.zeros(n)
    d = np.full(n, lane_center(0))
    sv_states = np.stack([zeros + v * times, sv_v, zeros, d, zeros], axis=1)
    pov_states = np.stack([gap + v * times, sv_v, zeros, d, zeros], axis=1)
    ones = np.ones(n, dtype=bool)
    return Trace(times, {"sv": VehicleTrack(CAR, sv_states, ones),
                         "pov": VehicleTrack(CAR, pov_states, ones)})
