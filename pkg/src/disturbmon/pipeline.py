"""Recording ingestion, candidate pairs, the disturbance filter, and evaluation.

The flow mirrors the offline protocol: ingest drone recordings, collect all
ordered vehicle pairs that ever violate the safe distance, keep those where
danger arises out of a durable safe phase, trim each trace to the window
from the first safe time to the end of the last violation interval, and
evaluate the scenario catalog over the result.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .config import RunConfig
from .errors import DataError, ManifestMismatch
from .params import RssParams, ScenarioParams
from .road import Lanelet, RoadNetwork, at_lane_margin, build_lanes
from .rss import violation_margins_arrays
from .scenarios import SpecSet, danger_arises, init_safe, rss_violation, scenario
from .stl import EvalContext, Monitor
from .trace import Trace, VehicleDims, VehicleTrack

TRACK_COLUMNS = ["frame", "id", "x", "y", "width", "height", "xVelocity",
                 "yVelocity", "xAcceleration", "yAcceleration", "laneId"]

LOWER, UPPER = 1, 2  # driving directions: +x and -x


@dataclass
class VehicleRecord:
    vid: str
    dims: VehicleDims
    cls: str
    direction: int
    first_frame: int
    states: np.ndarray  # (n, 5) on a contiguous frame range

    @property
    def last_frame(self) -> int:
        return self.first_frame + self.states.shape[0] - 1


@dataclass
class DirectionData:
    direction: int
    road: RoadNetwork
    vehicles: dict[str, VehicleRecord] = field(default_factory=dict)


@dataclass
class IngestStats:
    rows: int = 0
    dropped_class: int = 0
    vehicles: int = 0


@dataclass
class Recording:
    rec_id: str
    frame_rate: float
    directions: dict[int, DirectionData]
    stats: IngestStats

    def pair_trace(self, direction: int, sv: str, pov: str,
                   extras: tuple[str, ...] = ()) -> Trace | None:
        """Trace over the (sv, pov) co-presence window, or None.

        Extra vehicles are included with presence flags limited to their own
        recorded lifetimes.
        """
        data = self.directions[direction]
        a, b = data.vehicles[sv], data.vehicles[pov]
        f0 = max(a.first_frame, b.first_frame)
        f1 = min(a.last_frame, b.last_frame)
        if f1 - f0 < 1:
            return None
        n = f1 - f0 + 1
        times = np.arange(f0, f1 + 1) / self.frame_rate
        vehicles = {}
        for rec in (a, b):
            lo = f0 - rec.first_frame
            vehicles[rec.vid] = VehicleTrack(rec.dims, rec.states[lo:lo + n],
                                             np.ones(n, dtype=bool))
        for vid in extras:
            rec = data.vehicles[vid]
            g0 = max(f0, rec.first_frame)
            g1 = min(f1, rec.last_frame)
            if g1 < g0:
                continue
            states = np.full((n, 5), np.nan)
            present = np.zeros(n, dtype=bool)
            states[g0 - f0:g1 - f0 + 1] = rec.states[g0 - rec.first_frame:
                                                     g1 - rec.first_frame + 1]
            present[g0 - f0:g1 - f0 + 1] = True
            vehicles[rec.vid] = VehicleTrack(rec.dims, states, present)
        return Trace(times, vehicles)


def _lanes_from_markings(markings: list[float], direction: int,
                         s_lo: float, s_hi: float) -> RoadNetwork:
    """One main-zone lanelet per marking gap, in curvilinear coordinates."""
    ms = sorted(markings)
    if len(ms) < 2:
        raise DataError("need at least two lane markings per direction")
    gamma = ms[-1] if direction == LOWER else ms[0]
    lanelets = []
    for j in range(len(ms) - 1):
        if direction == LOWER:
            d_right, d_left = gamma - ms[j + 1], gamma - ms[j]
        else:
            d_right, d_left = ms[j] - gamma, ms[j + 1] - gamma
        lanelets.append(Lanelet(f"dir{direction}_lane{j}", "mainZone", "main",
                                s_lo, s_hi, d_right, d_left, None, None))
    return build_lanes(lanelets)


def _read_metadata(path: Path) -> tuple[float, list[float], list[float]]:
    meta = pd.read_csv(path)
    if meta.empty:
        raise DataError(f"{path}: empty metadata")
    row = meta.iloc[0]
    missing = [c for c in ("frameRate", "upperLaneMarkings", "lowerLaneMarkings")
               if c not in meta.columns]
    if missing:
        raise DataError(f"{path}: missing metadata columns {missing}")
    frame_rate = float(row["frameRate"])
    if not frame_rate > 0:
        raise DataError(f"{path}: frame rate must be positive")

    def _marks(cell) -> list[float]:
        out = [float(x) for x in str(cell).split(";") if x.strip()]
        if sorted(out) != out:
            raise DataError(f"{path}: lane markings must be increasing")
        return out

    return frame_rate, _marks(row["upperLaneMarkings"]), _marks(row["lowerLaneMarkings"])


def ingest(tracks_file: str | Path, meta_file: str | Path,
           config: RunConfig | None = None) -> Recording:
    """Build per-direction vehicle records in curvilinear coordinates.

    World positions reference the top-left corner of the vehicle box with the
    y axis pointing down; the reference path per direction is the outermost
    lane marking, and the lateral offset grows to the driver's left.
    """
    config = config or RunConfig()
    tracks_file, meta_file = Path(tracks_file), Path(meta_file)
    frame_rate, upper_marks, lower_marks = _read_metadata(meta_file)

    try:
        df = pd.read_csv(tracks_file)
    except Exception as exc:  # pandas raises various parser errors
        raise DataError(f"{tracks_file}: {exc}") from exc
    missing = [c for c in TRACK_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"{tracks_file}: missing columns {missing}")

    stats = IngestStats(rows=len(df))
    has_class = "class" in df.columns
    directions: dict[int, DirectionData] = {}
    s_extent = {LOWER: [math.inf, -math.inf], UPPER: [math.inf, -math.inf]}
    records: list[tuple[int, VehicleRecord]] = []
    for vid, group in df.groupby("id", sort=True):
        group = group.sort_values("frame")
        if has_class and config["run.cars_only"]:
            cls = str(group["class"].iloc[0])
            if cls.lower() != "car":
                stats.dropped_class += len(group)
                continue
        else:
            cls = "Car"
        frames = group["frame"].to_numpy(dtype=int)
        if len(frames) < 2:
            continue
        if np.any(np.diff(frames) != 1):
            raise DataError(f"{tracks_file}: vehicle {vid} has non-contiguous frames")
        direction = LOWER if float(group["xVelocity"].mean()) >= 0 else UPPER
        x = group["x"].to_numpy(float)
        y = group["y"].to_numpy(float)
        w = group["width"].to_numpy(float)    # longitudinal box extent
        h = group["height"].to_numpy(float)   # lateral box extent
        vx = group["xVelocity"].to_numpy(float)
        vy = group["yVelocity"].to_numpy(float)
        ax = group["xAcceleration"].to_numpy(float)
        if direction == LOWER:
            gamma = max(lower_marks)
            s = x + w
            d = gamma - y
            v_lon, v_lat, a_lon = vx, -vy, ax
        else:
            gamma = min(upper_marks)
            s = -x
            d = (y + h) - gamma
            v_lon, v_lat, a_lon = -vx, vy, -ax
        v = np.hypot(v_lon, v_lat)
        theta = np.arctan2(v_lat, v_lon)
        states = np.stack([s, v, a_lon, d, theta], axis=1)
        dims = VehicleDims(float(np.median(w)), float(np.median(h)))
        rec = VehicleRecord(str(vid), dims, cls, direction, int(frames[0]), states)
        records.append((direction, rec))
        ext = s_extent[direction]
        ext[0] = min(ext[0], float(s.min()) - 50.0)
        ext[1] = max(ext[1], float(s.max()) + 50.0)

    stats.vehicles = len(records)
    for direction in (LOWER, UPPER):
        members = [r for d, r in records if d == direction]
        if not members:
            continue
        lo, hi = s_extent[direction]
        marks = lower_marks if direction == LOWER else upper_marks
        road = _lanes_from_markings(marks, direction, lo, hi)
        directions[direction] = DirectionData(direction, road,
                                              {r.vid: r for r in members})
    return Recording(tracks_file.stem.replace("_tracks", ""), frame_rate,
                     directions, stats)


@dataclass(frozen=True)
class CandidatePair:
    rec_id: str
    direction: int
    sv: str
    pov: str
    t_lo: float
    t_hi: float

    @property
    def key(self) -> tuple:
        return (self.rec_id, self.direction, self.sv, self.pov)


def enumerate_pairs(rec: Recording, rss: RssParams, convention: str = "cos_sin",
                    stats: FilterStats | None = None) -> list[CandidatePair]:
    """Ordered vehicle pairs that are co-present and ever violate the safe
    distance."""
    out = []
    for direction in sorted(rec.directions):
        data = rec.directions[direction]
        vids = sorted(data.vehicles)
        for sv in vids:
            a = data.vehicles[sv]
            for pov in vids:
                if pov == sv:
                    continue
                b = data.vehicles[pov]
                f0 = max(a.first_frame, b.first_frame)
                f1 = min(a.last_frame, b.last_frame)
                if f1 - f0 < 1:
                    continue
                if stats is not None:
                    stats.pairs_scanned += 1
                sa = a.states[f0 - a.first_frame: f1 - a.first_frame + 1]
                sb = b.states[f0 - b.first_frame: f1 - b.first_frame + 1]
                margins = violation_margins_arrays(sa, a.dims, sb, b.dims,
                                                   rss, convention)
                if np.any(margins >= 0):
                    out.append(CandidatePair(rec.rec_id, direction, sv, pov,
                                             f0 / rec.frame_rate,
                                             f1 / rec.frame_rate))
    if stats is not None:
        stats.pairs_violating += len(out)
    return out


@dataclass
class DisturbTrace:
    trace: Trace
    rec_id: str
    direction: int
    sv: str
    pov: str
    t_start: float
    t_end: float
    extras: tuple[str, ...] = ()

    @property
    def trace_id(self) -> str:
        return f"{self.rec_id}_d{self.direction}_{self.sv}_{self.pov}"


@dataclass
class FilterStats:
    pairs_scanned: int = 0
    pairs_violating: int = 0
    pairs_kept: int = 0


def _ahead_in_lane(trace: Trace, road: RoadNetwork, sv: str, other: str,
                   lane: str, t: float) -> bool:
    """Is `other` entirely ahead of `sv` and inside `lane` at time t?"""
    if not trace.present_at(other, t):
        return False
    sv_state = trace.state_at(sv, t)
    state = trace.state_at(other, t)
    dims = trace.vehicles[other].dims
    if at_lane_margin(state, dims, road, lane) <= 0:
        return False
    return sv_state.s <= state.s - dims.length


def _filter_pair(rec: Recording, pair: CandidatePair, rss: RssParams,
                 scenario_params: ScenarioParams, mode: str,
                 convention: str, three_vehicle: bool) -> DisturbTrace | None:
    data = rec.directions[pair.direction]
    extras: tuple[str, ...] = ()
    if three_vehicle:
        extras = tuple(v for v in sorted(data.vehicles)
                       if v not in (pair.sv, pair.pov))
    trace = rec.pair_trace(pair.direction, pair.sv, pair.pov, extras)
    if trace is None:
        return None
    bindings = {"SV": pair.sv, "POV": pair.pov}
    ctx = EvalContext(trace=trace, road=data.road, bindings=bindings, rss=rss,
                      scenario=scenario_params, mode=mode,
                      angle_convention=convention)
    monitor = Monitor(ctx)
    t0 = trace.domain[0]
    if not monitor.holds(danger_arises("SV", "POV"), t0):
        return None
    safe_set = monitor.sat(init_safe("SV", "POV"))
    viol_set = monitor.sat(rss_violation("SV", "POV"))
    if safe_set.is_empty() or viol_set.is_empty():
        return None
    first = safe_set.ivals[0]
    t_start = first.lo if first.lo_closed else None
    if t_start is None:
        inside = [float(t) for t in trace.times if first.contains(float(t))]
        if not inside:
            return None
        t_start = inside[0]
    t_end = viol_set.ivals[-1].hi
    if t_end <= t_start:
        return None
    try:
        trimmed = trace.trim(t_start, t_end, mode)
    except Exception:
        return None
    witnesses: tuple[str, ...] = ()
    if three_vehicle:
        # Candidate third vehicles: ahead of the SV in its initial lane at the
        # trimmed start, as is the danger partner itself.
        lane = initial_lane(trimmed, data.road, pair.sv, t_start)
        if lane is not None and _ahead_in_lane(trimmed, data.road, pair.sv,
                                               pair.pov, lane, t_start):
            witnesses = tuple(v for v in extras
                              if _ahead_in_lane(trimmed, data.road, pair.sv,
                                                v, lane, t_start))
        keep = {pair.sv, pair.pov, *witnesses}
        trimmed = Trace(trimmed.times, {vid: track for vid, track
                                        in trimmed.vehicles.items()
                                        if vid in keep})
    return DisturbTrace(trimmed, pair.rec_id, pair.direction, pair.sv, pair.pov,
                        float(t_start), float(t_end), witnesses)


def _filter_chunk(args) -> list:
    rec, chunk, rss, scenario_params, mode, convention, three_vehicle = args
    return [_filter_pair(rec, pair, rss, scenario_params, mode, convention,
                         three_vehicle)
            for pair in chunk]


def filter_and_trim(rec: Recording, pairs: list[CandidatePair], rss: RssParams,
                    scenario_params: ScenarioParams, mode: str = "step",
                    convention: str = "cos_sin", jobs: int = 1,
                    three_vehicle: bool = False,
                    stats: FilterStats | None = None) -> list[DisturbTrace]:
    """Keep pairs where danger arises out of a safe phase; trim each trace to
    [first safe time, end of the last violation interval]."""
    ordered = sorted(pairs, key=lambda p: p.key)
    if jobs <= 1 or len(ordered) < 4:
        results = [_filter_pair(rec, p, rss, scenario_params, mode, convention,
                                three_vehicle)
                   for p in ordered]
    else:
        chunks = [ordered[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_filter_chunk,
                                  [(rec, c, rss, scenario_params, mode,
                                    convention, three_vehicle) for c in chunks]))
        by_key = {}
        for chunk, part in zip(chunks, parts):
            for pair, res in zip(chunk, part):
                by_key[pair.key] = res
        results = [by_key[p.key] for p in ordered]
    kept = [r for r in results if r is not None]
    if stats is not None:
        stats.pairs_kept += len(kept)
    return kept


# -- evaluation ---------------------------------------------------------------

def initial_lane(trace: Trace, road: RoadNetwork, vid: str, t: float) -> str | None:
    """Deterministic pick of the lane a vehicle occupies most at time t."""
    state = trace.state_at(vid, t)
    dims = trace.vehicles[vid].dims
    best, best_margin = None, 0.0
    for lane_id in sorted(road.lanes):
        margin = at_lane_margin(state, dims, road, lane_id)
        if margin > best_margin:
            best, best_margin = lane_id, margin
    return best


@dataclass
class ScenarioOutcome:
    trace_id: str
    matches: dict[int, bool]


@dataclass
class EvaluationReport:
    spec_set: str
    min_danger: float
    n_traces: int
    matching: int
    counts: dict[int, int]
    outcomes: list[ScenarioOutcome] = field(default_factory=list)

    @property
    def recall(self) -> float | None:
        return None if self.n_traces == 0 else self.matching / self.n_traces


def _evaluate_trace(item: DisturbTrace, road: RoadNetwork, variant: SpecSet,
                    indices: list[int], rss: RssParams,
                    scenario_params: ScenarioParams, mode: str,
                    convention: str) -> dict[int, bool]:
    t0 = item.trace.domain[0]
    sv_lane = initial_lane(item.trace, road, item.sv, t0)
    pov_lane = initial_lane(item.trace, road, item.pov, t0)
    monitors: dict[tuple, Monitor] = {}

    def monitor_for(bindings: dict) -> Monitor:
        key = tuple(sorted(bindings.items()))
        if key not in monitors:
            ctx = EvalContext(trace=item.trace, road=road, bindings=bindings,
                              rss=rss, scenario=scenario_params, mode=mode,
                              angle_convention=convention)
            monitors[key] = Monitor(ctx)
        return monitors[key]

    matches: dict[int, bool] = {}
    for i in sorted(indices):
        row = (i - 1) % 8 + 1
        if row == 2:
            # Three-vehicle disturbance: true when some stored third vehicle
            # witnesses it as the vehicle that changes lanes.
            phi = scenario(i, variant, povs=("POV1", "POV2"))
            matches[i] = any(
                monitor_for({"SV": item.sv, "POV1": x, "POV2": item.pov,
                             "L": sv_lane}).holds(phi, t0)
                for x in item.extras) if sv_lane else False
            continue
        lane = pov_lane if row == 7 else sv_lane
        if lane is None:
            matches[i] = False
            continue
        bindings = {"SV": item.sv, "POV": item.pov, "L": lane}
        matches[i] = monitor_for(bindings).holds(scenario(i, variant), t0)
    return matches


def _evaluate_chunk(args) -> list[ScenarioOutcome]:
    chunk, roads, variant, indices, rss, scenario_params, mode, convention = args
    out = []
    for item in chunk:
        road = roads[(item.rec_id, item.direction)]
        matches = _evaluate_trace(item, road, variant, indices, rss,
                                  scenario_params, mode, convention)
        out.append(ScenarioOutcome(item.trace_id, matches))
    return out


def evaluate(items: list[DisturbTrace], roads: dict[tuple[str, int], RoadNetwork],
             variant: SpecSet, indices: list[int], rss: RssParams,
             scenario_params: ScenarioParams, mode: str = "step",
             convention: str = "cos_sin", jobs: int = 1) -> EvaluationReport:
    """Evaluate the catalog variant over trimmed traces at each trace start.

    Traces are independent; with jobs > 1 they are scored in worker
    processes and the report is reduced in trace-id order either way.
    """
    ordered = sorted(items, key=lambda x: x.trace_id)
    if jobs <= 1 or len(ordered) < 4:
        outcomes = _evaluate_chunk((ordered, roads, variant, indices, rss,
                                    scenario_params, mode, convention))
    else:
        chunks = [ordered[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_evaluate_chunk,
                                  [(c, roads, variant, indices, rss,
                                    scenario_params, mode, convention)
                                   for c in chunks]))
        by_id = {o.trace_id: o for part in parts for o in part}
        outcomes = [by_id[item.trace_id] for item in ordered]
    counts = {i: 0 for i in sorted(indices)}
    matching = 0
    for outcome in outcomes:
        if any(outcome.matches.values()):
            matching += 1
        for i, ok in outcome.matches.items():
            counts[i] += int(ok)
    return EvaluationReport(variant.value, scenario_params.min_danger,
                            len(outcomes), matching, counts, outcomes)


# -- trace directory serialization -------------------------------------------

TRACE_CSV_COLUMNS = ["t", "vehicle", "length", "width", "s", "v", "a", "d", "theta"]


def write_trace_csv(item: DisturbTrace, path: Path) -> None:
    rows = []
    trace = item.trace
    for role_vid in (item.sv, item.pov, *item.extras):
        track = trace.vehicles[role_vid]
        for k, t in enumerate(trace.times):
            if not track.present[k]:
                continue
            s, v, a, d, theta = track.states[k]
            rows.append({"t": round(float(t), 9), "vehicle": role_vid,
                         "length": track.dims.length, "width": track.dims.width,
                         "s": s, "v": v, "a": a, "d": d, "theta": theta})
    pd.DataFrame(rows, columns=TRACE_CSV_COLUMNS).to_csv(path, index=False,
                                                         float_format="%.9g")


def read_trace_csv(path: str | Path) -> tuple[Trace, list[str]]:
    """Load a per-pair trace CSV; returns the trace and vehicle ids in file order."""
    df = pd.read_csv(path)
    missing = [c for c in TRACE_CSV_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"{path}: missing columns {missing}")
    times = np.array(sorted(df["t"].unique()), dtype=float)
    vehicles = {}
    order = []
    for vid, group in df.groupby("vehicle", sort=False):
        vid = str(vid)
        order.append(vid)
        dims = VehicleDims(float(group["length"].iloc[0]), float(group["width"].iloc[0]))
        states = np.full((times.size, 5), np.nan)
        present = np.zeros(times.size, dtype=bool)
        k = np.searchsorted(times, group["t"].to_numpy(float))
        states[k] = group[["s", "v", "a", "d", "theta"]].to_numpy(float)
        present[k] = True
        vehicles[vid] = VehicleTrack(dims, states, present)
    return Trace(times, vehicles), order


def save_road(road: RoadNetwork) -> list[dict]:
    rows = []
    for lid in sorted(road.lanelets):
        l = road.lanelets[lid]
        rows.append({"id": l.id, "zone": l.zone, "attr": l.attr,
                     "s_min": l.s_min, "s_max": l.s_max,
                     "d_right": l.d_right, "d_left": l.d_left,
                     "pred": l.pred, "succ": l.succ})
    return rows


def load_road(rows: list[dict]) -> RoadNetwork:
    return build_lanes([Lanelet(**row) for row in rows])


def write_trace_dir(out_dir: str | Path, items: list[DisturbTrace],
                    roads: dict[tuple[str, int], RoadNetwork],
                    config: RunConfig, stats: FilterStats) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for item in sorted(items, key=lambda x: x.trace_id):
        fname = f"{item.trace_id}.csv"
        write_trace_csv(item, out_dir / fname)
        entries.append({
            "id": item.trace_id, "file": fname, "recording": item.rec_id,
            "direction": item.direction, "sv": item.sv, "pov": item.pov,
            "t_start": item.t_start, "t_end": item.t_end,
            "extras": list(item.extras),
        })
    manifest = {
        "params": {
            "rss": {k: config[f"rss.{k}"] for k in
                    ("rho", "a_max", "b_min", "b_max", "a_max_lat", "b_min_lat")},
            "min_danger": config["scenario.min_danger"],
            "min_safe": config["scenario.min_safe"],
            "interpolation": config["run.interpolation"],
            "angle_convention": config["run.angle_convention"],
            "cars_only": config["run.cars_only"],
        },
        "stats": {"pairs_scanned": stats.pairs_scanned,
                  "pairs_violating": stats.pairs_violating,
                  "pairs_kept": stats.pairs_kept},
        "roads": {f"{rid}:{direction}": save_road(road)
                  for (rid, direction), road in sorted(roads.items())},
        "traces": entries,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out_dir


def read_trace_dir(traces_dir: str | Path,
                   config: RunConfig | None = None
                   ) -> tuple[list[DisturbTrace], dict[tuple[str, int], RoadNetwork]]:
    traces_dir = Path(traces_dir)
    manifest_path = traces_dir / "manifest.json"
    if not manifest_path.exists():
        raise DataError(f"no manifest.json in {traces_dir}")
    manifest = json.loads(manifest_path.read_text())
    if config is not None:
        stored = manifest["params"]
        want = {
            "rss": {k: config[f"rss.{k}"] for k in
                    ("rho", "a_max", "b_min", "b_max", "a_max_lat", "b_min_lat")},
            "min_danger": config["scenario.min_danger"],
            "min_safe": config["scenario.min_safe"],
            "interpolation": config["run.interpolation"],
            "angle_convention": config["run.angle_convention"],
            "cars_only": config["run.cars_only"],
        }
        if stored != want:
            raise ManifestMismatch(
                f"trace directory was filtered with {stored}, config asks {want}")
    roads = {}
    for key, rows in manifest["roads"].items():
        rid, direction = key.rsplit(":", 1)
        roads[(rid, int(direction))] = load_road(rows)
    items = []
    for entry in manifest["traces"]:
        trace, _ = read_trace_csv(traces_dir / entry["file"])
        items.append(DisturbTrace(trace, entry["recording"], entry["direction"],
                                  entry["sv"], entry["pov"],
                                  entry["t_start"], entry["t_end"],
                                  tuple(entry.get("extras", ()))))
    return items, roads


def discover_recordings(data_dir: str | Path) -> list[tuple[Path, Path]]:
    data_dir = Path(data_dir)
    out = []
    for tracks in sorted(data_dir.glob("*_tracks.csv")):
        meta = tracks.with_name(tracks.name.replace("_tracks.csv",
                                                    "_recordingMeta.csv"))
        if not meta.exists():
            raise DataError(f"no metadata file for {tracks}")
        out.append((tracks, meta))
    if not out:
        raise DataError(f"no recordings found in {data_dir}")
    return out
