import numpy as np
import pandas as pd
import pytest
from pytest import approx

from disturbmon.config import RunConfig, load_config
from disturbmon.errors import DataError, ManifestMismatch
from disturbmon.params import RssParams, ScenarioParams
from disturbmon.pipeline import (CandidatePair, FilterStats, DisturbTrace,
                                 discover_recordings, enumerate_pairs,
                                 evaluate, filter_and_trim, ingest,
                                 initial_lane, read_trace_csv, read_trace_dir,
                                 write_trace_csv, write_trace_dir)
from disturbmon.scenarios import SpecSet
from disturbmon.synth import (synthesize, trim_contract_trace,
                              write_highd_recording)

RSS = RssParams()
SCEN = ScenarioParams(0.0, 0.6)


@pytest.fixture()
def cutin_recording(tmp_path):
    g = synthesize(1, seed=5, dt=0.04)
    write_highd_recording(tmp_path, "01", g.trace, frame_rate=25.0)
    return tmp_path, g


def test_ingest_builds_lanes_and_traces(cutin_recording):
    data_dir, g = cutin_recording
    rec = ingest(data_dir / "01_tracks.csv", data_dir / "01_recordingMeta.csv")
    assert rec.frame_rate == 25.0
    assert list(rec.directions) == [1]
    data = rec.directions[1]
    assert len(data.road.lanes) == 3
    assert len(data.vehicles) == 2
    # Round trip: curvilinear states survive the world-coordinate encoding.
    # Numeric ids are assigned in sorted order of the original names.
    id_of = {name: str(k + 1) for k, name in enumerate(sorted(g.trace.vehicles))}
    orig = g.trace.vehicles[g.bindings["SV"]].states
    got = data.vehicles[id_of[g.bindings["SV"]]].states
    assert got[:, 0] == approx(orig[:, 0], abs=1e-6)   # s
    assert got[:, 3] == approx(orig[:, 3], abs=1e-6)   # d
    assert got[:, 1] == approx(orig[:, 1], abs=1e-6)   # v


def test_ingest_missing_column(tmp_path, cutin_recording):
    data_dir, _ = cutin_recording
    df = pd.read_csv(data_dir / "01_tracks.csv").drop(columns=["xVelocity"])
    df.to_csv(tmp_path / "02_tracks.csv", index=False)
    (data_dir / "01_recordingMeta.csv").rename(tmp_path / "02_recordingMeta.csv")
    with pytest.raises(DataError):
        ingest(tmp_path / "02_tracks.csv", tmp_path / "02_recordingMeta.csv")


def test_ingest_unordered_markings(tmp_path, cutin_recording):
    data_dir, _ = cutin_recording
    meta = pd.read_csv(data_dir / "01_recordingMeta.csv")
    meta.loc[0, "lowerLaneMarkings"] = "21;14;17.5;10.5"
    meta.to_csv(data_dir / "01_recordingMeta.csv", index=False)
    with pytest.raises(DataError):
        ingest(data_dir / "01_tracks.csv", data_dir / "01_recordingMeta.csv")


def test_cars_only_drops_trucks(tmp_path):
    g = synthesize(1, seed=6, dt=0.04)
    classes = {vid: ("Truck" if vid == g.bindings["POV"] else "Car")
               for vid in g.trace.vehicles}
    write_highd_recording(tmp_path, "01", g.trace, 25.0, classes=classes)
    rec = ingest(tmp_path / "01_tracks.csv", tmp_path / "01_recordingMeta.csv")
    assert rec.stats.dropped_class > 0
    assert len(rec.directions[1].vehicles) == 1
    cfg = RunConfig({"run.cars_only": False})
    rec_all = ingest(tmp_path / "01_tracks.csv",
                     tmp_path / "01_recordingMeta.csv", cfg)
    assert len(rec_all.directions[1].vehicles) == 2


def test_enumerate_pairs_emits_both_orders(cutin_recording):
    data_dir, _ = cutin_recording
    rec = ingest(data_dir / "01_tracks.csv", data_dir / "01_recordingMeta.csv")
    stats = FilterStats()
    pairs = enumerate_pairs(rec, RSS, stats=stats)
    assert stats.pairs_scanned == 2
    keys = {(p.sv, p.pov) for p in pairs}
    (a, b) = sorted(rec.directions[1].vehicles)
    assert keys == {(a, b), (b, a)}


def test_enumerate_pairs_empty_when_far_apart(tmp_path):
    from disturbmon.trace import Trace, VehicleDims, VehicleTrack

    n = 100
    times = np.arange(n) * 0.04
    ones = np.ones(n, dtype=bool)

    def track(s0):
        states = np.stack([s0 + 20 * times, np.full(n, 20.0), np.zeros(n),
                           np.full(n, 2.75), np.zeros(n)], axis=1)
        return VehicleTrack(VehicleDims(4.8, 2.0), states, ones)

    tr = Trace(times, {"a": track(0.0), "b": track(500.0)})
    write_highd_recording(tmp_path, "01", tr, 25.0)
    rec = ingest(tmp_path / "01_tracks.csv", tmp_path / "01_recordingMeta.csv")
    assert enumerate_pairs(rec, RSS) == []


def test_filter_drops_never_safe_pair(tmp_path):
    # Violating from the first frame with no safe lead-in; no durable safe
    # phase ever arises.
    from disturbmon.trace import Trace, VehicleDims, VehicleTrack

    n = 200
    times = np.arange(n) * 0.04
    ones = np.ones(n, dtype=bool)

    def track(s0):
        states = np.stack([s0 + 20 * times, np.full(n, 20.0), np.zeros(n),
                           np.full(n, 2.75), np.zeros(n)], axis=1)
        return VehicleTrack(VehicleDims(4.8, 2.0), states, ones)

    tr = Trace(times, {"a": track(0.0), "b": track(12.0)})
    write_highd_recording(tmp_path, "01", tr, 25.0)
    rec = ingest(tmp_path / "01_tracks.csv", tmp_path / "01_recordingMeta.csv")
    pairs = enumerate_pairs(rec, RSS)
    assert pairs
    kept = filter_and_trim(rec, pairs, RSS, SCEN)
    assert kept == []


def test_trim_contract_endpoints():
    trace = trim_contract_trace()
    item = DisturbTrace(trace, "fixture", 1, "sv", "pov", *trace.domain)
    pair = CandidatePair("fixture", 1, "sv", "pov", *trace.domain)

    class FakeRecording:
        directions = {1: type("D", (), {
            "road": synthesize(1, 0).road, "vehicles": {}})()}

        def pair_trace(self, direction, sv, pov, extras=()):
            return trace

    kept = filter_and_trim(FakeRecording(), [pair], RSS, SCEN)
    assert len(kept) == 1
    assert kept[0].t_start == 2.0
    assert kept[0].t_end == 10.0
    assert kept[0].trace.domain == (2.0, 10.0)


def test_filter_keeps_violation_running_to_trace_end(tmp_path):
    # Safe lead-in, then a violation that persists to the end of the trace.
    from disturbmon.trace import Trace, VehicleDims, VehicleTrack

    n = 250
    times = np.arange(n) * 0.04
    ones = np.ones(n, dtype=bool)
    gap = np.where(times < 4.0, 60.0, 20.0)

    def track(offset):
        states = np.stack([offset + 20 * times, np.full(n, 20.0), np.zeros(n),
                           np.full(n, 2.75), np.zeros(n)], axis=1)
        return VehicleTrack(VehicleDims(4.8, 2.0), states, ones)

    sv = track(0.0)
    pov_states = np.stack([gap + 20 * times, np.full(n, 20.0), np.zeros(n),
                           np.full(n, 2.75), np.zeros(n)], axis=1)
    tr = Trace(times, {"a": sv,
                       "b": VehicleTrack(VehicleDims(4.8, 2.0), pov_states, ones)})
    write_highd_recording(tmp_path, "01", tr, 25.0)
    rec = ingest(tmp_path / "01_tracks.csv", tmp_path / "01_recordingMeta.csv")
    kept = filter_and_trim(rec, enumerate_pairs(rec, RSS), RSS, SCEN)
    assert kept
    assert all(item.t_end == approx(times[-1]) for item in kept)


def test_kept_traces_satisfy_danger_arises_post_trim(tmp_path):
    from disturbmon.scenarios import danger_arises
    from disturbmon.stl import EvalContext, Monitor

    data_dir = tmp_path / "data"
    for k, idx in enumerate((1, 4, 6)):
        g = synthesize(idx, seed=700 + k, dt=0.04)
        write_highd_recording(data_dir, f"{k + 1:02d}", g.trace, 25.0)
    all_kept = 0
    for tracks, meta in discover_recordings(data_dir):
        rec = ingest(tracks, meta)
        kept = filter_and_trim(rec, enumerate_pairs(rec, RSS), RSS, SCEN)
        for item in kept:
            ctx = EvalContext(trace=item.trace,
                              road=rec.directions[item.direction].road,
                              bindings={"SV": item.sv, "POV": item.pov},
                              rss=RSS, scenario=SCEN)
            assert Monitor(ctx).holds(danger_arises("SV", "POV"),
                                      item.trace.domain[0])
            all_kept += 1
    assert all_kept > 0


def test_trace_csv_round_trip(tmp_path):
    g = synthesize(3, seed=9)
    item = DisturbTrace(g.trace, "01", 1, g.bindings["SV"], g.bindings["POV"],
                        *g.trace.domain)
    path = tmp_path / "pair.csv"
    write_trace_csv(item, path)
    loaded, order = read_trace_csv(path)
    assert order == [g.bindings["SV"], g.bindings["POV"]]
    assert loaded.times == approx(g.trace.times)
    for vid in loaded.vehicles:
        assert loaded.vehicles[vid].states == approx(
            g.trace.vehicles[vid].states, rel=1e-6, abs=1e-9)


def test_trace_dir_round_trip_and_manifest_guard(tmp_path):
    g = synthesize(1, seed=10, dt=0.04)
    data_dir = tmp_path / "data"
    write_highd_recording(data_dir, "01", g.trace, 25.0)
    rec = ingest(data_dir / "01_tracks.csv", data_dir / "01_recordingMeta.csv")
    stats = FilterStats()
    pairs = enumerate_pairs(rec, RSS, stats=stats)
    kept = filter_and_trim(rec, pairs, RSS, SCEN, stats=stats)
    roads = {(rec.rec_id, d): rec.directions[d].road for d in rec.directions}
    cfg = RunConfig()
    out = write_trace_dir(tmp_path / "traces", kept, roads, cfg, stats)
    items, loaded_roads = read_trace_dir(out, cfg)
    assert len(items) == len(kept)
    assert set(loaded_roads) == set(roads)
    bad = RunConfig({"scenario.min_danger": 0.6})
    with pytest.raises(ManifestMismatch):
        read_trace_dir(out, bad)


def test_evaluate_counts_and_recall(tmp_path):
    items, roads = [], {}
    for k, idx in enumerate((1, 4)):
        g = synthesize(idx, seed=20 + k)
        rid = f"{k:02d}"
        item = DisturbTrace(g.trace, rid, 1, g.bindings["SV"],
                            g.bindings["POV"], *g.trace.domain)
        items.append(item)
        roads[(rid, 1)] = g.road
    report = evaluate(items, roads, SpecSet.EXT, [1, 3, 4, 5, 6, 7, 8],
                      RSS, SCEN)
    assert report.n_traces == 2
    assert report.counts[1] >= 1 and report.counts[4] >= 1
    assert report.matching == 2
    assert report.recall == approx(1.0)


def test_evaluate_empty_input():
    report = evaluate([], {}, SpecSet.BASE, [1, 3], RSS, SCEN)
    assert report.n_traces == 0
    assert report.recall is None


def test_initial_lane_picks_largest_overlap():
    g = synthesize(1, seed=30)
    lane = initial_lane(g.trace, g.road, g.bindings["SV"], g.trace.domain[0])
    assert lane == g.bindings["L"]


def test_three_vehicle_mode_detects_scenario_two(tmp_path):
    g = synthesize(2, seed=31, dt=0.04)
    data_dir = tmp_path / "data"
    write_highd_recording(data_dir, "01", g.trace, 25.0)
    rec = ingest(data_dir / "01_tracks.csv", data_dir / "01_recordingMeta.csv")
    pairs = enumerate_pairs(rec, RSS)
    kept = filter_and_trim(rec, pairs, RSS, SCEN, three_vehicle=True)
    roads = {(rec.rec_id, 1): rec.directions[1].road}
    report = evaluate(kept, roads, SpecSet.EXT, [2], RSS, SCEN)
    assert report.counts[2] >= 1


def test_discover_recordings_requires_data(tmp_path):
    with pytest.raises(DataError):
        discover_recordings(tmp_path)


def test_config_file_and_overrides(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("rss.rho = 0.7\nrun.jobs = 2  # comment\n")
    cfg = load_config(cfg_file, {"rss.rho": "0.8"})
    assert cfg["rss.rho"] == 0.8   # flag wins
    assert cfg["run.jobs"] == 2
    with pytest.raises(DataError):
        load_config(None, {"nope.key": 1})
