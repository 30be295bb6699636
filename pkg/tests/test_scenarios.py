import random

import pytest

from disturbmon.errors import ArityMismatch
from disturbmon.params import ScenarioParams
from disturbmon.scenarios import (ALL_INDICES, SpecSet, ahead_of, ahead_of_ext,
                                  catalog, cut_in, cut_out, danger,
                                  danger_arises, init_safe, inst_safe,
                                  rss_violation, scenario)
from disturbmon.stl import EvalContext, Monitor, eval_bool, parse, pretty
from disturbmon.synth import lane_ids, synth_map, synthesize
from disturbmon.trace import VehicleDims, trace_from_channels
from gen import random_road_trace

ROAD = synth_map()
LANES = lane_ids(ROAD)


def ctx_on_road(trace, min_danger=0.0, min_safe=0.6, lane=None):
    bindings = {"SV": "sv", "POV": "pov", "POV1": "pov", "POV2": "pov2",
                "L": lane or LANES[0]}
    return EvalContext(trace=trace, road=ROAD, bindings=bindings,
                       scenario=ScenarioParams(min_danger, min_safe))


def two_car_trace(s_sv, s_pov, v_sv=20.0, v_pov=20.0, d_sv=2.75, d_pov=2.75,
                  dims=VehicleDims(5.0, 2.0)):
    times = [0.0, 1.0]
    return trace_from_channels(
        times,
        {"sv": {"s": [s_sv, s_sv + v_sv], "v": [v_sv, v_sv], "d": [d_sv, d_sv]},
         "pov": {"s": [s_pov, s_pov + v_pov], "v": [v_pov, v_pov],
                 "d": [d_pov, d_pov]}},
        dims={"sv": dims, "pov": dims},
    )


def test_ahead_of_is_nonstrict():
    # front(sv) = 60, rear(pov) = 65 - 5 = 60: boundary counts.
    tr = two_car_trace(60.0, 65.0)
    ctx = ctx_on_road(tr)
    assert eval_bool(ahead_of("SV", "POV"), ctx, 0.0)


def test_ahead_of_ext_strictly_compares_fronts():
    # front(sv)=55, front(pov)=58, rear(pov)=53.
    tr = two_car_trace(55.0, 58.0)
    ctx = ctx_on_road(tr)
    assert not eval_bool(ahead_of("SV", "POV"), ctx, 0.0)
    assert eval_bool(ahead_of_ext("SV", "POV"), ctx, 0.0)


def test_ahead_of_implies_ext():
    rng = random.Random(12)
    for _ in range(300):
        tr = two_car_trace(rng.uniform(-50, 50), rng.uniform(-50, 50))
        ctx = ctx_on_road(tr)
        if eval_bool(ahead_of("SV", "POV"), ctx, 0.0):
            assert eval_bool(ahead_of_ext("SV", "POV"), ctx, 0.0)


def test_danger_with_zero_duration_equals_violation():
    rng = random.Random(13)
    for _ in range(60):
        tr = random_road_trace(rng)
        ctx = ctx_on_road(tr, min_danger=0.0)
        monitor = Monitor(ctx)
        assert monitor.sat(danger("SV", "POV")) == monitor.sat(rss_violation("SV", "POV"))


def test_danger_duration_monotone():
    rng = random.Random(14)
    for _ in range(120):
        tr = random_road_trace(rng)
        long = Monitor(ctx_on_road(tr, min_danger=0.6))
        short = Monitor(ctx_on_road(tr, min_danger=0.0))
        phi = danger("SV", "POV")
        t0 = tr.domain[0]
        if long.holds(phi, t0):
            assert short.holds(phi, t0)


def test_init_safe_excludes_danger_now():
    rng = random.Random(15)
    for _ in range(120):
        tr = random_road_trace(rng)
        monitor = Monitor(ctx_on_road(tr, min_danger=0.0, min_safe=0.6))
        t0 = tr.domain[0]
        if monitor.holds(init_safe("SV", "POV"), t0):
            assert not monitor.holds(danger("SV", "POV"), t0)
        assert monitor.holds(inst_safe("SV", "POV"), t0) \
            != monitor.holds(rss_violation("SV", "POV"), t0)


def test_cut_in_on_generated_trajectory():
    g = synthesize(1, seed=77)
    ctx = EvalContext(trace=g.trace, road=g.road, bindings=g.bindings,
                      scenario=ScenarioParams(0.0, 0.6))
    assert eval_bool(cut_in("POV", "SV", "L"), ctx, 0.0)


def test_cut_in_false_when_already_sharing_lane():
    # Same lane from the start: the first conjunct fails.
    tr = two_car_trace(0.0, 30.0)
    ctx = ctx_on_road(tr)
    assert not eval_bool(cut_in("POV", "SV", "L"), ctx, 0.0)


def test_cut_in_base_implies_ext_variant():
    rng = random.Random(16)
    for _ in range(100):
        tr = random_road_trace(rng)
        monitor = Monitor(ctx_on_road(tr))
        t0 = tr.domain[0]
        if monitor.holds(cut_in("POV", "SV", "L", SpecSet.BASE), t0):
            assert monitor.holds(cut_in("POV", "SV", "L", SpecSet.EXT), t0)


def test_cut_out_on_generated_trajectory():
    g = synthesize(6, seed=78)
    lane = g.bindings["L"]
    ctx = EvalContext(trace=g.trace, road=g.road, bindings=g.bindings,
                      scenario=ScenarioParams(0.0, 0.6))
    assert eval_bool(cut_out("POV", "SV", "L"), ctx, 0.0)
    assert lane in lane_ids(g.road)


def test_accel_decel_follow_speed_comparison():
    # POV faster than SV while keeping the lane: the acceleration behaviour.
    tr = two_car_trace(0.0, -40.0, v_sv=25.0, v_pov=30.0)
    ctx = ctx_on_road(tr)
    assert eval_bool(parse("accel(POV,SV,L)"), ctx, 0.0)
    assert not eval_bool(parse("decel(POV,SV,L)"), ctx, 0.0)
    # SV faster: only deceleration matches.
    tr2 = two_car_trace(0.0, 60.0, v_sv=30.0, v_pov=22.0)
    ctx2 = ctx_on_road(tr2)
    assert eval_bool(parse("decel(POV,SV,L)"), ctx2, 0.0)
    assert not eval_bool(parse("accel(POV,SV,L)"), ctx2, 0.0)


def test_accel_ext_accepts_positive_acceleration():
    times = [0.0, 1.0]
    tr = trace_from_channels(
        times,
        {"sv": {"s": [0, 30], "v": [30, 30], "d": [2.75, 2.75]},
         "pov": {"s": [-40, -15], "v": [25, 27], "a": [2.0, 2.0],
                 "d": [2.75, 2.75]}})
    ctx = ctx_on_road(tr)
    assert not eval_bool(parse("accel(POV,SV,L)"), ctx, 0.0)
    assert eval_bool(parse("accel_ext(POV,SV,L)"), ctx, 0.0)


def test_accel_implies_ext_pointwise():
    rng = random.Random(18)
    for _ in range(100):
        tr = random_road_trace(rng)
        monitor = Monitor(ctx_on_road(tr))
        base = monitor.series(parse("accel(POV,SV,L)"))[0]
        ext = monitor.series(parse("accel_ext(POV,SV,L)"))[0]
        for b, e in zip(base, ext):
            if b:
                assert e


def test_scenario_arity_checks():
    with pytest.raises(ArityMismatch):
        scenario(2)  # needs two POV names
    with pytest.raises(ArityMismatch):
        scenario(1, povs=("POV1", "POV2"))
    with pytest.raises(ValueError):
        scenario(25)


def test_scenario_one_structure():
    text = pretty(scenario(1))
    assert text == ("initSafe(SV,POV) & mainRoad(SV,POV) & "
                    "(true & (laneKeep(SV,L) U danger(SV,POV)) & cutIn(POV,SV,L))")


def test_periodic_indices_share_disturbance():
    base = pretty(scenario(1)).split("mainRoad(SV,POV) & ")[1]
    merge = pretty(scenario(9)).split("mergeZone(SV,POV) & ")[1]
    depart = pretty(scenario(17)).split("departZone(SV,POV) & ")[1]
    assert base == merge == depart


def test_ext_variant_substitutions():
    base = pretty(scenario(4))
    ext_a = pretty(scenario(4, SpecSet.EXT_A))
    ext = pretty(scenario(4, SpecSet.EXT))
    assert "decel(POV,SV,L)" in base and "aheadOf(SV,POV)" in base
    assert "decel_ext(POV,SV,L)" in ext_a and "aheadOf(SV,POV)" in ext_a
    assert "decel_ext(POV,SV,L)" in ext and "aheadOf_ext(SV,POV)" in ext
    assert "cutIn_ext" in pretty(scenario(1, SpecSet.EXT))
    assert "cutIn(" in pretty(scenario(1, SpecSet.EXT_A))


def test_catalog_covers_all_indices():
    for variant in SpecSet:
        formulas = catalog(variant)
        assert sorted(formulas) == list(ALL_INDICES)


def _holds_scenario(monitor, i, variant, povs):
    return monitor.holds(scenario(i, variant, povs=povs), monitor.domain[0])


def test_spec_set_monotonicity_and_necessity_random():
    rng = random.Random(19)
    for _ in range(80):
        tr = random_road_trace(rng)
        monitor = Monitor(ctx_on_road(tr))
        arises = monitor.holds(danger_arises("SV", "POV"), tr.domain[0])
        for i in (1, 3, 4, 5, 6, 7, 8):
            base = _holds_scenario(monitor, i, SpecSet.BASE, ("POV",))
            ext_a = _holds_scenario(monitor, i, SpecSet.EXT_A, ("POV",))
            ext = _holds_scenario(monitor, i, SpecSet.EXT, ("POV",))
            assert (not base or ext_a) and (not ext_a or ext)
            if base or ext_a or ext:
                assert arises


def test_scenario_min_danger_monotone():
    # A durable danger window contains instantaneous violations throughout,
    # so every lane-change closure that fits the wide window also has an
    # instantaneous witness inside it.
    rng = random.Random(77)
    cases = [random_road_trace(rng) for _ in range(60)]
    two_car_rows = (1, 3, 4, 5, 6, 7, 8)
    cases += [synthesize(two_car_rows[k % 7], seed=500 + k, dt=0.2).trace
              for k in range(14)]
    for tr in cases:
        long = Monitor(ctx_on_road(tr, min_danger=0.6))
        short = Monitor(ctx_on_road(tr, min_danger=0.0))
        t0 = tr.domain[0]
        for i in (1, 3, 4, 5, 6, 7, 8):
            phi = scenario(i, SpecSet.EXT)
            if long.holds(phi, t0):
                assert short.holds(phi, t0), f"scenario {i} not md-monotone"


def test_three_vehicle_scenario_is_not_a_cut_out_composition():
    # The witness satisfies the three-vehicle disturbance while the vehicle
    # that leaves the lane never becomes dangerous itself.
    g = synthesize(2, seed=79)
    ctx = EvalContext(trace=g.trace, road=g.road, bindings=g.bindings,
                      scenario=ScenarioParams(0.0, 0.6))
    monitor = Monitor(ctx)
    t0 = g.trace.domain[0]
    assert monitor.holds(scenario(2, povs=("POV1", "POV2")), t0)
    assert not monitor.holds(cut_out("POV1", "SV", "L"), t0)
    # Danger is between the subject and the trailing slow vehicle.
    assert monitor.holds(danger_arises("SV", "POV2"), t0)


def test_generated_traces_satisfy_danger_arises():
    for idx in (1, 6, 12, 20):
        g = synthesize(idx, seed=80 + idx)
        ctx = EvalContext(trace=g.trace, road=g.road, bindings=g.bindings,
                          scenario=ScenarioParams(0.0, 0.6))
        pov = "POV2" if g.povs[-1] == "POV2" else "POV"
        assert eval_bool(danger_arises("SV", pov), ctx, g.trace.domain[0])
