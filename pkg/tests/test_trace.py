import math
import random

import numpy as np
import pytest
from pytest import approx

from disturbmon.errors import EmptyDomain, OutOfDomain, VehicleAbsent
from disturbmon.trace import (Trace, VehicleDims, VehicleState, VehicleTrack,
                              front_rear, longitudinal_lateral_velocity,
                              trace_from_channels, trim, value_at)


def two_sample_trace():
    return trace_from_channels([0.0, 1.0], {"ego": {"s": [0.0, 10.0],
                                                    "v": [5.0, 5.0]}})


def test_value_at_linear_midpoint():
    tr = two_sample_trace()
    assert value_at(tr, "ego", 0.5, "linear").s == approx(5.0)


def test_value_at_step_holds_previous_sample():
    tr = two_sample_trace()
    assert value_at(tr, "ego", 0.5, "step").s == approx(0.0)


def test_value_at_outside_domain():
    tr = two_sample_trace()
    with pytest.raises(OutOfDomain):
        value_at(tr, "ego", 2.0)


def test_value_at_unknown_vehicle():
    tr = two_sample_trace()
    with pytest.raises(VehicleAbsent):
        value_at(tr, "ghost", 0.5)


def test_value_at_respects_presence():
    states = np.zeros((3, 5))
    states[:, 1] = 1.0
    present = np.array([True, False, True])
    tr = Trace(np.array([0.0, 1.0, 2.0]),
               {"a": VehicleTrack(VehicleDims(4.0, 2.0), states, present)})
    with pytest.raises(VehicleAbsent):
        tr.state_at("a", 1.5, "step")
    assert not tr.present_at("a", 1.0)
    assert tr.present_at("a", 0.5)


def test_interpolation_exact_at_samples():
    rng = random.Random(3)
    times = sorted(rng.uniform(0, 10) for _ in range(6))
    chans = {"s": [rng.uniform(-5, 5) for _ in times],
             "v": [rng.uniform(0, 30) for _ in times],
             "d": [rng.uniform(0, 10) for _ in times]}
    tr = trace_from_channels(times, {"x": chans})
    for k, t in enumerate(times):
        for mode in ("step", "linear"):
            state = value_at(tr, "x", t, mode)
            assert state.s == approx(chans["s"][k])
            assert state.v == approx(chans["v"][k])
            assert state.d == approx(chans["d"][k])


def test_linear_interpolation_bounded_by_bracketing_samples():
    rng = random.Random(9)
    times = [0.0, 0.7, 1.4, 2.5]
    chans = {"s": [rng.uniform(-5, 5) for _ in times],
             "v": [rng.uniform(0, 30) for _ in times]}
    tr = trace_from_channels(times, {"x": chans})
    for _ in range(100):
        t = rng.uniform(0, 2.5)
        k = max(i for i, ts in enumerate(times) if ts <= t)
        j = min(k + 1, len(times) - 1)
        state = value_at(tr, "x", t, "linear")
        assert min(chans["s"][k], chans["s"][j]) - 1e-12 <= state.s \
            <= max(chans["s"][k], chans["s"][j]) + 1e-12


def test_velocity_decomposition_aligned():
    v_lon, v_lat = longitudinal_lateral_velocity(VehicleState(0, 20, 0, 0, 0.0))
    assert (v_lon, v_lat) == approx((20.0, 0.0))


def test_velocity_decomposition_perpendicular():
    v_lon, v_lat = longitudinal_lateral_velocity(
        VehicleState(0, 20, 0, 0, math.pi / 2))
    assert v_lon == approx(0.0, abs=1e-12)
    assert v_lat == approx(20.0)


def test_velocity_decomposition_small_angle():
    v_lon, v_lat = longitudinal_lateral_velocity(VehicleState(0, 10, 0, 0, 0.1))
    assert v_lon == approx(9.950, abs=1e-3)
    assert v_lat == approx(0.998, abs=1e-3)


def test_velocity_decomposition_alternate_convention():
    v_lon, v_lat = longitudinal_lateral_velocity(
        VehicleState(0, 10, 0, 0, 0.1), convention="sin_cos")
    assert v_lon == approx(10 * math.sin(0.1))
    assert v_lat == approx(10 * math.cos(0.1))


def test_front_rear():
    assert front_rear(VehicleState(100, 0, 0, 0, 0), VehicleDims(5, 2)) == (100, 95)
    f, r = front_rear(VehicleState(0, 0, 0, 0, 0), VehicleDims(4.2, 2))
    assert (f, r) == (0, approx(-4.2))
    assert front_rear(VehicleState(50.5, 0, 0, 0, 0), VehicleDims(12, 2.5)) \
        == (50.5, approx(38.5))


def grid_trace():
    times = np.round(np.arange(0, 20.0001, 0.5), 10)
    return trace_from_channels(times, {"x": {"s": times * 2.0}})


def test_trim_restricts_domain():
    tr = grid_trace()
    out = trim(tr, 2.0, 10.0)
    assert out.domain == (2.0, 10.0)


def test_trim_identity():
    tr = grid_trace()
    out = trim(tr, *tr.domain)
    assert out.domain == tr.domain
    assert np.array_equal(out.times, tr.times)
    assert np.array_equal(out.vehicles["x"].states, tr.vehicles["x"].states)


def test_trim_too_few_samples():
    times = np.round(np.arange(0, 10.0001, 0.04), 10)
    tr = trace_from_channels(times, {"x": {"s": times}})
    # Only the 10.0 sample falls inside the window.
    with pytest.raises(EmptyDomain):
        trim(tr, 9.99, 10.0)


def test_trim_inserts_boundary_sample():
    tr = grid_trace()
    out = trim(tr, 2.25, 10.0, "linear")
    assert out.times[0] == 2.25
    assert value_at(out, "x", 2.25).s == approx(4.5)


def test_trim_idempotent():
    tr = grid_trace()
    once = trim(tr, 2.25, 9.75)
    twice = trim(once, 2.25, 9.75)
    assert np.array_equal(once.times, twice.times)
    assert np.array_equal(once.vehicles["x"].states, twice.vehicles["x"].states)


def test_trace_validation():
    with pytest.raises(Exception):
        trace_from_channels([0.0], {"x": {"s": [1.0]}})
    with pytest.raises(Exception):
        trace_from_channels([0.0, 0.0], {"x": {"s": [1.0, 1.0]}})
    with pytest.raises(Exception):
        trace_from_channels([0.0, 1.0], {"x": {"v": [-1.0, 0.0]}})
