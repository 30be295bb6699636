import math
import random

import numpy as np
from pytest import approx

from disturbmon.params import RssParams
from disturbmon.rss import (d_rss_lat, d_rss_lon, danger_ahead,
                            danger_ahead_margin, danger_ahead_rs_margin,
                            danger_left_margin, danger_left_rs_margin,
                            rss_violation, rss_violation_lat,
                            rss_violation_margin, violation_margins_arrays)
from disturbmon.trace import VehicleDims, VehicleState

P = RssParams()
CAR = VehicleDims(5.0, 2.0)


def st(s=0.0, v=0.0, a=0.0, d=0.0, theta=0.0):
    return VehicleState(s, v, a, d, theta)


def rand_state(rng):
    return VehicleState(rng.uniform(-50, 250), rng.uniform(0, 45),
                        rng.uniform(-6, 6), rng.uniform(-2, 12),
                        rng.uniform(-0.3, 0.3))


def rand_dims(rng):
    return VehicleDims(rng.uniform(3.0, 12.0), rng.uniform(1.5, 2.6))


# Frozen from direct evaluation of the safe-distance formula with the
# default parameters: 27.78*0.6 + 5*0.36/2 + 30.78^2/12 - 27.78^2/16.
def test_longitudinal_distance_calibration():
    assert d_rss_lon(27.78, 27.78, P) == approx(48.29, abs=0.01)
    # Matches the half-tacho rule of thumb: about 50 m at 100 km/h.
    assert 45.0 < d_rss_lon(27.78, 27.78, P) < 52.0


def test_longitudinal_distance_clamps_to_zero():
    assert d_rss_lon(0.0, 30.0, P) == 0.0
    assert d_rss_lon(10.0, 1e6, P) == 0.0


def test_lateral_distance_values():
    # 1.5*0.36 + (0.81 + 0.81)/3 = 0.54 + 0.54
    assert d_rss_lat(0.0, 0.0, P) == approx(1.08, abs=0.01)
    # 2*0.6 + 0.54 + ((1.9)^2 + (-1.9)^2)/3
    assert d_rss_lat(1.0, -1.0, P) == approx(4.147, abs=0.01)
    # Moderate divergence clamps: -3.6 + 0.54 + ((-2.1)^2 + 2.1^2)/3 < 0.
    # (For large opposite speeds the quadratic braking terms dominate and the
    # raw value turns positive again, so no clamp there.)
    assert d_rss_lat(-3.0, 3.0, P) == 0.0
    assert d_rss_lat(-30.0, 30.0, P) > 0.0


def test_longitudinal_distance_monotonicity():
    rng = random.Random(2)
    for _ in range(10_000):
        v_r = rng.uniform(0, 50)
        v_f = rng.uniform(0, 50)
        dv = rng.uniform(0, 5)
        assert d_rss_lon(v_r + dv, v_f, P) >= d_rss_lon(v_r, v_f, P)
        assert d_rss_lon(v_r, v_f + dv, P) <= d_rss_lon(v_r, v_f, P)
        assert d_rss_lon(v_r, v_f, P) >= 0.0
        assert d_rss_lat(rng.uniform(-10, 10), rng.uniform(-10, 10), P) >= 0.0


def test_danger_ahead_examples():
    # Both at 27.78 m/s, 30 m gap, 5 m front vehicle: inside 5 + 48.29.
    assert danger_ahead(st(0, 27.78), CAR, st(30, 27.78), CAR, P)
    assert not danger_ahead(st(0, 27.78), CAR, st(200, 27.78), CAR, P)
    # Negative gap: the second vehicle is behind, not ahead.
    assert not danger_ahead(st(0, 27.78), CAR, st(-1, 27.78), CAR, P)


def test_lateral_violation_examples():
    # Same-lane following: zero lateral offset always violates.
    assert rss_violation_lat(st(0, 20), CAR, st(30, 20), CAR, P)
    # 10 m lateral gap at zero lateral speed: 10 > 2 + 1.08.
    assert not rss_violation_lat(st(0, 20, d=0), CAR, st(0, 20, d=10), CAR, P)


def test_violation_symmetry():
    rng = random.Random(4)
    for _ in range(1000):
        a, b = rand_state(rng), rand_state(rng)
        da, db = rand_dims(rng), rand_dims(rng)
        assert rss_violation(a, da, b, db, P) == rss_violation(b, db, a, da, P)
        assert rss_violation_margin(a, da, b, db, P) \
            == approx(rss_violation_margin(b, db, a, da, P))


def test_reciprocal_variant_sign_equivalence():
    rng = random.Random(6)
    for _ in range(1000):
        a, b = rand_state(rng), rand_state(rng)
        da, db = rand_dims(rng), rand_dims(rng)
        for plain, recip in ((danger_ahead_margin, danger_ahead_rs_margin),
                             (danger_left_margin, danger_left_rs_margin)):
            m = plain(a, da, b, db, P)
            r = recip(a, da, b, db, P)
            if m != 0 and not math.isinf(r):
                assert (m >= 0) == (r >= 0)


def test_reciprocal_variant_monotone_in_gap():
    # The plain margin rises then falls with the gap; the reciprocal variant
    # decreases monotonically, which is the point of using it.
    gaps = np.linspace(1.0, 150.0, 200)
    rob = [danger_ahead_rs_margin(st(0, 27.78), CAR, st(g, 27.78), CAR, P)
           for g in gaps]
    assert all(x >= y for x, y in zip(rob, rob[1:]))
    threshold = CAR.length + d_rss_lon(27.78, 27.78, P)
    for g, r in zip(gaps, rob):
        if g != approx(threshold):
            assert (r > 0) == (g < threshold)
    plain = [danger_ahead_margin(st(0, 27.78), CAR, st(g, 27.78), CAR, P)
             for g in gaps]
    assert any(x < y for x, y in zip(plain, plain[1:]))  # not monotone


def test_zero_gap_gives_infinite_margin():
    assert danger_ahead_rs_margin(st(10, 20), CAR, st(10, 20), CAR, P) == math.inf


def test_vectorized_margins_match_scalar():
    rng = random.Random(8)
    n = 64
    rows_a = [rand_state(rng) for _ in range(n)]
    rows_b = [rand_state(rng) for _ in range(n)]
    da, db = rand_dims(rng), rand_dims(rng)
    arr_a = np.array([[x.s, x.v, x.a, x.d, x.theta] for x in rows_a])
    arr_b = np.array([[x.s, x.v, x.a, x.d, x.theta] for x in rows_b])
    vec = violation_margins_arrays(arr_a, da, arr_b, db, P)
    for k in range(n):
        assert vec[k] == approx(rss_violation_margin(rows_a[k], da, rows_b[k], db, P))
