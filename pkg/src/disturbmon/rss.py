"""Safe longitudinal/lateral distances and the instantaneous danger predicates.

The longitudinal distance is the smallest gap such that the rear vehicle,
reacting after `rho` seconds of worst-case acceleration and then braking
comfortably, avoids hitting a front vehicle that brakes at its maximum
rate. The lateral analogue assumes both vehicles steer toward each other
during the reaction time; the stability margin term is omitted.

All predicates are exposed as registered margin atoms so they can be used
from the formula DSL. The `_rs` variants replace the linear gap margins by
their reciprocals (with 1/0 = +inf), which makes the robust value decrease
monotonically as the gap grows.
"""

from __future__ import annotations

import math

import numpy as np

from .params import RssParams
from .stl.semantics import VEHICLE, EvalContext, register_atom
from .trace import (VehicleDims, VehicleState, lon_lat_components,
                    longitudinal_lateral_velocity)

INF = math.inf


def d_rss_lon(v_r, v_f, p: RssParams):
    """Minimum safe gap behind a front vehicle moving at v_f, rear at v_r.

    Scalar or elementwise over arrays.
    """
    raw = (v_r * p.rho
           + p.a_max * p.rho ** 2 / 2.0
           + (v_r + p.a_max * p.rho) ** 2 / (2.0 * p.b_min)
           - v_f ** 2 / (2.0 * p.b_max))
    return np.maximum(0.0, raw)


def d_rss_lat(v1, v2, p: RssParams):
    """Minimum safe lateral gap; vehicle 1 is the one to the left.

    Lateral velocities are signed along the leftward axis, so a positive v2
    (right vehicle moving left) closes the gap.
    """
    raw = ((v1 - v2) * p.rho
           + p.a_max_lat * p.rho ** 2
           + ((v1 + p.rho * p.a_max_lat) ** 2 + (v2 - p.rho * p.a_max_lat) ** 2)
           / (2.0 * p.b_min_lat))
    return np.maximum(0.0, raw)


def _inv(x: float) -> float:
    return INF if x == 0 else 1.0 / x


def danger_ahead_margin(a: VehicleState, dims_a: VehicleDims,
                        b: VehicleState, dims_b: VehicleDims,
                        p: RssParams, convention: str = "cos_sin") -> float:
    """Margin of: b is ahead of a and closer than the safe longitudinal gap."""
    gap = b.s - a.s
    v_lon_a, _ = longitudinal_lateral_velocity(a, convention)
    v_lon_b, _ = longitudinal_lateral_velocity(b, convention)
    threshold = dims_b.length + d_rss_lon(v_lon_a, v_lon_b, p)
    return min(gap, threshold - gap)


def danger_left_margin(a: VehicleState, dims_a: VehicleDims,
                       b: VehicleState, dims_b: VehicleDims,
                       p: RssParams, convention: str = "cos_sin") -> float:
    """Margin of: b is to the left of a and closer than the safe lateral gap."""
    gap = b.d - a.d
    _, v_lat_a = longitudinal_lateral_velocity(a, convention)
    _, v_lat_b = longitudinal_lateral_velocity(b, convention)
    threshold = dims_b.width + d_rss_lat(v_lat_b, v_lat_a, p)
    return min(gap, threshold - gap)


def danger_ahead_rs_margin(a, dims_a, b, dims_b, p, convention="cos_sin") -> float:
    gap = b.s - a.s
    v_lon_a, _ = longitudinal_lateral_velocity(a, convention)
    v_lon_b, _ = longitudinal_lateral_velocity(b, convention)
    threshold = dims_b.length + d_rss_lon(v_lon_a, v_lon_b, p)
    inv_gap = _inv(gap)
    return min(inv_gap, inv_gap - _inv(threshold))


def danger_left_rs_margin(a, dims_a, b, dims_b, p, convention="cos_sin") -> float:
    gap = b.d - a.d
    _, v_lat_a = longitudinal_lateral_velocity(a, convention)
    _, v_lat_b = longitudinal_lateral_velocity(b, convention)
    threshold = dims_b.width + d_rss_lat(v_lat_b, v_lat_a, p)
    inv_gap = _inv(gap)
    return min(inv_gap, inv_gap - _inv(threshold))


def rss_violation_lon_margin(a, dims_a, b, dims_b, p, convention="cos_sin") -> float:
    return max(danger_ahead_margin(a, dims_a, b, dims_b, p, convention),
               danger_ahead_margin(b, dims_b, a, dims_a, p, convention))


def rss_violation_lat_margin(a, dims_a, b, dims_b, p, convention="cos_sin") -> float:
    return max(danger_left_margin(a, dims_a, b, dims_b, p, convention),
               danger_left_margin(b, dims_b, a, dims_a, p, convention))


def rss_violation_margin(a, dims_a, b, dims_b, p, convention="cos_sin") -> float:
    """Simultaneous violation of the longitudinal and lateral safe gaps."""
    return min(rss_violation_lon_margin(a, dims_a, b, dims_b, p, convention),
               rss_violation_lat_margin(a, dims_a, b, dims_b, p, convention))


def danger_ahead(a, dims_a, b, dims_b, p, convention="cos_sin") -> bool:
    return danger_ahead_margin(a, dims_a, b, dims_b, p, convention) >= 0


def danger_left(a, dims_a, b, dims_b, p, convention="cos_sin") -> bool:
    return danger_left_margin(a, dims_a, b, dims_b, p, convention) >= 0


def rss_violation_lon(a, dims_a, b, dims_b, p, convention="cos_sin") -> bool:
    return rss_violation_lon_margin(a, dims_a, b, dims_b, p, convention) >= 0


def rss_violation_lat(a, dims_a, b, dims_b, p, convention="cos_sin") -> bool:
    return rss_violation_lat_margin(a, dims_a, b, dims_b, p, convention) >= 0


def rss_violation(a, dims_a, b, dims_b, p, convention="cos_sin") -> bool:
    return rss_violation_margin(a, dims_a, b, dims_b, p, convention) >= 0


def danger_ahead_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                                convention="cos_sin"):
    sa, va, _, _, tha = states_a.T
    sb, vb, _, _, thb = states_b.T
    v_lon_a, _ = lon_lat_components(va, tha, convention)
    v_lon_b, _ = lon_lat_components(vb, thb, convention)
    gap = sb - sa
    thr = dims_b.length + d_rss_lon(v_lon_a, v_lon_b, p)
    return np.minimum(gap, thr - gap)


def danger_left_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                               convention="cos_sin"):
    _, va, _, da, tha = states_a.T
    _, vb, _, db, thb = states_b.T
    _, v_lat_a = lon_lat_components(va, tha, convention)
    _, v_lat_b = lon_lat_components(vb, thb, convention)
    gap = db - da
    thr = dims_b.width + d_rss_lat(v_lat_b, v_lat_a, p)
    return np.minimum(gap, thr - gap)


def _inv_arrays(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.where(x == 0, INF, np.divide(1.0, np.where(x == 0, 1.0, x)))


def danger_ahead_rs_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                                   convention="cos_sin"):
    sa, va, _, _, tha = states_a.T
    sb, vb, _, _, thb = states_b.T
    v_lon_a, _ = lon_lat_components(va, tha, convention)
    v_lon_b, _ = lon_lat_components(vb, thb, convention)
    inv_gap = _inv_arrays(sb - sa)
    thr = dims_b.length + d_rss_lon(v_lon_a, v_lon_b, p)
    return np.minimum(inv_gap, inv_gap - _inv_arrays(thr))


def danger_left_rs_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                                  convention="cos_sin"):
    _, va, _, da, tha = states_a.T
    _, vb, _, db, thb = states_b.T
    _, v_lat_a = lon_lat_components(va, tha, convention)
    _, v_lat_b = lon_lat_components(vb, thb, convention)
    inv_gap = _inv_arrays(db - da)
    thr = dims_b.width + d_rss_lat(v_lat_b, v_lat_a, p)
    return np.minimum(inv_gap, inv_gap - _inv_arrays(thr))


def lon_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                       convention="cos_sin"):
    return np.maximum(
        danger_ahead_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                                    convention),
        danger_ahead_margins_arrays(states_b, dims_b, states_a, dims_a, p,
                                    convention))


def lat_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                       convention="cos_sin"):
    return np.maximum(
        danger_left_margins_arrays(states_a, dims_a, states_b, dims_b, p,
                                   convention),
        danger_left_margins_arrays(states_b, dims_b, states_a, dims_a, p,
                                   convention))


def violation_margins_arrays(states_a: np.ndarray, dims_a: VehicleDims,
                             states_b: np.ndarray, dims_b: VehicleDims,
                             p: RssParams, convention: str = "cos_sin") -> np.ndarray:
    """Per-sample rssViolation margins for two aligned (n, 5) state arrays.

    Vectorized form of `rss_violation_margin` for the candidate-pair scan
    and the monitor's atom fast path; agrees with the scalar atom pointwise.
    """
    return np.minimum(
        lon_margins_arrays(states_a, dims_a, states_b, dims_b, p, convention),
        lat_margins_arrays(states_a, dims_a, states_b, dims_b, p, convention))


def _pair_atom(margin_fn):
    def evaluator(ctx: EvalContext, t: float, args):
        got_a = ctx.vehicle_at(args[0], t)
        got_b = ctx.vehicle_at(args[1], t)
        if got_a is None or got_b is None:
            return -INF
        (sa, da), (sb, db) = got_a, got_b
        return margin_fn(sa, da, sb, db, ctx.rss, ctx.angle_convention)

    return evaluator


def _pair_series(array_fn):
    def series(ctx: EvalContext, args):
        states_a, present_a, dims_a = ctx.track_arrays(args[0])
        states_b, present_b, dims_b = ctx.track_arrays(args[1])
        safe_a = np.where(present_a[:, None], states_a, 0.0)
        safe_b = np.where(present_b[:, None], states_b, 0.0)
        margins = array_fn(safe_a, dims_a, safe_b, dims_b, ctx.rss,
                           ctx.angle_convention)
        return np.where(present_a & present_b, margins, -INF)

    return series


register_atom("dangerAhead", (VEHICLE, VEHICLE), _pair_atom(danger_ahead_margin),
              strict=False, margin_series=_pair_series(danger_ahead_margins_arrays),
              doc="second vehicle ahead within the safe longitudinal gap")
register_atom("dangerLeft", (VEHICLE, VEHICLE), _pair_atom(danger_left_margin),
              strict=False, margin_series=_pair_series(danger_left_margins_arrays),
              doc="second vehicle to the left within the safe lateral gap")
register_atom("dangerAhead_rs", (VEHICLE, VEHICLE), _pair_atom(danger_ahead_rs_margin),
              strict=False, margin_series=_pair_series(danger_ahead_rs_margins_arrays),
              doc="reciprocal-margin variant of dangerAhead")
register_atom("dangerLeft_rs", (VEHICLE, VEHICLE), _pair_atom(danger_left_rs_margin),
              strict=False, margin_series=_pair_series(danger_left_rs_margins_arrays),
              doc="reciprocal-margin variant of dangerLeft")
register_atom("rssViolationLon", (VEHICLE, VEHICLE),
              _pair_atom(rss_violation_lon_margin), strict=False,
              margin_series=_pair_series(lon_margins_arrays),
              doc="longitudinal safe gap violated in either order")
register_atom("rssViolationLat", (VEHICLE, VEHICLE),
              _pair_atom(rss_violation_lat_margin), strict=False,
              margin_series=_pair_series(lat_margins_arrays),
              doc="lateral safe gap violated in either order")
register_atom("rssViolation", (VEHICLE, VEHICLE), _pair_atom(rss_violation_margin),
              strict=False, margin_series=_pair_series(violation_margins_arrays),
              doc="both safe gaps violated at once")
