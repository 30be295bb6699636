"""Highway traffic-disturbance scenario formulas.

Every scenario follows one template: a durable safe lead-in, a road-sector
constraint, and a disturbance part combining an initial condition with the
behaviours of the subject vehicle (SV) and the principal other vehicle
(POV). Indices 1-8 live on the main road; 9-16 and 17-24 repeat the same
disturbances in merge and departure zones.

Three catalog variants exist. The base set reads the standard's wording
strictly. The `extA` set accepts the POV's own acceleration (deceleration)
as an alternative to a speed difference. The `ext` set additionally relaxes
the ahead-of relation to compare vehicle fronts and allows cut-ins that end
behind the SV.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import ArityMismatch
from .stl.ast import FALSE, TRUE, Atom, F, Formula, G, Not, U, conj
from .stl.semantics import LANE, VEHICLE, EvalContext, register_atom, register_macro
from .road import at_lane_margin, zone_margin
from . import rss as _rss  # noqa: F401  (registers the danger atoms)

INF = math.inf


class SpecSet(enum.Enum):
    BASE = "ISO34502-STL"
    EXT_A = "ISO34502-STL-extA"
    EXT = "ISO34502-STL-ext"

    @classmethod
    def from_name(cls, name: str) -> "SpecSet":
        for member in cls:
            if member.value == name or member.name.lower() == name.lower():
                return member
        raise ValueError(f"unknown spec set {name!r}; expected one of "
                         f"{[m.value for m in cls]}")


MAIN_INDICES = tuple(range(1, 9))
MERGE_INDICES = tuple(range(9, 17))
DEPART_INDICES = tuple(range(17, 25))
ALL_INDICES = MAIN_INDICES + MERGE_INDICES + DEPART_INDICES
TWO_VEHICLE_INDICES = tuple(i for i in ALL_INDICES if (i - 1) % 8 + 1 != 2)


# -- instantaneous atoms ----------------------------------------------------

def _vehicle_lane_atom(ctx: EvalContext, t: float, args):
    got = ctx.vehicle_at(args[0], t)
    if got is None:
        return -INF
    state, dims = got
    return at_lane_margin(state, dims, ctx.road, args[1])


def _vehicle_lane_series(ctx: EvalContext, args):
    from .road import at_lane_margin_arrays

    states, present, dims = ctx.track_arrays(args[0])
    safe = np.where(present[:, None], states, 0.0)
    return np.where(present, at_lane_margin_arrays(safe, dims, ctx.road, args[1]),
                    -INF)


def _zone_atom(zone: str):
    def evaluator(ctx: EvalContext, t: float, args):
        got = ctx.vehicle_at(args[0], t)
        if got is None:
            return -INF
        state, dims = got
        return zone_margin(state, dims, ctx.road, zone)

    return evaluator


def _zone_series(zone: str):
    from .road import zone_margin_arrays

    def series(ctx: EvalContext, args):
        states, present, dims = ctx.track_arrays(args[0])
        safe = np.where(present[:, None], states, 0.0)
        return np.where(present, zone_margin_arrays(safe, dims, ctx.road, zone),
                        -INF)

    return series


def _ahead_of_atom(ctx, t, args):
    got_a, got_b = ctx.vehicle_at(args[0], t), ctx.vehicle_at(args[1], t)
    if got_a is None or got_b is None:
        return -INF
    (sa, _), (sb, db) = got_a, got_b
    return (sb.s - db.length) - sa.s


def _ahead_of_ext_atom(ctx, t, args):
    got_a, got_b = ctx.vehicle_at(args[0], t), ctx.vehicle_at(args[1], t)
    if got_a is None or got_b is None:
        return -INF
    return got_b[0].s - got_a[0].s


def _faster_than_atom(ctx, t, args):
    got_a, got_b = ctx.vehicle_at(args[0], t), ctx.vehicle_at(args[1], t)
    if got_a is None or got_b is None:
        return -INF
    return got_b[0].v - got_a[0].v


def _accelerates_atom(ctx, t, args):
    got = ctx.vehicle_at(args[0], t)
    return -INF if got is None else got[0].a


def _decelerates_atom(ctx, t, args):
    got = ctx.vehicle_at(args[0], t)
    return -INF if got is None else -got[0].a


def _pair_gap_series(kind: str):
    def series(ctx: EvalContext, args):
        states_a, present_a, _ = ctx.track_arrays(args[0])
        states_b, present_b, dims_b = ctx.track_arrays(args[1])
        if kind == "aheadOf":
            out = (states_b[:, 0] - dims_b.length) - states_a[:, 0]
        elif kind == "aheadOf_ext":
            out = states_b[:, 0] - states_a[:, 0]
        else:  # fasterThan
            out = states_b[:, 1] - states_a[:, 1]
        return np.where(present_a & present_b, out, -INF)

    return series


def _accel_series(sign: float):
    def series(ctx: EvalContext, args):
        states, present, _ = ctx.track_arrays(args[0])
        return np.where(present, sign * states[:, 2], -INF)

    return series


register_atom("atLane", (VEHICLE, LANE), _vehicle_lane_atom,
              margin_series=_vehicle_lane_series,
              doc="vehicle footprint overlaps some lanelet of the lane")
register_atom("onMainRoad", (VEHICLE,), _zone_atom("mainZone"),
              margin_series=_zone_series("mainZone"),
              doc="vehicle overlaps a main-zone lanelet")
register_atom("inMergeZone", (VEHICLE,), _zone_atom("mergeZone"),
              margin_series=_zone_series("mergeZone"),
              doc="vehicle overlaps a merge-zone lanelet")
register_atom("inDepartZone", (VEHICLE,), _zone_atom("departZone"),
              margin_series=_zone_series("departZone"),
              doc="vehicle overlaps a departure-zone lanelet")
register_atom("aheadOf", (VEHICLE, VEHICLE), _ahead_of_atom, strict=False,
              margin_series=_pair_gap_series("aheadOf"),
              doc="second vehicle entirely ahead of the first (front <= rear)")
register_atom("aheadOf_ext", (VEHICLE, VEHICLE), _ahead_of_ext_atom,
              margin_series=_pair_gap_series("aheadOf_ext"),
              doc="second vehicle's front strictly ahead of the first's")
register_atom("fasterThan", (VEHICLE, VEHICLE), _faster_than_atom,
              margin_series=_pair_gap_series("fasterThan"),
              doc="second vehicle strictly faster than the first")
register_atom("accelerates", (VEHICLE,), _accelerates_atom,
              margin_series=_accel_series(1.0),
              doc="vehicle acceleration strictly positive")
register_atom("decelerates", (VEHICLE,), _decelerates_atom,
              margin_series=_accel_series(-1.0),
              doc="vehicle acceleration strictly negative")


# -- formula constructors (macro leaves keep the catalog auditable) ----------

def ahead_of(a, b) -> Formula:
    return Atom("aheadOf", (a, b))


def ahead_of_ext(a, b) -> Formula:
    return Atom("aheadOf_ext", (a, b))


def faster_than(a, b) -> Formula:
    return Atom("fasterThan", (a, b))


def at_lane(a, lane) -> Formula:
    return Atom("atLane", (a, lane))


def lane_keep(a, lane) -> Formula:
    return Atom("laneKeep", (a, lane))


def leaving_lane(a, lane) -> Formula:
    return Atom("leavingLane", (a, lane))


def entering_lane(a, lane) -> Formula:
    return Atom("enteringLane", (a, lane))


def same_lane(a, b, lane) -> Formula:
    return Atom("sameLane", (a, b, lane))


def same_lane3(a, b, c, lane) -> Formula:
    return Atom("sameLane3", (a, b, c, lane))


def in_adj_lanes(a, b, lane) -> Formula:
    return Atom("inAdjLanes", (a, b, lane))


def rss_violation(a, b) -> Formula:
    return Atom("rssViolation", (a, b))


def inst_safe(a, b) -> Formula:
    return Atom("instSafe", (a, b))


def danger(a, b) -> Formula:
    return Atom("danger", (a, b))


def init_safe(a, b) -> Formula:
    return Atom("initSafe", (a, b))


def cut_in(pov, sv, lane, variant: SpecSet = SpecSet.BASE) -> Formula:
    return Atom("cutIn_ext" if variant is SpecSet.EXT else "cutIn", (pov, sv, lane))


def cut_out(pov, sv, lane) -> Formula:
    return Atom("cutOut", (pov, sv, lane))


def accel(pov, sv, lane, variant: SpecSet = SpecSet.BASE) -> Formula:
    name = "accel" if variant is SpecSet.BASE else "accel_ext"
    return Atom(name, (pov, sv, lane))


def decel(pov, sv, lane, variant: SpecSet = SpecSet.BASE) -> Formula:
    name = "decel" if variant is SpecSet.BASE else "decel_ext"
    return Atom(name, (pov, sv, lane))


def danger_arises(sv, pov) -> Formula:
    return Atom("dangerArises", (sv, pov))


# -- macro expansions ---------------------------------------------------------

def _expand_lane_keep(ctx, args):
    return at_lane(*args)


def _expand_leaving_lane(ctx, args):
    a, lane = args
    return at_lane(a, lane) & F(Not(at_lane(a, lane)))


def _expand_entering_lane(ctx, args):
    a, lane = args
    return Not(at_lane(a, lane)) & F(at_lane(a, lane))


def _expand_same_lane(ctx, args):
    a, b, lane = args
    return at_lane(a, lane) & at_lane(b, lane)


def _expand_same_lane3(ctx, args):
    a, b, c, lane = args
    return same_lane(a, b, lane) & same_lane(b, c, lane)


def _expand_in_adj_lanes(ctx, args):
    a, b, lane = args
    lane_id = ctx.resolve_lane(lane)
    disj: Formula = FALSE  # empty disjunction when the lane has no neighbours
    for other in sorted(ctx.road.adj_lanes(lane_id)):
        disj = at_lane(b, other) if disj is FALSE else disj | at_lane(b, other)
    return at_lane(a, lane) & disj


def _expand_main_road(ctx, args):
    a, b = args
    return Atom("onMainRoad", (a,)) & Atom("onMainRoad", (b,))


def _expand_merge_zone(ctx, args):
    a, b = args
    return Atom("inMergeZone", (a,)) | Atom("inMergeZone", (b,))


def _expand_depart_zone(ctx, args):
    a, b = args
    return Atom("inDepartZone", (a,)) | Atom("inDepartZone", (b,))


def _expand_inst_safe(ctx, args):
    return Not(rss_violation(*args))


def _expand_danger(ctx, args):
    return G(rss_violation(*args), 0.0, ctx.scenario.min_danger)


def _expand_init_safe(ctx, args):
    return G(inst_safe(*args), 0.0, ctx.scenario.min_safe)


def _expand_cut_in(ctx, args):
    pov, sv, lane = args
    md = ctx.scenario.min_danger
    closing = F(same_lane(sv, pov, lane) & ahead_of(sv, pov), 0.0, md)
    return Not(same_lane(pov, sv, lane)) & F(danger(sv, pov) & closing)


def _expand_cut_in_ext(ctx, args):
    pov, sv, lane = args
    md = ctx.scenario.min_danger
    closing = F(same_lane(sv, pov, lane), 0.0, md)
    return Not(same_lane(pov, sv, lane)) & F(danger(sv, pov) & closing)


def _expand_cut_out(ctx, args):
    pov, sv, lane = args
    md = ctx.scenario.min_danger
    completing = F(Not(at_lane(pov, lane)), 0.0, md)
    return same_lane(pov, sv, lane) & F(danger(pov, sv) & completing)


def _expand_accel(ctx, args):
    pov, sv, lane = args
    return faster_than(sv, pov) & lane_keep(pov, lane)


def _expand_accel_ext(ctx, args):
    pov, sv, lane = args
    return (faster_than(sv, pov) | Atom("accelerates", (pov,))) & lane_keep(pov, lane)


def _expand_decel(ctx, args):
    pov, sv, lane = args
    return faster_than(pov, sv) & lane_keep(pov, lane)


def _expand_decel_ext(ctx, args):
    pov, sv, lane = args
    return (faster_than(pov, sv) | Atom("decelerates", (pov,))) & lane_keep(pov, lane)


def _expand_danger_arises(ctx, args):
    sv, pov = args
    return F(init_safe(sv, pov) & F(danger(sv, pov)))


register_macro("laneKeep", (VEHICLE, LANE), _expand_lane_keep,
               doc="vehicle stays associated with the lane (alias of atLane)")
register_macro("leavingLane", (VEHICLE, LANE), _expand_leaving_lane,
               doc="in the lane now and eventually not in it")
register_macro("enteringLane", (VEHICLE, LANE), _expand_entering_lane,
               doc="not in the lane now and eventually in it")
register_macro("sameLane", (VEHICLE, VEHICLE, LANE), _expand_same_lane,
               doc="both vehicles in the given lane")
register_macro("sameLane3", (VEHICLE, VEHICLE, VEHICLE, LANE), _expand_same_lane3,
               doc="three vehicles in the given lane")
register_macro("inAdjLanes", (VEHICLE, VEHICLE, LANE), _expand_in_adj_lanes,
               doc="first vehicle in the lane, second in an adjacent lane")
register_macro("mainRoad", (VEHICLE, VEHICLE), _expand_main_road,
               doc="both vehicles on the main road")
register_macro("mergeZone", (VEHICLE, VEHICLE), _expand_merge_zone,
               doc="either vehicle inside a merge zone")
register_macro("departZone", (VEHICLE, VEHICLE), _expand_depart_zone,
               doc="either vehicle inside a departure zone")
register_macro("instSafe", (VEHICLE, VEHICLE), _expand_inst_safe,
               doc="the safe gaps are not simultaneously violated")
register_macro("danger", (VEHICLE, VEHICLE), _expand_danger,
               doc="safe-gap violation lasting at least min_danger")
register_macro("initSafe", (VEHICLE, VEHICLE), _expand_init_safe,
               doc="instantaneous safety lasting at least min_safe")
register_macro("cutIn", (VEHICLE, VEHICLE, LANE), _expand_cut_in,
               doc="POV changes into SV's lane, ending ahead, with danger")
register_macro("cutIn_ext", (VEHICLE, VEHICLE, LANE), _expand_cut_in_ext,
               doc="cutIn without the ahead-of requirement")
register_macro("cutOut", (VEHICLE, VEHICLE, LANE), _expand_cut_out,
               doc="POV leaves the shared lane around the time of danger")
register_macro("accel", (VEHICLE, VEHICLE, LANE), _expand_accel,
               doc="POV faster than SV while keeping its lane")
register_macro("accel_ext", (VEHICLE, VEHICLE, LANE), _expand_accel_ext,
               doc="accel, or the POV is actively accelerating")
register_macro("decel", (VEHICLE, VEHICLE, LANE), _expand_decel,
               doc="POV slower than SV while keeping its lane")
register_macro("decel_ext", (VEHICLE, VEHICLE, LANE), _expand_decel_ext,
               doc="decel, or the POV is actively decelerating")
register_macro("dangerArises", (VEHICLE, VEHICLE), _expand_danger_arises,
               doc="eventually a durable safe phase followed by danger")


# -- scenario assembly --------------------------------------------------------

def _row_formulas(row: int, variant: SpecSet, sv: str, povs: tuple[str, ...],
                  lane: str) -> tuple[Formula, Formula, Formula]:
    """(initialCondition, behaviourSV, behaviourPOV) for main-road row 1-8."""
    ao = ahead_of_ext if variant is SpecSet.EXT else ahead_of
    pov = povs[0]
    if row == 1:
        return (TRUE,
                U(lane_keep(sv, lane), danger(sv, pov)),
                cut_in(pov, sv, lane, variant))
    if row == 2:
        pov1, pov2 = povs
        ic = conj(same_lane3(sv, pov1, pov2, lane), ao(sv, pov1), ao(pov1, pov2))
        bsv = U(lane_keep(sv, lane), Not(same_lane(sv, pov1, lane)))
        bpov = leaving_lane(pov1, lane) & U(
            lane_keep(pov2, lane),
            Not(same_lane(pov2, pov1, lane)) & danger(sv, pov2))
        return ic, bsv, bpov
    if row == 3:
        ic = ao(pov, sv) & (same_lane(sv, pov, lane) | in_adj_lanes(sv, pov, lane))
        return (ic,
                U(lane_keep(sv, lane), danger(sv, pov)),
                U(accel(pov, sv, lane, variant), danger(sv, pov)))
    if row == 4:
        ic = ao(sv, pov) & (same_lane(sv, pov, lane) | in_adj_lanes(sv, pov, lane))
        return (ic,
                U(lane_keep(sv, lane), danger(sv, pov)),
                U(decel(pov, sv, lane, variant), danger(sv, pov)))
    if row == 5:
        return TRUE, leaving_lane(sv, lane), cut_in(pov, sv, lane, variant)
    if row == 6:
        return TRUE, leaving_lane(sv, lane), cut_out(pov, sv, lane)
    if row == 7:
        return (ao(pov, sv),
                entering_lane(sv, lane),
                U(accel(pov, sv, lane, variant), danger(sv, pov)))
    if row == 8:
        return (same_lane(sv, pov, lane) & ao(sv, pov),
                leaving_lane(sv, lane),
                U(decel(pov, sv, lane, variant), danger(sv, pov)))
    raise ValueError(f"row {row} out of range")


def road_sector(i: int, sv: str, pov: str) -> Formula:
    if i in MAIN_INDICES:
        return Atom("mainRoad", (sv, pov))
    if i in MERGE_INDICES:
        return Atom("mergeZone", (sv, pov))
    if i in DEPART_INDICES:
        return Atom("departZone", (sv, pov))
    raise ValueError(f"scenario index {i} out of range")


def scenario(i: int, variant: SpecSet = SpecSet.BASE, sv: str = "SV",
             povs: tuple[str, ...] = ("POV",), lane: str = "L") -> Formula:
    """The full formula for scenario index i under the given catalog variant."""
    if i not in ALL_INDICES:
        raise ValueError(f"scenario index {i} out of range")
    row = (i - 1) % 8 + 1
    needed = 2 if row == 2 else 1
    if len(povs) != needed:
        raise ArityMismatch(f"scenario {i} needs {needed} POV name(s), got {len(povs)}")
    # Danger is with the trailing POV in the three-vehicle row; the safe
    # lead-in and road sector are stated for that pair.
    danger_pov = povs[1] if row == 2 else povs[0]
    ic, bsv, bpov = _row_formulas(row, variant, sv, povs, lane)
    disturb = conj(ic, bsv, bpov)
    return conj(init_safe(sv, danger_pov), road_sector(i, sv, danger_pov), disturb)


def catalog(variant: SpecSet = SpecSet.BASE) -> dict[int, Formula]:
    out = {}
    for i in ALL_INDICES:
        row = (i - 1) % 8 + 1
        povs = ("POV1", "POV2") if row == 2 else ("POV",)
        out[i] = scenario(i, variant, povs=povs)
    return out
