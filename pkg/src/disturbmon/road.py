"""Lanelet-based road network in curvilinear coordinates.

Lanelets are axis-aligned boxes in (s, d) space; highways are treated as
locally straight, so occupancy reduces to an interval-overlap test. Lanes
are pred/succ chains of lanelets with a uniform attribute. The lateral axis
d increases leftward from the driver's perspective.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, DuplicateMembership, InvalidChain
from .trace import VehicleDims, VehicleState

ZONES = ("mainZone", "mergeZone", "departZone")
ATTRS = ("main", "merge", "departure")


@dataclass(frozen=True)
class Lanelet:
    id: str
    zone: str
    attr: str
    s_min: float
    s_max: float
    d_right: float
    d_left: float
    pred: str | None = None
    succ: str | None = None

    def __post_init__(self):
        if self.zone not in ZONES:
            raise DataError(f"lanelet {self.id!r}: unknown zone {self.zone!r}")
        if self.attr not in ATTRS:
            raise DataError(f"lanelet {self.id!r}: unknown attr {self.attr!r}")
        if not self.s_min < self.s_max:
            raise DataError(f"lanelet {self.id!r}: degenerate s extent")
        if not self.d_right < self.d_left:
            raise DataError(f"lanelet {self.id!r}: d_right must be < d_left")


@dataclass(frozen=True)
class Lane:
    id: str
    lanelets: tuple[str, ...]


@dataclass(frozen=True)
class RoadNetwork:
    lanelets: dict[str, Lanelet]
    lanes: dict[str, Lane]
    adjacency: dict[str, frozenset[str]]

    def lane_of(self, lanelet_id: str) -> str:
        for lane in self.lanes.values():
            if lanelet_id in lane.lanelets:
                return lane.id
        raise KeyError(lanelet_id)

    def adj_lanes(self, lane_id: str) -> frozenset[str]:
        return self.adjacency.get(lane_id, frozenset())

    def lanelets_in_zone(self, zone: str) -> list[Lanelet]:
        return [l for l in self.lanelets.values() if l.zone == zone]


def _footprint(state: VehicleState, dims: VehicleDims):
    # Tracked point is the front-left corner.
    return (state.s - dims.length, state.s), (state.d - dims.width, state.d)


def occ_margin(state: VehicleState, dims: VehicleDims, lanelet: Lanelet) -> float:
    """Signed overlap depth of the vehicle footprint with the lanelet box.

    Positive only when the overlap has nonzero area in both axes; exact
    boundary contact does not count as occupying.
    """
    (s_lo, s_hi), (d_lo, d_hi) = _footprint(state, dims)
    over_s = min(s_hi, lanelet.s_max) - max(s_lo, lanelet.s_min)
    over_d = min(d_hi, lanelet.d_left) - max(d_lo, lanelet.d_right)
    return min(over_s, over_d)


def occ(state: VehicleState, dims: VehicleDims, lanelet: Lanelet) -> bool:
    return occ_margin(state, dims, lanelet) > 0


def at_lane_margin(state: VehicleState, dims: VehicleDims, road: RoadNetwork,
                   lane_id: str) -> float:
    lane = road.lanes[lane_id]
    return max(occ_margin(state, dims, road.lanelets[lid]) for lid in lane.lanelets)


def at_lane(state: VehicleState, dims: VehicleDims, road: RoadNetwork,
            lane_id: str) -> bool:
    return at_lane_margin(state, dims, road, lane_id) > 0


def zone_margin(state: VehicleState, dims: VehicleDims, road: RoadNetwork,
                zone: str) -> float:
    lanelets = road.lanelets_in_zone(zone)
    if not lanelets:
        return float("-inf")
    return max(occ_margin(state, dims, l) for l in lanelets)


def on_main_road(state, dims, road) -> bool:
    return zone_margin(state, dims, road, "mainZone") > 0


def in_merge_zone(state, dims, road) -> bool:
    return zone_margin(state, dims, road, "mergeZone") > 0


def in_depart_zone(state, dims, road) -> bool:
    return zone_margin(state, dims, road, "departZone") > 0


def occ_margin_arrays(states: np.ndarray, dims: VehicleDims,
                      lanelet: Lanelet) -> np.ndarray:
    """Vectorized `occ_margin` over an (n, 5) state array."""
    s = states[:, 0]
    d = states[:, 3]
    over_s = np.minimum(s, lanelet.s_max) - np.maximum(s - dims.length, lanelet.s_min)
    over_d = np.minimum(d, lanelet.d_left) - np.maximum(d - dims.width, lanelet.d_right)
    return np.minimum(over_s, over_d)


def at_lane_margin_arrays(states: np.ndarray, dims: VehicleDims,
                          road: RoadNetwork, lane_id: str) -> np.ndarray:
    lane = road.lanes[lane_id]
    stacked = [occ_margin_arrays(states, dims, road.lanelets[lid])
               for lid in lane.lanelets]
    return np.max(np.stack(stacked), axis=0)


def zone_margin_arrays(states: np.ndarray, dims: VehicleDims,
                       road: RoadNetwork, zone: str) -> np.ndarray:
    lanelets = road.lanelets_in_zone(zone)
    if not lanelets:
        return np.full(states.shape[0], float("-inf"))
    stacked = [occ_margin_arrays(states, dims, l) for l in lanelets]
    return np.max(np.stack(stacked), axis=0)


def _s_overlap(a: Lanelet, b: Lanelet) -> bool:
    return min(a.s_max, b.s_max) - max(a.s_min, b.s_min) > 0


def _lanelets_adjacent(a: Lanelet, b: Lanelet) -> bool:
    # Shared boundary line without overlap: one's left bound is the
    # other's right bound, over an overlapping s range.
    if not _s_overlap(a, b):
        return False
    return a.d_left == b.d_right or b.d_left == a.d_right


def build_lanes(lanelets: list[Lanelet]) -> RoadNetwork:
    """Group lanelets into lanes along pred/succ chains and derive adjacency."""
    by_id = {}
    for l in lanelets:
        if l.id in by_id:
            raise DataError(f"duplicate lanelet id {l.id!r}")
        by_id[l.id] = l

    for l in by_id.values():
        for ref, kind in ((l.pred, "pred"), (l.succ, "succ")):
            if ref is None:
                continue
            other = by_id.get(ref)
            if other is None:
                raise InvalidChain(f"lanelet {l.id!r}: {kind} {ref!r} not found")
            if other.attr != l.attr:
                raise InvalidChain(
                    f"lanelet {l.id!r} ({l.attr}) chained to {ref!r} ({other.attr})")
        if l.succ is not None and by_id[l.succ].pred != l.id:
            raise InvalidChain(f"lanelet {l.id!r}: succ {l.succ!r} does not point back")
        if l.pred is not None and by_id[l.pred].succ != l.id:
            raise InvalidChain(f"lanelet {l.id!r}: pred {l.pred!r} does not point back")

    assigned: dict[str, str] = {}
    lanes: dict[str, Lane] = {}
    heads = sorted(lid for lid, l in by_id.items() if l.pred is None)
    for head in heads:
        chain = []
        cur: str | None = head
        while cur is not None:
            if cur in chain:
                raise InvalidChain(f"cycle through lanelet {cur!r}")
            if cur in assigned:
                raise DuplicateMembership(
                    f"lanelet {cur!r} reachable from two chain heads")
            chain.append(cur)
            cur = by_id[cur].succ
        lane_id = f"lane:{head}"
        lanes[lane_id] = Lane(lane_id, tuple(chain))
        for lid in chain:
            assigned[lid] = lane_id
    unassigned = set(by_id) - set(assigned)
    if unassigned:
        # Only cycles have no head lanelet.
        raise InvalidChain(f"lanelets in a pred/succ cycle: {sorted(unassigned)}")

    adjacency: dict[str, set[str]] = {lid: set() for lid in lanes}
    ids = sorted(by_id)
    for i, a_id in enumerate(ids):
        for b_id in ids[i + 1:]:
            if _lanelets_adjacent(by_id[a_id], by_id[b_id]):
                la, lb = assigned[a_id], assigned[b_id]
                if la != lb:
                    adjacency[la].add(lb)
                    adjacency[lb].add(la)

    return RoadNetwork(
        lanelets=by_id,
        lanes=lanes,
        adjacency={k: frozenset(v) for k, v in adjacency.items()},
    )


MAP_KEYS = ("id", "zone", "attr", "s_min", "s_max", "d_right", "d_left", "pred", "succ")


def load_map(path: str | Path) -> RoadNetwork:
    """Load a road network from a JSON array of lanelet objects."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise DataError("map file must contain a JSON array of lanelet objects")
    lanelets = []
    for i, obj in enumerate(raw):
        missing = [k for k in MAP_KEYS if k not in obj]
        if missing:
            raise DataError(f"map entry {i}: missing keys {missing}")
        lanelets.append(Lanelet(
            id=str(obj["id"]), zone=obj["zone"], attr=obj["attr"],
            s_min=float(obj["s_min"]), s_max=float(obj["s_max"]),
            d_right=float(obj["d_right"]), d_left=float(obj["d_left"]),
            pred=None if obj["pred"] is None else str(obj["pred"]),
            succ=None if obj["succ"] is None else str(obj["succ"]),
        ))
    return build_lanes(lanelets)


def save_map(road: RoadNetwork, path: str | Path) -> None:
    rows = []
    for lid in sorted(road.lanelets):
        l = road.lanelets[lid]
        rows.append({
            "id": l.id, "zone": l.zone, "attr": l.attr,
            "s_min": l.s_min, "s_max": l.s_max,
            "d_right": l.d_right, "d_left": l.d_left,
            "pred": l.pred, "succ": l.succ,
        })
    Path(path).write_text(json.dumps(rows, indent=2) + "\n")
