"""Dense-time Boolean and robust monitors over finite traces.

The Boolean monitor computes, bottom-up, the exact set of times at which
each subformula holds, represented as an interval set. On step-hold traces
this is exact dense-time semantics. Quantifier windows are intersected with
the remaining trace domain: G over an empty effective window is true, the
existential in F and U over an empty window is false.

The robust monitor is an independent pointwise recursion (atoms map to
their margins, negation to sign flip, conjunction to min, disjunction to
max, G/F to inf/sup over the window, U to the standard sup-min form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from ..errors import UnboundName
from ..params import RssParams, ScenarioParams
from ..road import RoadNetwork
from ..trace import ANGLE_COS_SIN, STEP, Trace
from .ast import (And, Atom, Const, Eventually, Formula, Globally, Not, Or,
                  Until, preorder)
from .intervals import IntervalSet, Ival

INF = math.inf

VEHICLE = "vehicle"
LANE = "lane"
NUMBER = "number"


@dataclass(frozen=True)
class AtomSpec:
    """A named predicate: either an instantaneous margin or a macro expansion.

    `margin_series`, when given, computes the margins at every sample time
    in one vectorized call; the monitor uses it on step-hold traces.
    """

    name: str
    kinds: tuple[str, ...]
    strict: bool = True
    margin: Callable | None = None
    expand: Callable | None = None
    margin_series: Callable | None = None
    doc: str = ""

    @property
    def is_macro(self) -> bool:
        return self.expand is not None


_REGISTRY: dict[str, AtomSpec] = {}


def register_atom(name: str, kinds, margin, strict: bool = True, doc: str = "",
                  margin_series: Callable | None = None) -> None:
    _REGISTRY[name] = AtomSpec(name, tuple(kinds), strict, margin, None,
                               margin_series, doc)


def register_macro(name: str, kinds, expand, doc: str = "") -> None:
    _REGISTRY[name] = AtomSpec(name, tuple(kinds), True, None, expand, None, doc)


def atom_specs() -> list[AtomSpec]:
    return [_REGISTRY[k] for k in sorted(_REGISTRY)]


def lookup_atom(name: str) -> AtomSpec:
    spec = _REGISTRY.get(name)
    if spec is None:
        known = ", ".join(sorted(_REGISTRY))
        raise UnboundName(f"unknown atom {name!r}; registered atoms: {known}")
    return spec


@dataclass
class EvalContext:
    """Everything a formula needs to be evaluated over a trace."""

    trace: Trace
    road: RoadNetwork | None = None
    bindings: dict[str, str] = field(default_factory=dict)
    rss: RssParams = field(default_factory=RssParams)
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    mode: str = STEP
    angle_convention: str = ANGLE_COS_SIN

    def resolve_vehicle(self, name) -> str:
        vid = self.bindings.get(name, name)
        if not isinstance(vid, str) or vid not in self.trace.vehicles:
            raise UnboundName(f"no vehicle bound to {name!r}")
        return vid

    def track_arrays(self, vid: str):
        """(states, present) arrays of a resolved vehicle on the sample grid."""
        track = self.trace.vehicles[vid]
        return track.states, track.present, track.dims

    def resolve_lane(self, name) -> str:
        if self.road is None:
            raise UnboundName(f"lane {name!r} referenced but no road network given")
        lane = self.bindings.get(name, name)
        if not isinstance(lane, str) or lane not in self.road.lanes:
            raise UnboundName(f"no lane bound to {name!r}")
        return lane

    def vehicle_at(self, name, t: float):
        """(state, dims) of the vehicle bound to `name`, or None when absent."""
        vid = self.resolve_vehicle(name)
        if not self.trace.present_at(vid, t, self.mode):
            return None
        return self.trace.state_at(vid, t, self.mode), self.trace.vehicles[vid].dims


def _resolve_args(ctx: EvalContext, spec: AtomSpec, args: tuple) -> tuple:
    if len(args) != len(spec.kinds):
        raise UnboundName(
            f"atom {spec.name!r} expects {len(spec.kinds)} arguments, got {len(args)}")
    out = []
    for kind, arg in zip(spec.kinds, args):
        if kind == VEHICLE:
            out.append(ctx.resolve_vehicle(arg))
        elif kind == LANE:
            out.append(ctx.resolve_lane(arg))
        else:
            out.append(float(arg))
    return tuple(out)


def _midpoints(points: list[float]) -> list[float]:
    out = []
    for a, b in zip(points, points[1:]):
        m = (a + b) / 2.0
        if a < m < b:
            out.append(m)
    return out


class Monitor:
    """Caching evaluator for one context; formulas share subformula results."""

    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        self._sat_cache: dict[Formula, IntervalSet] = {}
        self._bp_cache: dict[Formula, tuple[float, ...]] = {}
        self._rob_cache: dict[tuple[Formula, float], float] = {}
        self._expand_cache: dict[tuple[str, tuple], Formula] = {}
        self._atom_margin_cache: dict[tuple[str, tuple], list[float]] = {}

    @property
    def domain(self) -> tuple[float, float]:
        return self.ctx.trace.domain

    # -- shared helpers ----------------------------------------------------

    def _expansion(self, node: Atom, spec: AtomSpec) -> Formula:
        key = (node.name, node.args)
        got = self._expand_cache.get(key)
        if got is None:
            got = spec.expand(self.ctx, node.args)
            self._expand_cache[key] = got
        return got

    def _atom_margin(self, node: Atom, spec: AtomSpec, t: float) -> float:
        resolved = _resolve_args(self.ctx, spec, node.args)
        return spec.margin(self.ctx, t, resolved)

    def _window(self, t: float, interval) -> tuple[float, float] | None:
        """Effective quantifier window at t, clipped to the trace end."""
        t0, t1 = self.domain
        lo = t + interval.lo
        hi = min(t + interval.hi, t1)
        if lo > t1:
            return None
        return lo, hi

    # -- Boolean satisfaction sets ----------------------------------------

    def sat(self, node: Formula) -> IntervalSet:
        got = self._sat_cache.get(node)
        if got is None:
            got = self._sat_compute(node)
            self._sat_cache[node] = got
        return got

    def holds(self, node: Formula, t: float) -> bool:
        t0, t1 = self.domain
        if not (t0 <= t <= t1):
            raise ValueError(f"t={t} outside trace domain [{t0}, {t1}]")
        return self.sat(node).contains(t)

    def _sat_compute(self, node: Formula) -> IntervalSet:
        t0, t1 = self.domain
        if isinstance(node, Const):
            return IntervalSet.closed(t0, t1) if node.value else IntervalSet.empty()
        if isinstance(node, Atom):
            spec = lookup_atom(node.name)
            if spec.is_macro:
                return self.sat(self._expansion(node, spec))
            return self._atom_sat(node, spec)
        if isinstance(node, Not):
            return self.sat(node.child).complement(t0, t1)
        if isinstance(node, And):
            return self.sat(node.left).intersect(self.sat(node.right))
        if isinstance(node, Or):
            return self.sat(node.left).union(self.sat(node.right))
        if isinstance(node, Globally):
            child = self.sat(node.child)
            return self._quantifier_sat(node.interval, lambda lo, hi: child.covers_closed(lo, hi),
                                        empty_value=True, endpoint_sets=(child,))
        if isinstance(node, Eventually):
            child = self.sat(node.child)
            return self._quantifier_sat(node.interval, lambda lo, hi: child.intersects_closed(lo, hi),
                                        empty_value=False, endpoint_sets=(child,))
        if isinstance(node, Until):
            sat1 = self.sat(node.left)
            sat2 = self.sat(node.right)
            return self._quantifier_sat(node.interval,
                                        lambda lo, hi: _until_at(sat1, sat2, lo, hi),
                                        empty_value=False, endpoint_sets=(sat1, sat2))
        raise TypeError(f"not a formula: {node!r}")

    def _atom_sat(self, node: Atom, spec: AtomSpec) -> IntervalSet:
        times = self.ctx.trace.times
        if spec.margin_series is not None and self.ctx.mode == STEP:
            resolved = _resolve_args(self.ctx, spec, node.args)
            margins = spec.margin_series(self.ctx, resolved)
        else:
            margins = [self._atom_margin(node, spec, float(t)) for t in times]
        true_at = [(m > 0) or (not spec.strict and m == 0) for m in margins]
        pieces = []
        if self.ctx.mode == STEP:
            for i in range(len(times) - 1):
                if true_at[i]:
                    pieces.append(Ival(float(times[i]), float(times[i + 1]), True, False))
            if true_at[-1]:
                pieces.append(Ival(float(times[-1]), float(times[-1]), True, True))
        else:
            # Linear interpolation: atom margins may cross inside a segment;
            # truth within a segment is approximated by its midpoint value.
            mids = _midpoints([float(t) for t in times])
            for i, m in enumerate(mids):
                mv = self._atom_margin(node, spec, m)
                if (mv > 0) or (not spec.strict and mv == 0):
                    pieces.append(Ival(float(times[i]), float(times[i + 1]), False, False))
            for i, t in enumerate(times):
                if true_at[i]:
                    pieces.append(Ival(float(t), float(t), True, True))
        return IntervalSet(pieces)

    def _quantifier_sat(self, interval, check, empty_value: bool,
                        endpoint_sets) -> IntervalSet:
        """Build the satisfaction set of a windowed quantifier by sampling it
        at every time where its value can change, plus one interior point per
        gap."""
        t0, t1 = self.domain
        edges = {t0, t1}
        for s in endpoint_sets:
            edges.update(s.endpoints())
        cands = {t0, t1}
        a, b = interval.lo, interval.hi
        for e in edges:
            cands.add(e - a)
            if not math.isinf(b):
                cands.add(e - b)
        points = sorted(c for c in cands if t0 <= c <= t1)
        if not points or points[0] != t0:
            points.insert(0, t0)
        if points[-1] != t1:
            points.append(t1)

        def value(t: float) -> bool:
            win = self._window(t, interval)
            if win is None:
                return empty_value
            return check(*win)

        pieces = []
        for p in points:
            if value(p):
                pieces.append(Ival(p, p, True, True))
        for p, q in zip(points, points[1:]):
            m = (p + q) / 2.0
            if p < m < q and value(m):
                pieces.append(Ival(p, q, False, False))
        return IntervalSet(pieces)

    # -- robust semantics ---------------------------------------------------

    def robust(self, node: Formula, t: float) -> float:
        key = (node, t)
        got = self._rob_cache.get(key)
        if got is None:
            got = self._robust_compute(node, t)
            self._rob_cache[key] = got
        return got

    def _robust_compute(self, node: Formula, t: float) -> float:
        if isinstance(node, Const):
            return INF if node.value else -INF
        if isinstance(node, Atom):
            spec = lookup_atom(node.name)
            if spec.is_macro:
                return self.robust(self._expansion(node, spec), t)
            return self._atom_margin(node, spec, t)
        if isinstance(node, Not):
            return -self.robust(node.child, t)
        if isinstance(node, And):
            return min(self.robust(node.left, t), self.robust(node.right, t))
        if isinstance(node, Or):
            return max(self.robust(node.left, t), self.robust(node.right, t))
        if isinstance(node, Globally):
            win = self._window(t, node.interval)
            if win is None:
                return INF
            return min(self.robust(node.child, u) for u in self._win_points(node.child, *win))
        if isinstance(node, Eventually):
            win = self._window(t, node.interval)
            if win is None:
                return -INF
            return max(self.robust(node.child, u) for u in self._win_points(node.child, *win))
        if isinstance(node, Until):
            win = self._window(t, node.interval)
            if win is None:
                return -INF
            lo, hi = win
            cands = sorted(set(self._win_points(node.left, lo, hi))
                           | set(self._win_points(node.right, lo, hi)))
            best = -INF
            prefix = INF  # inf of left robustness over [lo, u)
            for u in cands:
                best = max(best, min(self.robust(node.right, u), prefix))
                prefix = min(prefix, self.robust(node.left, u))
            return best
        raise TypeError(f"not a formula: {node!r}")

    def _breakpoints(self, node: Formula) -> tuple[float, ...]:
        got = self._bp_cache.get(node)
        if got is not None:
            return got
        t0, t1 = self.domain
        if isinstance(node, Const):
            pts: set[float] = set()
        elif isinstance(node, Atom):
            spec = lookup_atom(node.name)
            if spec.is_macro:
                pts = set(self._breakpoints(self._expansion(node, spec)))
            else:
                pts = {float(x) for x in self.ctx.trace.times}
        elif isinstance(node, (Not, Globally, Eventually)):
            pts = set(self._breakpoints(node.child))
        else:
            pts = set(self._breakpoints(node.left)) | set(self._breakpoints(node.right))
        if isinstance(node, (Globally, Eventually, Until)):
            a, b = node.interval.lo, node.interval.hi
            shifted = set()
            for e in pts | {t1}:
                shifted.add(e - a)
                if not math.isinf(b):
                    shifted.add(e - b)
            pts = {p for p in shifted if t0 <= p <= t1}
        else:
            pts = {p for p in pts if t0 <= p <= t1}
        out = tuple(sorted(pts))
        self._bp_cache[node] = out
        return out

    def _win_points(self, child: Formula, lo: float, hi: float) -> list[float]:
        inner = [p for p in self._breakpoints(child) if lo < p < hi]
        pts = sorted({lo, hi, *inner})
        return sorted(set(pts) | set(_midpoints(pts)))

    # -- series -------------------------------------------------------------

    def series(self, node: Formula, robust: bool = False):
        """Per-node time series at every sample time, keyed by pre-order id."""
        times = [float(t) for t in self.ctx.trace.times]
        out = {}
        for node_id, sub in preorder(node):
            if robust:
                out[node_id] = [self.robust(sub, t) for t in times]
            else:
                out[node_id] = [self.holds(sub, t) for t in times]
        return out


def _until_at(sat1: IntervalSet, sat2: IntervalSet, lo: float, hi: float) -> bool:
    """Does some u in [lo, hi] satisfy: u in sat2 and [lo, u) subset of sat1?

    Only the earliest available witness matters: growing u only enlarges the
    prefix that sat1 must cover.
    """
    if sat2.contains(lo):
        return True
    first = sat2.first_in_closed(lo, hi)
    if first is None:
        return False
    u, attained = first
    if attained:
        return sat1.covers_clopen(lo, u)
    # Witnesses approach u from above: need points of sat2 strictly above u
    # within the window, and sat1 to cover [lo, u].
    if u >= hi:
        return False
    return sat1.covers_closed(lo, u)


def _channel_margin(channel: str, op: str):
    def margin(ctx: EvalContext, t: float, args):
        got = ctx.vehicle_at(args[0], t)
        if got is None:
            return -INF
        state, _ = got
        value = getattr(state, channel)
        threshold = args[1]
        if op in ("gt", "ge"):
            return value - threshold
        return threshold - value

    return margin


def _channel_margin_series(index: int, op: str):
    import numpy as np

    def series(ctx: EvalContext, args):
        states, present, _ = ctx.track_arrays(args[0])
        value = states[:, index]
        threshold = args[1]
        out = value - threshold if op in ("gt", "ge") else threshold - value
        return np.where(present, out, -INF)

    return series


for _k, _ch in enumerate(("s", "v", "a", "d", "theta")):
    for _op in ("gt", "ge", "lt", "le"):
        register_atom(
            f"{_ch}_{_op}", (VEHICLE, NUMBER), _channel_margin(_ch, _op),
            strict=_op in ("gt", "lt"),
            margin_series=_channel_margin_series(_k, _op),
            doc=f"state channel {_ch} compared ({_op}) against a constant",
        )


def eval_bool(phi: Formula, ctx: EvalContext, t: float | None = None) -> bool:
    """Boolean truth of phi at time t (default: trace start)."""
    m = Monitor(ctx)
    if t is None:
        t = ctx.trace.domain[0]
    return m.holds(phi, t)


def eval_robust(phi: Formula, ctx: EvalContext, t: float | None = None) -> float:
    m = Monitor(ctx)
    if t is None:
        t = ctx.trace.domain[0]
    return m.robust(phi, t)


def eval_series(phi: Formula, ctx: EvalContext, robust: bool = False):
    return Monitor(ctx).series(phi, robust=robust)
