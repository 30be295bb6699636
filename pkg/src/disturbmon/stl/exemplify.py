"""Robustness-guided synthesis of traces satisfying a formula.

Decision variables are piecewise-linear control points per vehicle channel;
the search is uniform random multi-start plus coordinate hill climbing on
the robust value at the trace start. A returned trace always re-verifies
under the Boolean monitor. Failure after the budget is exhausted is not a
proof of unsatisfiability.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidTemplate
from ..params import RssParams, ScenarioParams
from ..road import RoadNetwork
from ..trace import CHANNELS, Trace, VehicleDims, VehicleTrack
from .ast import Formula
from .semantics import EvalContext, Monitor

DEFAULT_BOUNDS = {
    "s": (0.0, 500.0),
    "v": (0.0, 50.0),
    "a": (-6.0, 6.0),
    "d": (0.0, 12.0),
    "theta": (-0.4, 0.4),
}


@dataclass
class SignalTemplate:
    """Search space description: vehicles, sample grid, channel bounds."""

    vehicles: dict[str, VehicleDims]
    duration: float = 10.0
    dt: float = 0.25
    control_points: int = 5
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    road: RoadNetwork | None = None
    lane_bindings: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.vehicles:
            raise InvalidTemplate("template needs at least one vehicle")
        if self.duration <= 0 or self.dt <= 0 or self.duration < self.dt:
            raise InvalidTemplate("bad sample grid")
        if self.control_points < 2:
            raise InvalidTemplate("need at least two control points")
        merged = dict(DEFAULT_BOUNDS)
        merged.update(self.bounds)
        for ch, (lo, hi) in merged.items():
            if ch not in CHANNELS:
                raise InvalidTemplate(f"unknown channel {ch!r}")
            if not lo < hi:
                raise InvalidTemplate(f"empty bounds for channel {ch!r}")
        if merged["v"][0] < 0:
            raise InvalidTemplate("speed bounds must be nonnegative")
        self.bounds = merged

    def sample_times(self) -> np.ndarray:
        n = int(round(self.duration / self.dt)) + 1
        return np.arange(n) * self.dt

    def names(self) -> list[str]:
        return sorted(self.vehicles)


@dataclass
class ExemplifyResult:
    ok: bool
    trace: Trace | None
    robustness: float
    iterations: int


def _trace_from_vector(template: SignalTemplate, x: np.ndarray) -> Trace:
    times = template.sample_times()
    names = template.names()
    k = template.control_points
    ctrl_t = np.linspace(times[0], times[-1], k)
    vehicles = {}
    per_vehicle = len(CHANNELS) * k
    for vi, name in enumerate(names):
        states = np.zeros((times.size, 5))
        base = vi * per_vehicle
        for ci, ch in enumerate(CHANNELS):
            ctrl = x[base + ci * k: base + (ci + 1) * k]
            states[:, ci] = np.interp(times, ctrl_t, ctrl)
        vehicles[name] = VehicleTrack(template.vehicles[name], states,
                                      np.ones(times.size, dtype=bool))
    return Trace(times, vehicles)


def _context(template: SignalTemplate, trace: Trace,
             rss: RssParams, scenario: ScenarioParams) -> EvalContext:
    bindings = {name: name for name in template.names()}
    bindings.update(template.lane_bindings)
    return EvalContext(trace=trace, road=template.road, bindings=bindings,
                       rss=rss, scenario=scenario)


def exemplify(phi: Formula, template: SignalTemplate, budget: int = 20,
              steps: int = 200, seed: int | None = None,
              rss: RssParams | None = None,
              scenario: ScenarioParams | None = None,
              deadline_s: float | None = None) -> ExemplifyResult:
    """Search for a trace with positive robustness of phi at its start.

    `budget` counts random restarts; each runs `steps` coordinate moves with
    the step size halved after every rejected move.
    """
    rng = np.random.default_rng(seed)
    rss = rss or RssParams()
    scenario = scenario or ScenarioParams()
    names = template.names()
    k = template.control_points
    lo = np.empty(len(names) * len(CHANNELS) * k)
    hi = np.empty_like(lo)
    for vi in range(len(names)):
        for ci, ch in enumerate(CHANNELS):
            b = template.bounds[ch]
            sl = slice(vi * len(CHANNELS) * k + ci * k,
                       vi * len(CHANNELS) * k + (ci + 1) * k)
            lo[sl], hi[sl] = b
    span = hi - lo

    def score(x: np.ndarray) -> tuple[float, Trace]:
        trace = _trace_from_vector(template, x)
        ctx = _context(template, trace, rss, scenario)
        return Monitor(ctx).robust(phi, trace.domain[0]), trace

    def verified(trace: Trace) -> bool:
        ctx = _context(template, trace, rss, scenario)
        return Monitor(ctx).holds(phi, trace.domain[0])

    start = time.monotonic()
    best_rob = -math.inf
    evaluations = 0
    for _restart in range(max(1, budget)):
        x = rng.uniform(lo, hi)
        rob, trace = score(x)
        evaluations += 1
        if rob > 0 and verified(trace):
            return ExemplifyResult(True, trace, rob, evaluations)
        initial_step = 0.25
        step = initial_step
        for _ in range(steps):
            if deadline_s is not None and time.monotonic() - start > deadline_s:
                best_rob = max(best_rob, rob)
                return ExemplifyResult(False, None, best_rob, evaluations)
            i = int(rng.integers(len(x)))
            proposal = x.copy()
            delta = step * span[i] * (1.0 if rng.random() < 0.5 else -1.0)
            proposal[i] = min(hi[i], max(lo[i], proposal[i] + delta))
            new_rob, new_trace = score(proposal)
            evaluations += 1
            if new_rob > rob:
                x, rob, trace = proposal, new_rob, new_trace
                step = initial_step
                if rob > 0 and verified(trace):
                    return ExemplifyResult(True, trace, rob, evaluations)
            elif new_rob < rob:
                # Moves on channels the formula never reads keep the value
                # unchanged; only strictly worse moves shrink the step.
                step = max(step * 0.5, 1e-3)
        best_rob = max(best_rob, rob)
    return ExemplifyResult(False, None, best_rob, evaluations)
