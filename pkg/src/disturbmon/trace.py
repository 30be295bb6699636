"""Vehicle traces in curvilinear road coordinates.

A trace is a multi-vehicle, timestamped sequence of states
``(s, v, a, d, theta)``: position along the reference path, speed,
acceleration, lateral offset from the reference path, and orientation
relative to the path. Vehicles may enter and leave the recorded field of
view; presence is tracked per sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, EmptyDomain, OutOfDomain, VehicleAbsent

CHANNELS = ("s", "v", "a", "d", "theta")

STEP = "step"
LINEAR = "linear"
INTERPOLATION_MODES = (STEP, LINEAR)

# theta = 0 means heading aligned with the reference path. The alternative
# convention swaps the sine/cosine decomposition.
ANGLE_COS_SIN = "cos_sin"
ANGLE_SIN_COS = "sin_cos"


@dataclass(frozen=True)
class VehicleDims:
    length: float
    width: float

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise DataError(f"vehicle dims must be positive, got {self}")


@dataclass(frozen=True)
class VehicleState:
    s: float
    v: float
    a: float
    d: float
    theta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.v, self.a, self.d, self.theta], dtype=float)


def lon_lat_components(v, theta, convention: str = ANGLE_COS_SIN):
    """Decompose speed(s) into (v_lon, v_lat); works on scalars and arrays."""
    if convention == ANGLE_COS_SIN:
        return v * np.cos(theta), v * np.sin(theta)
    if convention == ANGLE_SIN_COS:
        return v * np.sin(theta), v * np.cos(theta)
    raise ValueError(f"unknown angle convention {convention!r}")


def longitudinal_lateral_velocity(state: VehicleState, convention: str = ANGLE_COS_SIN):
    """Decompose speed into (v_lon, v_lat) relative to the reference path."""
    return lon_lat_components(state.v, state.theta, convention)


def front_rear(state: VehicleState, dims: VehicleDims):
    """Front/rear coordinates on the reference path (front-left corner tracked)."""
    return state.s, state.s - dims.length


@dataclass
class VehicleTrack:
    """Per-vehicle data aligned with the trace sample grid."""

    dims: VehicleDims
    states: np.ndarray  # (n, 5) float, NaN rows where absent
    present: np.ndarray  # (n,) bool

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=float)
        self.present = np.asarray(self.present, dtype=bool)
        if self.states.ndim != 2 or self.states.shape[1] != 5:
            raise DataError("states must have shape (n, 5)")
        if self.present.shape[0] != self.states.shape[0]:
            raise DataError("presence flags must match the sample count")
        pres = self.states[self.present]
        if pres.size and not np.all(np.isfinite(pres)):
            raise DataError("present samples must be finite")
        if pres.size and np.any(pres[:, 1] < 0):
            raise DataError("speeds must be nonnegative")


@dataclass
class Trace:
    """Immutable multi-vehicle signal over a closed time domain."""

    times: np.ndarray  # (n,) strictly increasing seconds
    vehicles: dict[str, VehicleTrack] = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or self.times.size < 2:
            raise DataError("a trace needs at least two samples")
        if not np.all(np.isfinite(self.times)) or np.any(self.times < 0):
            raise DataError("sample times must be finite and nonnegative")
        if np.any(np.diff(self.times) <= 0):
            raise DataError("sample times must be strictly increasing")
        for vid, track in self.vehicles.items():
            if track.states.shape[0] != self.times.size:
                raise DataError(f"vehicle {vid!r} not aligned with sample grid")

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def in_domain(self, t: float) -> bool:
        lo, hi = self.domain
        return lo <= t <= hi

    def vehicle_ids(self) -> list[str]:
        return sorted(self.vehicles)

    def sample_index(self, t: float) -> int:
        """Index of the greatest sample time <= t."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return max(i, 0)

    def present_at(self, vehicle: str, t: float, mode: str = STEP) -> bool:
        track = self.vehicles.get(vehicle)
        if track is None or not self.in_domain(t):
            return False
        i = self.sample_index(t)
        if not track.present[i]:
            return False
        if mode == LINEAR and t != self.times[i]:
            j = i + 1
            return j < self.times.size and bool(track.present[j])
        return True

    def state_at(self, vehicle: str, t: float, mode: str = STEP) -> VehicleState:
        """State of `vehicle` at time t under the given interpolation mode."""
        if vehicle not in self.vehicles:
            raise VehicleAbsent(f"unknown vehicle {vehicle!r}")
        if not self.in_domain(t):
            raise OutOfDomain(f"t={t} outside domain {self.domain}")
        if mode not in INTERPOLATION_MODES:
            raise ValueError(f"unknown interpolation mode {mode!r}")
        track = self.vehicles[vehicle]
        i = self.sample_index(t)
        if not track.present[i]:
            raise VehicleAbsent(f"vehicle {vehicle!r} absent at t={t}")
        if mode == STEP or t == self.times[i]:
            row = track.states[i]
        else:
            j = i + 1
            if j >= self.times.size or not track.present[j]:
                raise VehicleAbsent(f"vehicle {vehicle!r} has no sample bracketing t={t}")
            w = (t - self.times[i]) / (self.times[j] - self.times[i])
            row = (1.0 - w) * track.states[i] + w * track.states[j]
        return VehicleState(*map(float, row))

    def trim(self, lo: float, hi: float, mode: str = STEP) -> "Trace":
        """Restrict the trace to [lo, hi], inserting boundary samples if needed."""
        t0, t1 = self.domain
        if lo < t0 or hi > t1 or lo > hi:
            raise OutOfDomain(f"trim window [{lo}, {hi}] not inside {self.domain}")
        inside = (self.times >= lo) & (self.times <= hi)
        if int(inside.sum()) < 2:
            raise EmptyDomain(f"fewer than two samples in [{lo}, {hi}]")
        times = self.times[inside]
        grid = list(times)
        if grid[0] != lo:
            grid.insert(0, lo)
        if grid[-1] != hi:
            grid.append(hi)
        new_times = np.array(grid, dtype=float)
        vehicles = {}
        for vid, track in self.vehicles.items():
            states = np.full((new_times.size, 5), np.nan)
            present = np.zeros(new_times.size, dtype=bool)
            for k, t in enumerate(new_times):
                try:
                    states[k] = self.state_at(vid, float(t), mode).as_array()
                    present[k] = True
                except VehicleAbsent:
                    pass
            vehicles[vid] = VehicleTrack(track.dims, states, present)
        return Trace(new_times, vehicles)


def value_at(trace: Trace, vehicle: str, t: float, mode: str = STEP) -> VehicleState:
    return trace.state_at(vehicle, t, mode)


def trim(trace: Trace, lo: float, hi: float, mode: str = STEP) -> Trace:
    return trace.trim(lo, hi, mode)


def trace_from_channels(times, channels: dict[str, dict[str, np.ndarray]],
                        dims: dict[str, VehicleDims] | None = None) -> Trace:
    """Build a trace from per-vehicle channel arrays; missing channels are zero."""
    times = np.asarray(times, dtype=float)
    vehicles = {}
    for vid, chans in channels.items():
        states = np.zeros((times.size, 5))
        for name, values in chans.items():
            states[:, CHANNELS.index(name)] = np.asarray(values, dtype=float)
        d = dims[vid] if dims else VehicleDims(4.5, 2.0)
        vehicles[vid] = VehicleTrack(d, states, np.ones(times.size, dtype=bool))
    return Trace(times, vehicles)
