"""Calibration constants for the safety-distance model and scenario timing."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError


@dataclass(frozen=True)
class RssParams:
    """Reaction time and acceleration bounds for the safe-distance model.

    Defaults calibrate the longitudinal distance to the German half-tacho
    rule of thumb (roughly 50 m at 100 km/h).
    """

    rho: float = 0.6
    a_max: float = 5.0
    b_min: float = 6.0
    b_max: float = 8.0
    a_max_lat: float = 1.5
    b_min_lat: float = 1.5

    def __post_init__(self):
        values = (self.rho, self.a_max, self.b_min, self.b_max,
                  self.a_max_lat, self.b_min_lat)
        if any(v <= 0 for v in values):
            raise DataError("all safety-distance parameters must be positive")
        if self.b_min > self.b_max:
            raise DataError("b_min must not exceed b_max")


@dataclass(frozen=True)
class ScenarioParams:
    """Required durations of danger and of the safe lead-in."""

    min_danger: float = 0.0
    min_safe: float = 0.6

    def __post_init__(self):
        if self.min_danger < 0 or self.min_safe < 0:
            raise DataError("durations must be nonnegative")
