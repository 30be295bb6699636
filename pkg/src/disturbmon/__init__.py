"""Offline temporal-logic monitoring of highway traffic disturbances.

The toolkit formalises the standard highway disturbance scenarios (cut-in,
cut-out, acceleration, deceleration, and their lane-change and three-vehicle
combinations) as temporal-logic formulas over recorded vehicle traces, using
the safe-distance model to define danger, and ships a filtering/evaluation
pipeline, a formula DSL with Boolean and robust monitors, an exemplifier,
and an HTTP debug service.
"""

from . import rss, scenarios  # noqa: F401  (populate the atom registry)
from .params import RssParams, ScenarioParams
from .road import Lane, Lanelet, RoadNetwork, build_lanes, load_map, save_map
from .scenarios import SpecSet, catalog, danger_arises, scenario
from .stl import (EvalContext, Formula, Monitor, SignalTemplate, eval_bool,
                  eval_robust, eval_series, exemplify, parse, pretty)
from .trace import (Trace, VehicleDims, VehicleState, VehicleTrack,
                    front_rear, longitudinal_lateral_velocity, trim, value_at)

__version__ = "0.1.0"

__all__ = [
    "EvalContext", "Formula", "Lane", "Lanelet", "Monitor", "RoadNetwork",
    "RssParams", "ScenarioParams", "SignalTemplate", "SpecSet", "Trace",
    "VehicleDims", "VehicleState", "VehicleTrack", "build_lanes", "catalog",
    "danger_arises", "eval_bool", "eval_robust", "eval_series", "exemplify",
    "front_rear", "load_map", "longitudinal_lateral_velocity", "parse",
    "pretty", "rss", "save_map", "scenario", "scenarios", "trim", "value_at",
]
