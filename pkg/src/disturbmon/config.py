"""Run configuration: a flat key-value file plus same-named CLI overrides.

Config files hold one `section.key = value` pair per line; `#` starts a
comment. Every key can be overridden on the command line by a flag of the
same name (`--rss.rho 0.7`); flags win over the file, the file wins over
the defaults.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .params import RssParams, ScenarioParams
from .scenarios import SpecSet


def _parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise DataError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ConfigKey:
    name: str
    type: str  # float | int | bool | str
    default: object
    help: str


SCHEMA = [
    ConfigKey("paths.data_dir", "str", "", "directory with *_tracks.csv recordings"),
    ConfigKey("paths.traces_dir", "str", "", "directory for filtered trace output"),
    ConfigKey("paths.out_dir", "str", "", "directory for reports and figures"),
    ConfigKey("paths.map_file", "str", "", "optional road map (JSON lanelets)"),
    ConfigKey("rss.rho", "float", 0.6, "reaction time before the rear car brakes, s"),
    ConfigKey("rss.a_max", "float", 5.0, "max longitudinal acceleration, m/s^2"),
    ConfigKey("rss.b_min", "float", 6.0, "comfortable braking of the rear car, m/s^2"),
    ConfigKey("rss.b_max", "float", 8.0, "max braking of the front car, m/s^2"),
    ConfigKey("rss.a_max_lat", "float", 1.5, "max lateral acceleration, m/s^2"),
    ConfigKey("rss.b_min_lat", "float", 1.5, "comfortable lateral braking, m/s^2"),
    ConfigKey("scenario.min_danger", "float", 0.0, "required duration of danger, s"),
    ConfigKey("scenario.min_safe", "float", 0.6, "required duration of the safe lead-in, s"),
    ConfigKey("run.frame_rate_hz", "float", 25.0, "fallback frame rate when metadata lacks one"),
    ConfigKey("run.interpolation", "str", "step", "step or linear"),
    ConfigKey("run.cars_only", "bool", True, "drop rows whose class is not Car"),
    ConfigKey("run.three_vehicle", "bool", False, "also evaluate the three-vehicle scenario"),
    ConfigKey("run.scenarios", "str", "1,3,4,5,6,7,8", "scenario indices to evaluate"),
    ConfigKey("run.spec_sets", "str",
              "ISO34502-STL,ISO34502-STL-extA,ISO34502-STL-ext",
              "catalog variants to evaluate, comma separated"),
    ConfigKey("run.angle_convention", "str", "cos_sin",
              "cos_sin (aligned heading is longitudinal) or sin_cos"),
    ConfigKey("run.seed", "int", 0, "seed for all randomized components"),
    ConfigKey("run.jobs", "int", 0, "worker processes; 0 means all cores"),
    ConfigKey("report.figures", "bool", True, "render report figures next to the tables"),
]

_BY_NAME = {k.name: k for k in SCHEMA}


class RunConfig:
    """Typed view over the flat key-value configuration."""

    def __init__(self, values: dict | None = None):
        self._values = {k.name: k.default for k in SCHEMA}
        for name, value in (values or {}).items():
            self.set(name, value)

    def set(self, name: str, value) -> None:
        key = _BY_NAME.get(name)
        if key is None:
            raise DataError(f"unknown config key {name!r}")
        if isinstance(value, str):
            if key.type == "float":
                value = float(value)
            elif key.type == "int":
                value = int(value)
            elif key.type == "bool":
                value = _parse_bool(value)
        self._values[name] = value

    def __getitem__(self, name: str):
        if name not in self._values:
            raise DataError(f"unknown config key {name!r}")
        return self._values[name]

    def as_dict(self) -> dict:
        return dict(self._values)

    def rss_params(self) -> RssParams:
        return RssParams(
            rho=self["rss.rho"], a_max=self["rss.a_max"],
            b_min=self["rss.b_min"], b_max=self["rss.b_max"],
            a_max_lat=self["rss.a_max_lat"], b_min_lat=self["rss.b_min_lat"],
        )

    def scenario_params(self) -> ScenarioParams:
        return ScenarioParams(min_danger=self["scenario.min_danger"],
                              min_safe=self["scenario.min_safe"])

    def spec_sets(self) -> list[SpecSet]:
        names = [s.strip() for s in self["run.spec_sets"].split(",") if s.strip()]
        return [SpecSet.from_name(n) for n in names]

    def scenario_indices(self) -> list[int]:
        out = [int(s) for s in self["run.scenarios"].split(",") if s.strip()]
        if self["run.three_vehicle"] and 2 not in out:
            out.append(2)
        return sorted(set(out))

    def jobs(self) -> int:
        import os
        n = self["run.jobs"]
        return n if n > 0 else (os.cpu_count() or 1)


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected 'key = value'")
            name, value = (part.strip() for part in line.split("=", 1))
            cfg.set(name, value)
    for name, value in (overrides or {}).items():
        if value is not None:
            cfg.set(name, value)
    return cfg
