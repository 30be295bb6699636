"""HTTP API backing the interactive formula debugger.

Endpoints: parse a formula into an AST, evaluate it (with per-subformula
robustness series) over an uploaded trace, and exemplify it by synthesizing
a satisfying trace, optionally inside the semantic difference of two
formulas. Sessions isolate uploaded traces; ids are unguessable. Binds to
loopback by default and keeps no state beyond process memory.
"""

from __future__ import annotations

import io
import secrets
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .errors import (DataError, FormulaSyntaxError, InvalidTemplate,
                     UnboundName)
from .params import RssParams, ScenarioParams
from .pipeline import read_trace_csv
from .road import RoadNetwork
from .scenarios import ALL_INDICES, SpecSet, catalog
from .stl import (And, EvalContext, Monitor, Not, SignalTemplate, atom_specs,
                  exemplify, node_label, parse, preorder, pretty)
from .stl.ast import Atom, Formula
from .synth import synth_map
from .trace import Trace, VehicleDims

MAX_UPLOAD_BYTES = 10 * 1024 * 1024
DEFAULT_TIMEOUT_S = 30.0


@dataclass
class Session:
    id: str
    traces: dict[str, Trace] = field(default_factory=dict)
    snapshots: dict[str, str] = field(default_factory=dict)


class ParseRequest(BaseModel):
    text: str = Field(max_length=100_000)


class UploadRequest(BaseModel):
    name: str
    csv: str


class SnapshotRequest(BaseModel):
    name: str
    text: str


class EvaluateRequest(BaseModel):
    session: str
    trace: str
    formula: str
    bindings: dict[str, str] = {}
    mode: str = "step"
    robust: bool = True
    params: dict[str, float] = {}


class ExemplifyRequest(BaseModel):
    formula: str
    exclude: str | None = None
    template: dict[str, Any] = {}
    budget: int = 20
    seed: int | None = None
    timeout_s: float = DEFAULT_TIMEOUT_S
    params: dict[str, float] = {}


def _ast_json(phi: Formula) -> list[dict]:
    nodes = []
    index = {id(node): node_id for node_id, node in preorder(phi)}
    for node_id, node in preorder(phi):
        entry = {
            "id": node_id,
            "kind": type(node).__name__,
            "label": node_label(node),
            "text": pretty(node),
            "children": [index[id(c)] for c in node.children()],
        }
        if isinstance(node, Atom):
            entry["atom"] = {"name": node.name, "args": list(node.args)}
        if hasattr(node, "interval"):
            iv = node.interval
            entry["interval"] = [iv.lo, None if iv.hi == float("inf") else iv.hi]
        nodes.append(entry)
    return nodes


def _split_params(raw: dict[str, float]) -> tuple[RssParams, ScenarioParams]:
    rss_keys = {"rho", "a_max", "b_min", "b_max", "a_max_lat", "b_min_lat"}
    scen_keys = {"min_danger", "min_safe"}
    unknown = set(raw) - rss_keys - scen_keys
    if unknown:
        raise HTTPException(400, f"unknown parameters: {sorted(unknown)}")
    rss = RssParams(**{k: v for k, v in raw.items() if k in rss_keys})
    scen = ScenarioParams(**{k: v for k, v in raw.items() if k in scen_keys})
    return rss, scen


def _template_from_json(raw: dict[str, Any]) -> SignalTemplate:
    vehicles = {}
    for name, dims in (raw.get("vehicles") or {"SV": {}}).items():
        vehicles[name] = VehicleDims(float(dims.get("length", 4.8)),
                                     float(dims.get("width", 2.0)))
    bounds = {ch: (float(lo), float(hi))
              for ch, (lo, hi) in (raw.get("bounds") or {}).items()}
    road = synth_map() if raw.get("with_road", False) else None
    return SignalTemplate(
        vehicles=vehicles,
        duration=float(raw.get("duration", 10.0)),
        dt=float(raw.get("dt", 0.5)),
        control_points=int(raw.get("control_points", 5)),
        bounds=bounds,
        road=road,
        lane_bindings=raw.get("lane_bindings") or {},
    )


def _trace_json(trace: Trace) -> dict:
    out = {"times": [float(t) for t in trace.times], "vehicles": {}}
    for vid in trace.vehicle_ids():
        track = trace.vehicles[vid]
        out["vehicles"][vid] = {
            "length": track.dims.length,
            "width": track.dims.width,
            "present": [bool(p) for p in track.present],
            "channels": {
                ch: [float(x) for x in track.states[:, k]]
                for k, ch in enumerate(("s", "v", "a", "d", "theta"))
            },
        }
    return out


def create_app(road: RoadNetwork | None = None) -> FastAPI:
    app = FastAPI(title="disturbmon debug service", version="0.1.0")
    # The browser client is served from a separate static origin.
    from fastapi.middleware.cors import CORSMiddleware
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, Session] = {}
    default_road = road or synth_map()

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/atoms")
    def atoms():
        return {"atoms": [
            {"name": s.name, "kinds": list(s.kinds), "macro": s.is_macro,
             "doc": s.doc}
            for s in atom_specs()
        ]}

    @app.get("/catalog")
    def get_catalog(variant: str = "ISO34502-STL"):
        try:
            spec_set = SpecSet.from_name(variant)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        formulas = catalog(spec_set)
        return {"variant": spec_set.value,
                "scenarios": [{"index": i, "text": pretty(formulas[i])}
                              for i in ALL_INDICES]}

    @app.post("/sessions")
    def create_session():
        sid = secrets.token_hex(16)
        sessions[sid] = Session(sid)
        return {"session": sid}

    def _session(sid: str) -> Session:
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, "unknown session")
        return session

    @app.post("/sessions/{sid}/snapshots")
    def save_snapshot(sid: str, req: SnapshotRequest):
        session = _session(sid)
        try:
            parse(req.text)
        except FormulaSyntaxError as exc:
            raise HTTPException(400, detail={
                "message": str(exc), "position": exc.position}) from exc
        session.snapshots[req.name] = req.text
        return {"name": req.name}

    @app.get("/sessions/{sid}/snapshots")
    def list_snapshots(sid: str):
        session = _session(sid)
        return {"snapshots": [{"name": k, "text": v}
                              for k, v in sorted(session.snapshots.items())]}

    @app.post("/sessions/{sid}/traces")
    def upload_trace(sid: str, req: UploadRequest):
        session = _session(sid)
        if len(req.csv.encode()) > MAX_UPLOAD_BYTES:
            raise HTTPException(413, "trace upload exceeds the size cap")
        try:
            trace, order = read_trace_csv(io.StringIO(req.csv))
        except Exception as exc:
            raise HTTPException(400, f"bad trace CSV: {exc}") from exc
        session.traces[req.name] = trace
        return {"name": req.name, "vehicles": order,
                "samples": int(trace.times.size),
                "domain": list(trace.domain)}

    @app.post("/parse")
    def parse_formula(req: ParseRequest):
        if not req.text.strip():
            raise HTTPException(400, "empty formula")
        try:
            phi = parse(req.text)
        except FormulaSyntaxError as exc:
            raise HTTPException(400, detail={
                "message": str(exc), "position": exc.position,
                "kind": type(exc).__name__}) from exc
        return {"ast": _ast_json(phi), "pretty": pretty(phi), "errors": []}

    @app.post("/evaluate")
    def evaluate_formula(req: EvaluateRequest):
        session = _session(req.session)
        trace = session.traces.get(req.trace)
        if trace is None:
            raise HTTPException(404, f"no trace named {req.trace!r} in session")
        try:
            phi = parse(req.formula)
        except FormulaSyntaxError as exc:
            raise HTTPException(400, detail={
                "message": str(exc), "position": exc.position}) from exc
        try:
            rss, scen = _split_params(req.params)
            ctx = EvalContext(trace=trace, road=default_road,
                              bindings=req.bindings, rss=rss, scenario=scen,
                              mode=req.mode)
            monitor = Monitor(ctx)
            t0 = trace.domain[0]
            verdict = monitor.holds(phi, t0)
            series = monitor.series(phi, robust=req.robust)
        except UnboundName as exc:
            raise HTTPException(400, str(exc)) from exc
        except DataError as exc:
            raise HTTPException(400, str(exc)) from exc
        times = [float(t) for t in trace.times]
        to_jsonable = (lambda xs: [float(x) for x in xs]) if req.robust \
            else (lambda xs: [bool(x) for x in xs])
        return {
            "verdict": bool(verdict),
            "times": times,
            "robustness_series": to_jsonable(series[0]),
            "subformula_series": {str(k): to_jsonable(v)
                                  for k, v in series.items()},
            "ast": _ast_json(phi),
        }

    @app.post("/exemplify")
    def exemplify_formula(req: ExemplifyRequest):
        try:
            phi = parse(req.formula)
            if req.exclude:
                phi = And(phi, Not(parse(req.exclude)))
        except FormulaSyntaxError as exc:
            raise HTTPException(400, detail={
                "message": str(exc), "position": exc.position}) from exc
        try:
            rss, scen = _split_params(req.params)
            template = _template_from_json(req.template)
            result = exemplify(phi, template, budget=req.budget,
                               seed=req.seed, rss=rss, scenario=scen,
                               deadline_s=min(req.timeout_s, 300.0))
        except (InvalidTemplate, UnboundName) as exc:
            raise HTTPException(400, str(exc)) from exc
        if not result.ok:
            raise HTTPException(422, detail={
                "failure": "budget exhausted without a satisfying trace",
                "best_robustness": result.robustness,
                "iterations": result.iterations,
            })
        # A success response is always re-verified before it leaves the server.
        ctx = EvalContext(trace=result.trace, road=template.road,
                          bindings={**{n: n for n in template.vehicles},
                                    **template.lane_bindings},
                          rss=rss, scenario=scen)
        assert Monitor(ctx).holds(phi, result.trace.domain[0])
        return {
            "trace": _trace_json(result.trace),
            "robustness": result.robustness,
            "iterations": result.iterations,
            "formula": pretty(phi),
        }

    return app
