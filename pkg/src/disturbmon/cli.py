"""Command-line front end.

Commands: `filter` (ingest and trim disturbance traces), `evaluate` (run the
scenario catalog over a trace directory), `run` (both in one go), `check`
(one formula over one trace file), `catalog` (print the scenario formulas),
`make-fixtures` (write a synthetic recording corpus), `serve` (HTTP debug
service).

Exit codes: 0 success (an empty result is success), 1 usage error, 2 data
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import socket
import sys
from pathlib import Path

from .config import SCHEMA, RunConfig, load_config
from .errors import DataError, DisturbmonError, FormulaSyntaxError, UnboundName
from .pipeline import (FilterStats, discover_recordings, enumerate_pairs,
                       evaluate, filter_and_trim, ingest, read_trace_csv,
                       read_trace_dir, write_trace_dir)
from .report import write_reports
from .scenarios import ALL_INDICES, SpecSet, catalog
from .stl import EvalContext, Monitor, parse, preorder, pretty

USAGE_ERROR, DATA_ERROR, INTERNAL_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="key-value config file")
    group = parser.add_argument_group("config overrides (flags win)")
    for key in SCHEMA:
        group.add_argument(f"--{key.name}", dest=key.name, default=None,
                           metavar=key.type.upper(), help=key.help)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {k.name: getattr(args, k.name) for k in SCHEMA}
    return load_config(args.config, overrides)


def _run_filter(cfg: RunConfig, traces_dir: Path) -> FilterStats:
    data_dir = cfg["paths.data_dir"]
    if not data_dir:
        raise DataError("paths.data_dir is required")
    stats = FilterStats()
    rss = cfg.rss_params()
    scen = cfg.scenario_params()
    items, roads = [], {}
    for tracks_file, meta_file in discover_recordings(data_dir):
        rec = ingest(tracks_file, meta_file, cfg)
        pairs = enumerate_pairs(rec, rss, cfg["run.angle_convention"], stats)
        kept = filter_and_trim(rec, pairs, rss, scen,
                               mode=cfg["run.interpolation"],
                               convention=cfg["run.angle_convention"],
                               jobs=cfg.jobs(),
                               three_vehicle=cfg["run.three_vehicle"],
                               stats=stats)
        items.extend(kept)
        for direction, data in rec.directions.items():
            roads[(rec.rec_id, direction)] = data.road
    write_trace_dir(traces_dir, items, roads, cfg, stats)
    print(f"pairs scanned:   {stats.pairs_scanned}")
    print(f"pairs violating: {stats.pairs_violating}")
    print(f"pairs kept:      {stats.pairs_kept}")
    print(f"traces written to {traces_dir}")
    return stats


def _run_evaluate(cfg: RunConfig, traces_dir: Path, out_dir: Path) -> None:
    items, roads = read_trace_dir(traces_dir, cfg)
    reports = []
    for variant in cfg.spec_sets():
        reports.append(evaluate(items, roads, variant, cfg.scenario_indices(),
                                cfg.rss_params(), cfg.scenario_params(),
                                mode=cfg["run.interpolation"],
                                convention=cfg["run.angle_convention"],
                                jobs=cfg.jobs()))
    written = write_reports(out_dir, reports, trace_set=Path(traces_dir).name,
                            figures=cfg["report.figures"])
    print((out_dir / "report.txt").read_text(), end="")
    print(f"report files: {', '.join(str(p) for p in written.values())}")


def cmd_filter(args) -> int:
    cfg = _config_from_args(args)
    traces_dir = Path(cfg["paths.traces_dir"] or "disturb_traces")
    _run_filter(cfg, traces_dir)
    return 0


def cmd_evaluate(args) -> int:
    cfg = _config_from_args(args)
    traces_dir = Path(args.traces or cfg["paths.traces_dir"] or "disturb_traces")
    out_dir = Path(cfg["paths.out_dir"] or "report_out")
    _run_evaluate(cfg, traces_dir, out_dir)
    return 0


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    traces_dir = Path(cfg["paths.traces_dir"] or "disturb_traces")
    out_dir = Path(cfg["paths.out_dir"] or "report_out")
    _run_filter(cfg, traces_dir)
    _run_evaluate(cfg, traces_dir, out_dir)
    return 0


def cmd_check(args) -> int:
    cfg = _config_from_args(args)
    text = args.formula
    if args.formula_file:
        text = Path(args.formula_file).read_text().strip()
    if not text:
        raise DataError("provide --formula or --formula-file")
    phi = parse(text)
    trace, order = read_trace_csv(args.trace)
    bindings = {}
    for pair in args.bind or []:
        if "=" not in pair:
            raise DataError(f"--bind expects NAME=ID, got {pair!r}")
        name, vid = pair.split("=", 1)
        bindings[name] = vid
    if not bindings:
        names = ("SV", "POV", "POV1", "POV2")
        bindings = dict(zip(names, order))
    road = None
    if cfg["paths.map_file"]:
        from .road import load_map
        road = load_map(cfg["paths.map_file"])
    ctx = EvalContext(trace=trace, road=road, bindings=bindings,
                      rss=cfg.rss_params(), scenario=cfg.scenario_params(),
                      mode=cfg["run.interpolation"],
                      angle_convention=cfg["run.angle_convention"])
    monitor = Monitor(ctx)
    t0 = trace.domain[0]
    verdict = monitor.holds(phi, t0)
    robustness = monitor.robust(phi, t0)
    print(f"formula: {pretty(phi)}")
    print(f"verdict at t={t0:g}: {str(verdict).lower()}")
    print(f"robustness at t={t0:g}: {robustness:.6g}")
    if args.series or args.subformulas:
        series = monitor.series(phi, robust=True)
        times = [float(t) for t in trace.times]
        nodes = preorder(phi)
        wanted = nodes if args.subformulas else nodes[:1]
        for node_id, node in wanted:
            values = " ".join(f"{v:.6g}" for v in series[node_id])
            print(f"node {node_id} [{pretty(node)}]: {values}")
        print("times: " + " ".join(f"{t:.6g}" for t in times))
    return 0


def cmd_catalog(args) -> int:
    variant = SpecSet.from_name(args.variant)
    formulas = catalog(variant)
    indices = args.index or sorted(formulas)
    for i in indices:
        if i not in formulas:
            raise DataError(f"scenario index {i} out of range "
                            f"(valid: {list(ALL_INDICES)})")
        print(f"scenario {i}: {pretty(formulas[i])}")
    return 0


def cmd_make_fixtures(args) -> int:
    from .synth import synthesize, write_highd_recording

    cfg = _config_from_args(args)
    out = Path(args.out)
    seed = cfg["run.seed"]
    dt = 1.0 / cfg["run.frame_rate_hz"]
    for k, index in enumerate(args.scenario):
        g = synthesize(index, seed + k, dt=dt)
        mapping = {g.bindings[name]: name for name in ("SV", "POV", "POV1", "POV2")
                   if name in g.bindings}
        write_highd_recording(out, f"{k + 1:02d}", g.trace, frame_rate=1.0 / dt)
        print(f"wrote recording {k + 1:02d} (scenario {index}, "
              f"vehicles {sorted(mapping)})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        try:
            probe.bind((args.host, args.port))
        except OSError as exc:
            raise DataError(f"port {args.port} unavailable: {exc}") from exc
    app = create_app()
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="disturbmon",
                     description="Temporal-logic monitoring of highway "
                                 "traffic disturbances")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", parents=[], help="ingest recordings and "
                       "write the filtered, trimmed disturbance traces")
    _add_config_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("evaluate", help="evaluate the scenario catalog over "
                       "a trace directory")
    p.add_argument("--traces", help="trace directory (default from config)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="filter then evaluate in one go")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="evaluate one formula over one trace file")
    p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="file containing the formula")
    p.add_argument("--trace", required=True, help="per-pair trace CSV")
    p.add_argument("--bind", action="append", metavar="NAME=ID",
                   help="bind a formula name to a vehicle id (repeatable)")
    p.add_argument("--series", action="store_true",
                   help="print the robustness series of the root")
    p.add_argument("--subformulas", action="store_true",
                   help="print the robustness series of every subformula")
    _add_config_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="print scenario formulas in the DSL")
    p.add_argument("--variant", default="ISO34502-STL",
                   help="ISO34502-STL, ISO34502-STL-extA, or ISO34502-STL-ext")
    p.add_argument("--index", type=int, action="append",
                   help="restrict to specific scenario indices")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("make-fixtures", help="write a synthetic recording corpus")
    p.add_argument("--out", required=True, help="output data directory")
    p.add_argument("--scenario", type=int, action="append", required=True,
                   help="scenario index to generate (repeatable)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_make_fixtures)

    p = sub.add_parser("serve", help="run the HTTP debug service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormulaSyntaxError, UnboundName) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except DisturbmonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
