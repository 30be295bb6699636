"""Report rendering: aligned text table, line-delimited records, per-trace
match vectors, and a bar-chart figure next to the delimited output."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .pipeline import EvaluationReport


def format_recall(recall: float | None) -> str:
    return "n/a" if recall is None else f"{100.0 * recall:.1f}%"


def render_text(reports: list[EvaluationReport], trace_set: str = "traces") -> str:
    indices = sorted({i for r in reports for i in r.counts})
    header = ["trace set", "minDanger", "|T|", "spec set", "matching", "recall"]
    header += [f"s{i}" for i in indices]
    rows = [header]
    for r in reports:
        row = [trace_set, f"{r.min_danger:g}", str(r.n_traces), r.spec_set,
               str(r.matching), format_recall(r.recall)]
        row += [str(r.counts.get(i, 0)) for i in indices]
        rows.append(row)
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    lines = []
    for k, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * widths[c] for c in range(len(header))))
    return "\n".join(lines) + "\n"


def render_jsonl(reports: list[EvaluationReport], trace_set: str = "traces") -> str:
    lines = []
    for r in reports:
        lines.append(json.dumps({
            "trace_set": trace_set,
            "min_danger": r.min_danger,
            "n_traces": r.n_traces,
            "spec_set": r.spec_set,
            "matching": r.matching,
            "recall": r.recall,
            "counts": {str(i): r.counts[i] for i in sorted(r.counts)},
        }, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_matches_csv(reports: list[EvaluationReport]) -> str:
    lines = ["trace_id,spec_set,scenario,match"]
    for r in reports:
        for outcome in r.outcomes:
            for i in sorted(outcome.matches):
                lines.append(f"{outcome.trace_id},{r.spec_set},{i},"
                             f"{int(outcome.matches[i])}")
    return "\n".join(lines) + "\n"


def render_figure(reports: list[EvaluationReport], path: str | Path) -> Path:
    """Grouped bars of per-scenario match counts, one group per spec set."""
    path = Path(path)
    indices = sorted({i for r in reports for i in r.counts})
    fig, (ax_counts, ax_recall) = plt.subplots(
        1, 2, figsize=(10, 4), gridspec_kw={"width_ratios": [3, 1]})
    width = 0.8 / max(1, len(reports))
    for k, r in enumerate(reports):
        xs = [j + k * width for j in range(len(indices))]
        ax_counts.bar(xs, [r.counts.get(i, 0) for i in indices], width=width,
                      label=r.spec_set)
    ax_counts.set_xticks([j + 0.4 - width / 2 for j in range(len(indices))])
    ax_counts.set_xticklabels([f"s{i}" for i in indices])
    ax_counts.set_ylabel("matching traces")
    ax_counts.set_title("per-scenario matches")
    ax_counts.legend(fontsize=8)

    recalls = [0.0 if r.recall is None else 100.0 * r.recall for r in reports]
    ax_recall.bar(range(len(reports)), recalls, color="tab:gray")
    ax_recall.set_xticks(range(len(reports)))
    ax_recall.set_xticklabels([r.spec_set.replace("ISO34502-STL", "base")
                               for r in reports], rotation=30, fontsize=7)
    ax_recall.set_ylabel("recall, %")
    ax_recall.set_ylim(0, 100)
    ax_recall.set_title("recall")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def write_reports(out_dir: str | Path, reports: list[EvaluationReport],
                  trace_set: str = "traces", figures: bool = True,
                  matches: bool = True) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    text = render_text(reports, trace_set)
    (out_dir / "report.txt").write_text(text)
    written["text"] = out_dir / "report.txt"
    (out_dir / "report.jsonl").write_text(render_jsonl(reports, trace_set))
    written["jsonl"] = out_dir / "report.jsonl"
    if matches:
        (out_dir / "matches.csv").write_text(render_matches_csv(reports))
        written["matches"] = out_dir / "matches.csv"
    if figures:
        written["figure"] = render_figure(reports, out_dir / "report.png")
    return written
