/** Panel wiring: live parse, evaluate-and-plot, exemplify with
 * before/after differencing. All semantics come from the service. */

import {
  DebugServiceClient, ParseFailed, traceToCsv,
  type EvaluateResponse, type ExemplifyOutcome, type TraceJson,
} from "./api.js";
import { renderSeriesPlot, TimeCursor, type Series } from "./plot.js";
import { debounce, EditorState, ExemplifyQueue, findSpan } from "./state.js";
import { renderAstTree } from "./tree.js";

interface Elements {
  editor: HTMLTextAreaElement;
  diagnostics: HTMLElement;
  canonical: HTMLElement;
  tree: HTMLElement;
  verdict: HTMLElement;
  evalPlot: HTMLElement;
  exemplifyPlot: HTMLElement;
  exemplifyStatus: HTMLElement;
  traceSelect: HTMLSelectElement;
  bindings: HTMLInputElement;
  evaluateButton: HTMLButtonElement;
  exemplifyButton: HTMLButtonElement;
  differenceButton: HTMLButtonElement;
  snapshotButton: HTMLButtonElement;
  loadExampleButton: HTMLButtonElement;
  banner: HTMLElement;
}

export class App {
  readonly state = new EditorState();
  readonly queue = new ExemplifyQueue();
  readonly cursor = new TimeCursor();
  private session: string | null = null;
  private lastEvaluation: EvaluateResponse | null = null;
  private lastExample: TraceJson | null = null;

  constructor(
    private readonly client: DebugServiceClient,
    private readonly el: Elements,
  ) {}

  async start(): Promise<void> {
    try {
      await this.client.health();
      this.el.banner.hidden = true;
    } catch {
      this.el.banner.hidden = false;
      this.el.banner.textContent =
        `service unreachable at ${this.client.baseUrl}`;
      return;
    }
    this.session = await this.client.createSession();
    const reparse = debounce(() => void this.reparse(), 300);
    this.el.editor.addEventListener("input", () => {
      this.state.setText(this.el.editor.value);
      reparse();
    });
    this.el.evaluateButton.addEventListener("click", () => void this.evaluate());
    this.el.exemplifyButton.addEventListener("click",
      () => void this.exemplify(false));
    this.el.differenceButton.addEventListener("click",
      () => void this.exemplify(true));
    this.el.snapshotButton.addEventListener("click", () => {
      this.state.takeSnapshot();
      this.el.snapshotButton.textContent = "snapshot saved";
    });
    this.el.loadExampleButton.addEventListener("click",
      () => void this.loadExampleIntoEvaluate());
  }

  async reparse(): Promise<void> {
    const revision = this.state.setText(this.el.editor.value);
    try {
      const result = await this.client.parse(this.el.editor.value);
      if (!this.state.applyParseOk(revision, result.ast, result.pretty)) return;
      this.renderDiagnostics();
      this.renderTree();
    } catch (error) {
      if (error instanceof ParseFailed) {
        if (!this.state.applyParseError(revision, error.diagnostic)) return;
        this.renderDiagnostics();
        this.renderTree();
        return;
      }
      throw error;
    }
  }

  renderDiagnostics(): void {
    const diag = this.state.diagnostic;
    if (!diag) {
      this.el.diagnostics.textContent = "";
      this.el.canonical.textContent = this.state.pretty ?? "";
      return;
    }
    const caret = " ".repeat(Math.max(0, diag.position)) + "^";
    this.el.diagnostics.textContent =
      `${this.state.text}\n${caret}\n${diag.message}`;
  }

  renderTree(): void {
    renderAstTree(this.el.tree, this.state.ast ?? [], {
      onSelect: (nodeId) => {
        this.state.select(nodeId);
        this.highlightSelection();
        this.renderEvaluation();
      },
    }, this.state.selectedNode);
  }

  highlightSelection(): void {
    const pretty = this.state.pretty ?? "";
    const node = this.state.selectedNode !== null
      ? this.state.node(this.state.selectedNode) : undefined;
    if (!node) {
      this.el.canonical.textContent = pretty;
      return;
    }
    const span = findSpan(pretty, node.text);
    if (!span) {
      this.el.canonical.textContent = pretty;
      return;
    }
    this.el.canonical.textContent = "";
    const doc = this.el.canonical.ownerDocument;
    this.el.canonical.append(
      doc.createTextNode(pretty.slice(0, span.start)));
    const mark = doc.createElement("mark");
    mark.textContent = pretty.slice(span.start, span.end);
    this.el.canonical.appendChild(mark);
    this.el.canonical.append(doc.createTextNode(pretty.slice(span.end)));
  }

  parseBindings(): Record<string, string> {
    const out: Record<string, string> = {};
    for (const piece of this.el.bindings.value.split(",")) {
      const [name, vid] = piece.split("=").map((s) => s.trim());
      if (name && vid) out[name] = vid;
    }
    return out;
  }

  async evaluate(): Promise<void> {
    if (!this.session || !this.el.traceSelect.value) return;
    try {
      this.lastEvaluation = await this.client.evaluate({
        session: this.session,
        trace: this.el.traceSelect.value,
        formula: this.el.editor.value,
        bindings: this.parseBindings(),
      });
    } catch (error) {
      this.el.verdict.textContent = `evaluation error: ${String(error)}`;
      this.el.verdict.className = "verdict error";
      return;
    }
    this.renderEvaluation();
  }

  renderEvaluation(): void {
    const result = this.lastEvaluation;
    if (!result) return;
    this.el.verdict.textContent = result.verdict
      ? "satisfied at trace start" : "violated at trace start";
    this.el.verdict.className = `verdict ${result.verdict ? "ok" : "bad"}`;
    this.el.evalPlot.textContent = "";
    const series: Series[] = [
      { label: "root", values: result.robustness_series },
    ];
    const selected = this.state.selectedNode;
    if (selected !== null && result.subformula_series[String(selected)]) {
      const node = this.state.node(selected);
      series.push({
        label: node ? node.text : `node ${selected}`,
        values: result.subformula_series[String(selected)],
      });
    }
    renderSeriesPlot(this.el.evalPlot, result.times, series,
      { threshold: 0 }, this.cursor);
  }

  async exemplify(difference: boolean): Promise<ExemplifyOutcome | null> {
    const body = difference
      ? this.state.differenceRequest()
      : { formula: this.el.editor.value };
    if (!body) {
      this.el.exemplifyStatus.textContent =
        "take a snapshot first, then edit the formula";
      return null;
    }
    this.el.exemplifyStatus.textContent =
      this.queue.pending > 0 ? "queued…" : "searching…";
    const outcome = await this.queue.enqueue(() =>
      this.client.exemplify({ ...body, budget: 20 }));
    this.renderExemplify(outcome);
    return outcome;
  }

  renderExemplify(outcome: ExemplifyOutcome): void {
    this.el.exemplifyPlot.textContent = "";
    if (!outcome.ok) {
      this.lastExample = null;
      this.el.exemplifyStatus.textContent =
        `no example found (best robustness ${outcome.bestRobustness.toPrecision(3)})`;
      this.el.exemplifyStatus.className = "status failure";
      return;
    }
    this.lastExample = outcome.trace;
    this.el.exemplifyStatus.textContent =
      `example found, robustness ${outcome.robustness.toPrecision(3)}`;
    this.el.exemplifyStatus.className = "status ok";
    for (const channel of ["s", "d", "v"]) {
      const series = Object.entries(outcome.trace.vehicles).map(
        ([vid, vehicle]) => ({
          label: `${channel}(${vid})`,
          values: vehicle.channels[channel],
        }));
      renderSeriesPlot(this.el.exemplifyPlot, outcome.trace.times, series,
        { height: 120 }, this.cursor);
    }
  }

  async loadExampleIntoEvaluate(): Promise<void> {
    if (!this.lastExample || !this.session) return;
    const name = `example-${Date.now()}`;
    await this.client.uploadTrace(this.session, name,
      traceToCsv(this.lastExample));
    const option = this.el.traceSelect.ownerDocument.createElement("option");
    option.value = name;
    option.textContent = name;
    this.el.traceSelect.appendChild(option);
    this.el.traceSelect.value = name;
  }
}

export function mount(doc: Document, baseUrl: string): App {
  const get = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  const app = new App(new DebugServiceClient(baseUrl), {
    editor: get<HTMLTextAreaElement>("editor"),
    diagnostics: get("diagnostics"),
    canonical: get("canonical"),
    tree: get("tree"),
    verdict: get("verdict"),
    evalPlot: get("eval-plot"),
    exemplifyPlot: get("exemplify-plot"),
    exemplifyStatus: get("exemplify-status"),
    traceSelect: get<HTMLSelectElement>("trace-select"),
    bindings: get<HTMLInputElement>("bindings"),
    evaluateButton: get<HTMLButtonElement>("evaluate-button"),
    exemplifyButton: get<HTMLButtonElement>("exemplify-button"),
    differenceButton: get<HTMLButtonElement>("difference-button"),
    snapshotButton: get<HTMLButtonElement>("snapshot-button"),
    loadExampleButton: get<HTMLButtonElement>("load-example-button"),
    banner: get("banner"),
  });
  void app.start();
  return app;
}
