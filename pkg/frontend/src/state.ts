/** Editor state and the exemplify request queue.
 *
 * Diagnostics always mirror the most recent parse response; a stale
 * response for superseded text is dropped. At most one exemplify request
 * is in flight; later ones wait their turn.
 */

import type { AstNode, ParseDiagnostic } from "./api.js";

export interface Snapshot {
  text: string;
  takenAt: number;
}

export class EditorState {
  text = "";
  pretty: string | null = null;
  ast: AstNode[] | null = null;
  diagnostic: ParseDiagnostic | null = null;
  selectedNode: number | null = null;
  traceName: string | null = null;
  before: Snapshot | null = null;
  private revision = 0;

  /** Returns a token identifying this edit; responses for older tokens are
   * ignored. */
  setText(text: string): number {
    this.text = text;
    this.revision += 1;
    return this.revision;
  }

  applyParseOk(revision: number, ast: AstNode[], pretty: string): boolean {
    if (revision !== this.revision) return false;
    this.ast = ast;
    this.pretty = pretty;
    this.diagnostic = null;
    if (this.selectedNode !== null
        && !ast.some((n) => n.id === this.selectedNode)) {
      this.selectedNode = null;
    }
    return true;
  }

  applyParseError(revision: number, diagnostic: ParseDiagnostic): boolean {
    if (revision !== this.revision) return false;
    this.ast = null;
    this.pretty = null;
    this.diagnostic = diagnostic;
    this.selectedNode = null;
    return true;
  }

  select(nodeId: number | null): void {
    this.selectedNode = nodeId;
  }

  node(nodeId: number): AstNode | undefined {
    return this.ast?.find((n) => n.id === nodeId);
  }

  takeSnapshot(now: number = Date.now()): Snapshot {
    this.before = { text: this.text, takenAt: now };
    return this.before;
  }

  /** Body for exemplifying the semantic difference before & !after. */
  differenceRequest(): { formula: string; exclude: string } | null {
    if (!this.before || !this.before.text.trim() || !this.text.trim()) {
      return null;
    }
    return { formula: this.before.text, exclude: this.text };
  }
}

/** First occurrence of a subformula's canonical text within the canonical
 * rendering of the whole formula; used to highlight the selected node. */
export function findSpan(pretty: string, nodeText: string):
  { start: number; end: number } | null {
  if (!nodeText) return null;
  const start = pretty.indexOf(nodeText);
  if (start < 0) return null;
  return { start, end: start + nodeText.length };
}

export class ExemplifyQueue {
  private chain: Promise<unknown> = Promise.resolve();
  private waiting = 0;

  get pending(): number {
    return this.waiting;
  }

  /** Run `task` after all previously enqueued tasks have settled. */
  enqueue<T>(task: () => Promise<T>): Promise<T> {
    this.waiting += 1;
    const run = this.chain.then(task).finally(() => {
      this.waiting -= 1;
    });
    this.chain = run.catch(() => undefined);
    return run;
  }
}

/** Trailing-edge debounce used by the live-parse loop. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void, delayMs: number,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } =
    { set: setTimeout, clear: clearTimeout },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) timers.clear(handle);
    handle = timers.set(() => fn(...args), delayMs);
  };
}
