/** Minimal SVG time-series plots with a shared vertical time cursor. */

export interface Series {
  label: string;
  values: number[];
  color?: string;
}

export interface PlotOptions {
  width?: number;
  height?: number;
  threshold?: number; // horizontal guide line, e.g. a formula threshold
}

const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b"];

const MARGIN = { left: 46, right: 10, top: 8, bottom: 22 };

function finite(values: number[]): number[] {
  return values.filter((v) => Number.isFinite(v));
}

export class TimeCursor {
  private readonly listeners: ((t: number | null) => void)[] = [];

  moveTo(t: number | null): void {
    for (const listener of this.listeners) listener(t);
  }

  subscribe(listener: (t: number | null) => void): void {
    this.listeners.push(listener);
  }
}

/** Render line charts for one or more series over a shared time axis.
 * Every sample becomes one vertex of the polyline, so the vertex count of
 * each `.series-line` equals the sample count. */
export function renderSeriesPlot(
  container: HTMLElement,
  times: number[],
  series: Series[],
  options: PlotOptions = {},
  cursor?: TimeCursor,
): SVGSVGElement {
  const width = options.width ?? 640;
  const height = options.height ?? 180;
  const doc = container.ownerDocument;
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "series-plot");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  const values = series.flatMap((s) => finite(s.values));
  const tLo = times[0] ?? 0;
  const tHi = times[times.length - 1] ?? 1;
  let vLo = Math.min(...values, options.threshold ?? Infinity);
  let vHi = Math.max(...values, options.threshold ?? -Infinity);
  if (!Number.isFinite(vLo) || !Number.isFinite(vHi)) {
    vLo = -1;
    vHi = 1;
  }
  if (vHi - vLo < 1e-9) {
    vLo -= 1;
    vHi += 1;
  }
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const x = (t: number) => MARGIN.left + ((t - tLo) / (tHi - tLo || 1)) * plotW;
  const y = (v: number) => {
    const clamped = Math.max(vLo, Math.min(vHi, v));
    return MARGIN.top + (1 - (clamped - vLo) / (vHi - vLo)) * plotH;
  };

  const axis = doc.createElementNS(SVG_NS, "g");
  axis.setAttribute("class", "axes");
  const frame = doc.createElementNS(SVG_NS, "rect");
  frame.setAttribute("x", String(MARGIN.left));
  frame.setAttribute("y", String(MARGIN.top));
  frame.setAttribute("width", String(plotW));
  frame.setAttribute("height", String(plotH));
  frame.setAttribute("fill", "none");
  frame.setAttribute("stroke", "#999");
  axis.appendChild(frame);
  for (const [value, label] of [[vLo, vLo.toPrecision(3)],
    [vHi, vHi.toPrecision(3)]] as [number, string][]) {
    const tick = doc.createElementNS(SVG_NS, "text");
    tick.setAttribute("x", "2");
    tick.setAttribute("y", String(y(value) + 4));
    tick.setAttribute("class", "tick");
    tick.textContent = label;
    axis.appendChild(tick);
  }
  const t0label = doc.createElementNS(SVG_NS, "text");
  t0label.setAttribute("x", String(MARGIN.left));
  t0label.setAttribute("y", String(height - 6));
  t0label.setAttribute("class", "tick");
  t0label.textContent = `${tLo.toPrecision(3)}s … ${tHi.toPrecision(3)}s`;
  axis.appendChild(t0label);
  svg.appendChild(axis);

  if (options.threshold !== undefined) {
    const guide = doc.createElementNS(SVG_NS, "line");
    guide.setAttribute("class", "threshold");
    guide.setAttribute("x1", String(x(tLo)));
    guide.setAttribute("x2", String(x(tHi)));
    guide.setAttribute("y1", String(y(options.threshold)));
    guide.setAttribute("y2", String(y(options.threshold)));
    guide.setAttribute("stroke", "#aaa");
    guide.setAttribute("stroke-dasharray", "4 3");
    svg.appendChild(guide);
  }

  series.forEach((s, index) => {
    const line = doc.createElementNS(SVG_NS, "polyline");
    line.setAttribute("class", "series-line");
    line.setAttribute("data-label", s.label);
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", s.color ?? PALETTE[index % PALETTE.length]);
    line.setAttribute("stroke-width", "1.5");
    const points = times
      .map((t, k) => [t, s.values[k]] as const)
      .filter(([, v]) => Number.isFinite(v))
      .map(([t, v]) => `${x(t).toFixed(2)},${y(v).toFixed(2)}`)
      .join(" ");
    line.setAttribute("points", points);
    svg.appendChild(line);
  });

  const legend = doc.createElementNS(SVG_NS, "text");
  legend.setAttribute("x", String(MARGIN.left + 4));
  legend.setAttribute("y", String(MARGIN.top + 12));
  legend.setAttribute("class", "legend");
  legend.textContent = series.map((s) => s.label).join("   ");
  svg.appendChild(legend);

  if (cursor) {
    const needle = doc.createElementNS(SVG_NS, "line");
    needle.setAttribute("class", "cursor");
    needle.setAttribute("y1", String(MARGIN.top));
    needle.setAttribute("y2", String(MARGIN.top + plotH));
    needle.setAttribute("stroke", "#444");
    needle.setAttribute("visibility", "hidden");
    svg.appendChild(needle);
    cursor.subscribe((t) => {
      if (t === null || t < tLo || t > tHi) {
        needle.setAttribute("visibility", "hidden");
        return;
      }
      needle.setAttribute("visibility", "visible");
      needle.setAttribute("x1", String(x(t)));
      needle.setAttribute("x2", String(x(t)));
    });
    svg.addEventListener("mousemove", (event) => {
      const bounds = svg.getBoundingClientRect();
      const fraction = (event.clientX - bounds.left - MARGIN.left) / plotW;
      cursor.moveTo(tLo + Math.max(0, Math.min(1, fraction)) * (tHi - tLo));
    });
    svg.addEventListener("mouseleave", () => cursor.moveTo(null));
  }

  container.appendChild(svg);
  return svg;
}

/** Vertex count of a rendered series line; equals the number of plotted
 * samples. */
export function pointCount(line: SVGPolylineElement): number {
  const points = line.getAttribute("points") ?? "";
  return points.trim() === "" ? 0 : points.trim().split(/\s+/).length;
}
