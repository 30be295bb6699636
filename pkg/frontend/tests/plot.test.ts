// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { pointCount, renderSeriesPlot, TimeCursor } from "../src/plot.js";

describe("renderSeriesPlot", () => {
  it("draws one polyline vertex per sample", () => {
    const container = document.createElement("div");
    const times = Array.from({ length: 37 }, (_, k) => k * 0.25);
    const values = times.map((t) => Math.sin(t));
    renderSeriesPlot(container, times, [{ label: "root", values }]);
    const line = container.querySelector<SVGPolylineElement>(".series-line");
    expect(line).not.toBeNull();
    expect(pointCount(line!)).toBe(37);
  });

  it("overlays multiple series", () => {
    const container = document.createElement("div");
    const times = [0, 1, 2];
    renderSeriesPlot(container, times, [
      { label: "a", values: [1, 2, 3] },
      { label: "b", values: [3, 2, 1] },
    ]);
    expect(container.querySelectorAll(".series-line")).toHaveLength(2);
    expect(container.querySelector(".legend")!.textContent).toContain("a");
    expect(container.querySelector(".legend")!.textContent).toContain("b");
  });

  it("skips non-finite samples instead of breaking the path", () => {
    const container = document.createElement("div");
    renderSeriesPlot(container, [0, 1, 2, 3],
      [{ label: "r", values: [1, Infinity, -Infinity, 2] }]);
    const line = container.querySelector<SVGPolylineElement>(".series-line")!;
    expect(pointCount(line)).toBe(2);
  });

  it("renders the zero threshold guide when asked", () => {
    const container = document.createElement("div");
    renderSeriesPlot(container, [0, 1], [{ label: "r", values: [-1, 1] }],
      { threshold: 0 });
    expect(container.querySelector(".threshold")).not.toBeNull();
  });

  it("shares a cursor across plots", () => {
    const cursor = new TimeCursor();
    const a = document.createElement("div");
    const b = document.createElement("div");
    renderSeriesPlot(a, [0, 1, 2], [{ label: "x", values: [0, 1, 0] }], {},
      cursor);
    renderSeriesPlot(b, [0, 1, 2], [{ label: "y", values: [1, 0, 1] }], {},
      cursor);
    cursor.moveTo(1.0);
    const needles = [a, b].map((el) =>
      el.querySelector<SVGLineElement>(".cursor")!);
    expect(needles[0].getAttribute("visibility")).toBe("visible");
    expect(needles[0].getAttribute("x1")).toBe(needles[1].getAttribute("x1"));
    cursor.moveTo(null);
    expect(needles[1].getAttribute("visibility")).toBe("hidden");
  });
});
