/**
 * Deterministic SVG assembly: plain string building with fixed number
 * formatting, no timestamps, no randomness.
 */

import { fmt } from "./constants.js";

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  if (d1 === d0) throw new Error("degenerate scale domain");
  const f = ((value: number) => r0 + ((value - d0) / (d1 - d0)) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

/** Round ticks covering [lo, hi] at a human step (1/2/5 ladder). */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (hi <= lo) return [lo];
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= target) ?? 10 * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

export const MARGIN = { left: 64, right: 16, top: 28, bottom: 46 };

export interface Frame {
  width: number;
  height: number;
  x: Scale;
  y: Scale;
  body: string[];
}

export function makeFrame(
  xDomain: [number, number],
  yDomain: [number, number],
  width = 640,
  height = 420,
): Frame {
  return {
    width,
    height,
    x: linearScale(xDomain, [MARGIN.left, width - MARGIN.right]),
    y: linearScale(yDomain, [height - MARGIN.bottom, MARGIN.top]),
    body: [],
  };
}

export function el(tag: string, attrs: Record<string, string | number>, content = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return content === "" ? `<${tag} ${parts}/>` : `<${tag} ${parts}>${content}</${tag}>`;
}

export function axes(frame: Frame, xlabel: string, ylabel: string, title = ""): string[] {
  const { x, y } = frame;
  const [x0, x1] = x.range;
  const [y0, y1] = y.range;
  const out: string[] = [];
  out.push(el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#222", "stroke-width": 1 }));
  out.push(el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#222", "stroke-width": 1 }));
  for (const t of niceTicks(x.domain[0], x.domain[1])) {
    const px = x(t);
    out.push(el("line", { x1: px, y1: y0, x2: px, y2: y0 + 5, stroke: "#222", "stroke-width": 1 }));
    out.push(
      el(
        "text",
        { x: px, y: y0 + 20, "text-anchor": "middle", "font-size": 12, fill: "#222" },
        fmt(t, 6),
      ),
    );
  }
  for (const t of niceTicks(y.domain[0], y.domain[1])) {
    const py = y(t);
    out.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "#222", "stroke-width": 1 }));
    out.push(
      el(
        "text",
        { x: x0 - 9, y: py + 4, "text-anchor": "end", "font-size": 12, fill: "#222" },
        fmt(t, 6),
      ),
    );
  }
  out.push(
    el(
      "text",
      { x: (x0 + x1) / 2, y: frame.height - 8, "text-anchor": "middle", "font-size": 13, fill: "#222" },
      xlabel,
    ),
  );
  out.push(
    el(
      "text",
      {
        x: 16,
        y: (y0 + y1) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#222",
        transform: `rotate(-90 16 ${fmt((y0 + y1) / 2)})`,
      },
      ylabel,
    ),
  );
  if (title) {
    out.push(
      el(
        "text",
        { x: (x0 + x1) / 2, y: 18, "text-anchor": "middle", "font-size": 14, fill: "#222" },
        title,
      ),
    );
  }
  return out;
}

export function polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ""): string {
  const attrs: Record<string, string | number> = {
    points: points.map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(" "),
    fill: "none",
    stroke,
    "stroke-width": width,
  };
  if (dash) attrs["stroke-dasharray"] = dash;
  return el("polyline", attrs);
}

export function render(frame: Frame): string {
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}">`,
    el("rect", { x: 0, y: 0, width: frame.width, height: frame.height, fill: "#ffffff" }),
    ...frame.body,
    `</svg>`,
  ].join("\n");
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
