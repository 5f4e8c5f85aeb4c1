/**
 * Jump-statistics histogram: density bars over the DEE-change axis with
 * reference lines at the two analytic peak positions.
 */

import { EDGE_JUMP_DSD, SBD_FIRST_JUMP_DSD, fmt } from "./constants.js";
import { Row, parseCsv } from "./csv.js";
import { axes, el, makeFrame, polyline, render } from "./svg.js";

export const HIST_COLUMNS = ["bin_left", "bin_right", "count", "density"];

export function renderHistogram(csvText: string, title = ""): string {
  const rows = parseCsv(csvText, HIST_COLUMNS);
  if (rows.length === 0) throw new Error("histogram CSV has no bins");
  return renderHistogramRows(rows, title);
}

export function renderHistogramRows(rows: Row[], title = ""): string {
  const xLo = Math.min(...rows.map((r) => r.bin_left));
  const xHi = Math.max(...rows.map((r) => r.bin_right));
  const yHi = Math.max(...rows.map((r) => r.density), 1e-12) * 1.08;
  const frame = makeFrame([xLo, xHi], [0, yHi]);
  frame.body.push(...axes(frame, "DEE change per jump", "probability density", title));

  for (const r of rows) {
    if (r.density <= 0) continue;
    const x0 = frame.x(r.bin_left);
    const x1 = frame.x(r.bin_right);
    const y1 = frame.y(r.density);
    frame.body.push(
      el("rect", {
        x: x0,
        y: y1,
        width: x1 - x0,
        height: frame.y(0) - y1,
        fill: "#7fb3d5",
        stroke: "#39617f",
        "stroke-width": 0.5,
      }),
    );
  }

  for (const [value, label, color] of [
    [EDGE_JUMP_DSD, "edge-jump value", "#b22222"],
    [SBD_FIRST_JUMP_DSD, "two-site first-jump value", "#b8860b"],
  ] as Array<[number, string, string]>) {
    if (value < xLo || value > xHi) continue;
    const px = frame.x(value);
    frame.body.push(
      polyline(
        [
          [px, frame.y.range[0]],
          [px, frame.y.range[1]],
        ],
        color,
        1.2,
        "5,4",
      ),
    );
    frame.body.push(
      el(
        "text",
        {
          x: px + 4,
          y: frame.y.range[1] + 14,
          "font-size": 11,
          fill: color,
        },
        `${label} (${fmt(value, 6)})`,
      ),
    );
  }
  return render(frame);
}
