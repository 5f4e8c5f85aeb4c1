/**
 * Time-series figures: mean DEE or edge-correlator curves per chain
 * length with shaded standard-error bands; also single-trajectory traces
 * with jump markers.
 */

import { Row, groupBy, parseCsv } from "./csv.js";
import { PALETTE, axes, el, makeFrame, polyline, render } from "./svg.js";
import { fmt } from "./constants.js";

export const SDEE_COLUMNS = ["L", "t", "mean", "stderr"];
export const CORR_COLUMNS = ["L", "t", "mean_abs", "stderr_abs"];
export const TRAJ_COLUMNS = ["t", "sdee"];

interface SeriesOpts {
  valueColumn: string;
  errorColumn: string;
  ylabel: string;
  title?: string;
}

export function renderEnsembleSeries(csvText: string, opts: SeriesOpts): string {
  const rows = parseCsv(csvText, ["L", "t", opts.valueColumn, opts.errorColumn]);
  const groups = groupBy(rows, "L");
  const ts = rows.map((r) => r.t);
  const vals = rows.map((r) => r[opts.valueColumn]);
  const errs = rows.map((r) => r[opts.errorColumn]);
  const yLo = Math.min(0, ...vals.map((v, i) => v - 2 * errs[i]));
  const yHi = Math.max(...vals.map((v, i) => v + 2 * errs[i])) * 1.05;
  const frame = makeFrame([Math.min(...ts), Math.max(...ts)], [yLo, yHi]);
  frame.body.push(...axes(frame, "time (gamma t)", opts.ylabel, opts.title ?? ""));

  const sizes = [...groups.keys()].sort((a, b) => a - b);
  sizes.forEach((L, gi) => {
    const color = PALETTE[gi % PALETTE.length];
    const g = groups.get(L)!;
    const upper = g.map((r): [number, number] => [
      frame.x(r.t),
      frame.y(r[opts.valueColumn] + r[opts.errorColumn]),
    ]);
    const lower = g
      .slice()
      .reverse()
      .map((r): [number, number] => [
        frame.x(r.t),
        frame.y(r[opts.valueColumn] - r[opts.errorColumn]),
      ]);
    frame.body.push(
      el("polygon", {
        points: [...upper, ...lower].map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" "),
        fill: color,
        "fill-opacity": 0.15,
        stroke: "none",
      }),
    );
    frame.body.push(
      polyline(
        g.map((r) => [frame.x(r.t), frame.y(r[opts.valueColumn])]),
        color,
      ),
    );
    frame.body.push(
      el(
        "text",
        {
          x: frame.x.range[1] - 8,
          y: frame.y.range[1] + 16 + 14 * gi,
          "text-anchor": "end",
          "font-size": 12,
          fill: color,
        },
        `L = ${L}`,
      ),
    );
  });
  return render(frame);
}

/** Single-trajectory DEE trace; jump events drawn as dots when given. */
export function renderTrajectory(csvText: string, eventsCsv?: string, title = ""): string {
  const rows = parseCsv(csvText, TRAJ_COLUMNS);
  const events: Row[] = eventsCsv ? parseCsv(eventsCsv, ["t", "dsd"]) : [];
  const ts = rows.map((r) => r.t);
  const ys = rows.map((r) => r.sdee);
  const frame = makeFrame(
    [Math.min(...ts), Math.max(...ts)],
    [Math.min(0, ...ys), Math.max(...ys) * 1.08],
  );
  frame.body.push(...axes(frame, "time (gamma t)", "DEE per trajectory", title));
  frame.body.push(polyline(rows.map((r) => [frame.x(r.t), frame.y(r.sdee)]), "#1f77b4"));

  if (events.length > 0) {
    // mark each jump at the post-jump DEE value, interpolated onto the trace
    for (const e of events) {
      let value = ys[ys.length - 1];
      for (let i = 0; i < rows.length; i++) {
        if (rows[i].t >= e.t) {
          value = ys[i];
          break;
        }
      }
      frame.body.push(
        el("circle", { cx: frame.x(e.t), cy: frame.y(value), r: 2.5, fill: "#d62728" }),
      );
    }
  }
  return render(frame);
}
