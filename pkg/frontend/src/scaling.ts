/**
 * DEE departure time versus chain length: points with error bars plus a
 * least-squares line, its parameters annotated on the figure.
 */

import { fmt } from "./constants.js";
import { parseCsv } from "./csv.js";
import { axes, el, makeFrame, polyline, render } from "./svg.js";
import { linearFit } from "./fit.js";

export const TC_COLUMNS = ["L", "tc", "stderr", "censored_count"];

export function renderTcScaling(csvText: string, title = ""): string {
  const rows = parseCsv(csvText, TC_COLUMNS);
  if (rows.length < 2) throw new Error("tc-scaling CSV needs at least two sizes");
  const xs = rows.map((r) => r.L);
  const ys = rows.map((r) => r.tc);
  const errs = rows.map((r) => r.stderr);
  const fit = linearFit(xs, ys);

  const xPad = (Math.max(...xs) - Math.min(...xs)) * 0.08;
  const xLo = Math.min(...xs) - xPad;
  const xHi = Math.max(...xs) + xPad;
  const yLo = Math.min(0, ...ys.map((y, i) => y - 3 * errs[i]));
  const yHi = Math.max(...ys.map((y, i) => y + 3 * errs[i])) * 1.1;
  const frame = makeFrame([xLo, xHi], [yLo, yHi]);
  frame.body.push(...axes(frame, "chain length L", "departure time (gamma t_c)", title));

  frame.body.push(
    polyline(
      [
        [frame.x(xLo), frame.y(fit.slope * xLo + fit.intercept)],
        [frame.x(xHi), frame.y(fit.slope * xHi + fit.intercept)],
      ],
      "#888888",
      1.2,
    ),
  );

  rows.forEach((r, i) => {
    const px = frame.x(r.L);
    frame.body.push(
      polyline(
        [
          [px, frame.y(r.tc - errs[i])],
          [px, frame.y(r.tc + errs[i])],
        ],
        "#1f77b4",
        1.2,
      ),
    );
    frame.body.push(el("circle", { cx: px, cy: frame.y(r.tc), r: 4, fill: "#1f77b4" }));
    if (r.censored_count > 0) {
      frame.body.push(
        el(
          "text",
          { x: px, y: frame.y(r.tc) - 10, "text-anchor": "middle", "font-size": 10, fill: "#b22222" },
          `${r.censored_count} censored`,
        ),
      );
    }
  });

  frame.body.push(
    el(
      "text",
      { x: frame.x.range[0] + 8, y: frame.y.range[1] + 16, "font-size": 12, fill: "#333" },
      `fit: tc = ${fmt(fit.slope, 4)} L + ${fmt(fit.intercept, 4)}  (R^2 = ${fmt(fit.r2, 4)})`,
    ),
  );
  return render(frame);
}
