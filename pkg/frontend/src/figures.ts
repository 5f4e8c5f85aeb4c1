/**
 * Figure dispatch: maps the simulator's CSV outputs to renderers.
 *
 * fig3, fig5  -> ensemble series (correlator / DEE curves per L)
 * fig6, fig7  -> t_c versus L with a linear fit
 * fig8        -> single-trajectory trace with jump markers
 * fig9..fig11 -> jump-statistics histograms with reference lines
 */

import { readFileSync, writeFileSync, readdirSync, mkdirSync, existsSync } from "fs";
import { join, basename } from "path";

import { renderEnsembleSeries, renderTrajectory } from "./series.js";
import { renderHistogram } from "./histogram.js";
import { renderTcScaling } from "./scaling.js";

export type FigureId =
  | "fig3"
  | "fig5"
  | "fig6"
  | "fig7"
  | "fig8"
  | "fig9"
  | "fig10"
  | "fig11";

export interface FigureSpec {
  figure: FigureId;
  /** primary input CSV */
  input: string;
  /** events CSV, only used by fig8 */
  events?: string;
  output: string;
  title?: string;
}

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) throw new Error("figure spec must be an object");
  const spec = raw as Record<string, unknown>;
  const figures = ["fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"];
  if (typeof spec.figure !== "string" || !figures.includes(spec.figure)) {
    throw new Error(`figure must be one of ${figures.join(", ")}`);
  }
  for (const key of ["input", "output"]) {
    if (typeof spec[key] !== "string" || spec[key] === "") {
      throw new Error(`figure spec needs a string '${key}'`);
    }
  }
  for (const key of Object.keys(spec)) {
    if (!["figure", "input", "events", "output", "title"].includes(key)) {
      throw new Error(`unknown figure spec key '${key}'`);
    }
  }
  return spec as unknown as FigureSpec;
}

export function renderFigure(spec: FigureSpec): string {
  const text = readFileSync(spec.input, "utf8");
  const title = spec.title ?? "";
  switch (spec.figure) {
    case "fig3":
      return renderEnsembleSeries(text, {
        valueColumn: "mean_abs",
        errorColumn: "stderr_abs",
        ylabel: "|G(1, L)|",
        title,
      });
    case "fig5":
      return renderEnsembleSeries(text, {
        valueColumn: "mean",
        errorColumn: "stderr",
        ylabel: "mean DEE",
        title,
      });
    case "fig6":
    case "fig7":
      return renderTcScaling(text, title);
    case "fig8": {
      const events = spec.events ? readFileSync(spec.events, "utf8") : undefined;
      return renderTrajectory(text, events, title);
    }
    case "fig9":
    case "fig10":
    case "fig11":
      return renderHistogram(text, title);
  }
}

export function renderSpecFile(path: string): string {
  const spec = validateSpec(JSON.parse(readFileSync(path, "utf8")));
  const svg = renderFigure(spec);
  writeFileSync(spec.output, svg);
  return spec.output;
}

/** Render every recognizable CSV in a directory; returns written paths. */
export function renderAll(inDir: string, outDir: string): string[] {
  if (!existsSync(outDir)) mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  const files = readdirSync(inDir).sort();
  const put = (name: string, svg: string) => {
    const path = join(outDir, name);
    writeFileSync(path, svg);
    written.push(path);
  };
  for (const file of files) {
    const path = join(inDir, file);
    const stem = basename(file, ".csv");
    try {
      if (file.endsWith("tc_scaling.csv") || file.startsWith("tc_scaling")) {
        put(`${stem}.svg`, renderTcScaling(readFileSync(path, "utf8"), stem));
      } else if (file.includes("dsd_hist")) {
        put(`${stem}.svg`, renderHistogram(readFileSync(path, "utf8"), stem));
      } else if (file === "sdee_mean.csv") {
        put(`${stem}.svg`, renderFigure({ figure: "fig5", input: path, output: "unused", title: stem }));
      } else if (file === "correlator.csv") {
        put(`${stem}.svg`, renderFigure({ figure: "fig3", input: path, output: "unused", title: stem }));
      } else if (file === "trajectory.csv") {
        const events = join(inDir, "events.csv");
        put(
          `${stem}.svg`,
          renderTrajectory(
            readFileSync(path, "utf8"),
            existsSync(events) ? readFileSync(events, "utf8") : undefined,
            stem,
          ),
        );
      }
    } catch (err) {
      throw new Error(`failed to render ${file}: ${(err as Error).message}`);
    }
  }
  return written;
}
