/**
 * Usage:
 *   render --spec <figure-spec.json>
 *   render --all --in <csv-dir> --out <svg-dir>
 */

import { renderAll, renderSpecFile } from "./figures.js";

function fail(message: string): never {
  console.error(message);
  process.exit(1);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    fail("usage: render --spec <file> | render --all --in <dir> --out <dir>");
  }
  const flags = new Map<string, string | true>();
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i];
    if (!arg.startsWith("--")) fail(`unexpected argument '${arg}'`);
    const name = arg.slice(2);
    if (name === "all") {
      flags.set(name, true);
    } else {
      const value = rest[++i];
      if (value === undefined) fail(`missing value for --${name}`);
      flags.set(name, value);
    }
  }
  try {
    if (flags.has("spec")) {
      const out = renderSpecFile(flags.get("spec") as string);
      console.log(`wrote ${out}`);
      return 0;
    }
    if (flags.has("all")) {
      const inDir = flags.get("in");
      const outDir = flags.get("out");
      if (typeof inDir !== "string" || typeof outDir !== "string") {
        fail("render --all needs --in <dir> and --out <dir>");
      }
      const written = renderAll(inDir, outDir);
      for (const path of written) console.log(`wrote ${path}`);
      if (written.length === 0) fail(`no renderable CSVs found in ${inDir}`);
      return 0;
    }
  } catch (err) {
    fail((err as Error).message);
  }
  fail("give either --spec or --all");
}

main(process.argv.slice(2));
