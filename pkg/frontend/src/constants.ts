/**
 * Reference values for the jump-statistics figures, computed rather than
 * hard-coded: the edge-jump entropy drop in the dimerized limit and the
 * first two-site-jump value 2 - 2(2 - (3/4) log2 3).
 */

export const EDGE_JUMP_DSD = -2;

export const SBD_FIRST_JUMP_DSD = 2 * (2 - 0.75 * Math.log2(3)) - 2;

/** Fixed float formatting so identical inputs render to identical SVG. */
export function fmt(x: number, digits = 8): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  const s = x.toPrecision(digits);
  // normalize negative zero and trailing zeros for stable output
  const v = Number.parseFloat(s);
  return Object.is(v, -0) ? "0" : String(v);
}
