import { describe, expect, it } from "vitest";

import { groupBy, parseCsv } from "../src/csv.js";

describe("parseCsv", () => {
  it("parses numeric rows", () => {
    const rows = parseCsv("a,b\n1,2\n3,4.5\n", ["a", "b"]);
    expect(rows).toEqual([
      { a: 1, b: 2 },
      { a: 3, b: 4.5 },
    ]);
  });

  it("rejects missing required columns with a descriptive message", () => {
    expect(() => parseCsv("a,b\n1,2\n", ["a", "density"])).toThrow(/missing column 'density'/);
  });

  it("rejects non-numeric cells and ragged rows", () => {
    expect(() => parseCsv("a,b\n1,x\n", ["a", "b"])).toThrow(/not a number/);
    expect(() => parseCsv("a,b\n1\n", ["a", "b"])).toThrow(/expected 2/);
  });

  it("allows empty optional cells", () => {
    const rows = parseCsv("site,site2\n1,\n", ["site"]);
    expect(rows[0].site).toBe(1);
    expect(rows[0].site2).toBeUndefined();
  });

  it("groups by an integer column", () => {
    const rows = parseCsv("L,t\n16,0\n16,1\n32,0\n", ["L", "t"]);
    const groups = groupBy(rows, "L");
    expect([...groups.keys()]).toEqual([16, 32]);
    expect(groups.get(16)).toHaveLength(2);
  });
});
