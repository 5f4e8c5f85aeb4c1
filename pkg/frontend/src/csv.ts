/**
 * Minimal CSV reader for the simulator's output files: header row,
 * comma-separated numeric columns, no quoting.
 */

export type Row = Record<string, number>;

export function parseCsv(text: string, requiredColumns: string[]): Row[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 1) throw new Error("empty CSV");
  const header = lines[0].split(",").map((h) => h.trim());
  for (const col of requiredColumns) {
    if (!header.includes(col)) {
      throw new Error(`CSV schema mismatch: missing column '${col}' (have: ${header.join(", ")})`);
    }
  }
  const rows: Row[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(`CSV row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    const row: Row = {};
    header.forEach((name, j) => {
      const cell = cells[j].trim();
      if (cell === "") return; // optional cells (e.g. single-site events)
      const value = Number(cell);
      if (Number.isNaN(value)) {
        // non-numeric cells are only fatal in required columns
        if (requiredColumns.includes(name)) {
          throw new Error(`CSV row ${i + 1}, column '${name}': not a number: '${cell}'`);
        }
        return;
      }
      row[name] = value;
    });
    rows.push(row);
  }
  return rows;
}

/** Split rows into groups keyed by an integer column (e.g. chain length L). */
export function groupBy(rows: Row[], column: string): Map<number, Row[]> {
  const groups = new Map<number, Row[]>();
  for (const row of rows) {
    const key = row[column];
    if (key === undefined) throw new Error(`missing group column '${column}'`);
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(row);
  }
  return groups;
}
