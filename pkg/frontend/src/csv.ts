/**
 * Minimal CSV reading for the condens output schemas.
 *
 * The upstream files are plain comma-separated with a header row and no
 * quoting, so a split-based parser is enough; schema checks raise with
 * the offending line number.
 */

import * as fs from "fs";

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function readCsv(path: string): CsvTable {
  const text = fs.readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",").map((s) => s.trim());
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `${path}:${i + 1}: expected ${header.length} columns, found ${cells.length}`
      );
    }
    rows.push(cells.map((s) => s.trim()));
  }
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return { header, rows };
}

export function requireColumns(
  table: CsvTable,
  wanted: string[],
  path: string
): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of wanted) {
    const at = table.header.indexOf(name);
    if (at < 0) {
      throw new Error(
        `${path}: missing column '${name}' (header: ${table.header.join(",")})`
      );
    }
    index.set(name, at);
  }
  return index;
}

export function numeric(cell: string, path: string, line: number): number {
  const v = Number(cell);
  if (!Number.isFinite(v)) {
    throw new Error(`${path}:${line}: '${cell}' is not a finite number`);
  }
  return v;
}
