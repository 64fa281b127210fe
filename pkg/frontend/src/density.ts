/**
 * Density overlays from a density dump (x, fhat, stderr): grand-mean
 * curve with a +-stderr band, and optionally thin individual
 * realization curves from extra columns (r1, r2, ...).
 */

import { numeric, readCsv, requireColumns } from "./csv.js";
import { Frame, PALETTE, axes, document, polygon, polyline, text } from "./svg.js";

export interface DensityDump {
  x: number[];
  mean: number[];
  se: number[];
  realizations: number[][];
}

export function loadDensityDump(path: string): DensityDump {
  const table = readCsv(path);
  const cols = requireColumns(table, ["x", "fhat", "stderr"], path);
  const realCols = table.header
    .map((name, i) => ({ name, i }))
    .filter(({ name }) => /^r\d+$/.test(name));
  const x: number[] = [];
  const mean: number[] = [];
  const se: number[] = [];
  const realizations: number[][] = realCols.map(() => []);
  table.rows.forEach((row, r) => {
    x.push(numeric(row[cols.get("x")!], path, r + 2));
    mean.push(numeric(row[cols.get("fhat")!], path, r + 2));
    se.push(numeric(row[cols.get("stderr")!], path, r + 2));
    realCols.forEach(({ i }, k) => realizations[k].push(numeric(row[i], path, r + 2)));
  });
  return { x, mean, se, realizations };
}

export function renderDensity(inPath: string, withRealizations: boolean): string {
  const dump = loadDensityDump(inPath);
  if (withRealizations && dump.realizations.length === 0) {
    throw new Error(`${inPath}: no per-realization columns (r1, r2, ...) present`);
  }
  const shown = withRealizations ? dump.realizations : [];
  const upper = dump.mean.map((m, i) => m + dump.se[i]);
  const lower = dump.mean.map((m, i) => m - dump.se[i]);
  const all = [...dump.mean, ...upper, ...lower, ...shown.flat()];
  const yMax = Math.max(...all) * 1.06;
  const yMin = Math.min(0, Math.min(...all));
  const f: Frame = {
    width: 640, height: 420, left: 62, right: 26, top: 24, bottom: 46,
    xMin: Math.min(...dump.x), xMax: Math.max(...dump.x), yMin, yMax,
  };
  const parts: string[] = [axes(f, "x", "density")];
  // stderr band
  const band: Array<[number, number]> = [
    ...dump.x.map((xv, i) => [xv, upper[i]] as [number, number]),
    ...dump.x.map((xv, i) => [xv, lower[i]] as [number, number]).reverse(),
  ];
  parts.push(polygon(f, band, PALETTE[0], 0.18));
  shown.forEach((r, k) => {
    parts.push(polyline(f, dump.x.map((xv, i) => [xv, r[i]] as [number, number]),
      PALETTE[(k + 2) % PALETTE.length], 0.8));
  });
  parts.push(polyline(f, dump.x.map((xv, i) => [xv, dump.mean[i]] as [number, number]),
    PALETTE[1], 2.0));
  const caption = withRealizations
    ? `grand mean +- stderr, ${shown.length} realizations`
    : "grand mean +- stderr";
  parts.push(text(f.left + 8, f.top + 14, caption, 11));
  return document(f.width, f.height, parts.join("\n"));
}
