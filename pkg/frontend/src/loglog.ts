/**
 * Log-log convergence figure from a results.csv: one series per
 * (estimator, pointset), log2 n against log2 IV (or MISE), with the
 * fitted slope annotated per series.
 */

import { numeric, readCsv, requireColumns } from "./csv.js";
import { fitRate } from "./fit.js";
import { Frame, PALETTE, axes, document, marker, polyline, text } from "./svg.js";

interface Series {
  key: string;
  points: Array<[number, number]>; // (log2 n, log2 v)
  nu: number;
}

export function loadResultsSeries(path: string): Series[] {
  const table = readCsv(path);
  const cols = requireColumns(table, ["estimator", "pointset", "n", "iv"], path);
  const groups = new Map<string, Array<[number, number]>>();
  table.rows.forEach((row, i) => {
    const key = `${row[cols.get("estimator")!]}/${row[cols.get("pointset")!]}`;
    const n = numeric(row[cols.get("n")!], path, i + 2);
    const v = numeric(row[cols.get("iv")!], path, i + 2);
    if (!(n > 0) || !(v > 0)) {
      throw new Error(`${path}:${i + 2}: n and iv must be positive for a log-log plot`);
    }
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push([n, v]);
  });
  const series: Series[] = [];
  for (const [key, raw] of [...groups.entries()].sort((a, b) => a[0].localeCompare(b[0]))) {
    raw.sort((a, b) => a[0] - b[0]);
    const nu = raw.length >= 2 && new Set(raw.map((p) => p[0])).size >= 2
      ? fitRate(raw).nu
      : NaN;
    series.push({ key, points: raw.map(([n, v]) => [Math.log2(n), Math.log2(v)]), nu });
  }
  return series;
}

export function renderLoglog(inPath: string, outLabel = "IV"): string {
  const series = loadResultsSeries(inPath);
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const pad = (lo: number, hi: number): [number, number] => {
    const d = Math.max(hi - lo, 1e-9) * 0.06;
    return [lo - d, hi + d];
  };
  const [xMin, xMax] = pad(Math.min(...xs), Math.max(...xs));
  const [yMin, yMax] = pad(Math.min(...ys), Math.max(...ys));
  const f: Frame = {
    width: 660, height: 440, left: 62, right: 170, top: 24, bottom: 46,
    xMin, xMax, yMin, yMax,
  };
  const parts: string[] = [axes(f, "log2 n", `log2 ${outLabel}`)];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    parts.push(polyline(f, s.points, color));
    for (const p of s.points) parts.push(marker(f, p[0], p[1], color));
    const ly = f.top + 16 + i * 18;
    const lx = f.width - f.right + 12;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    const label = Number.isNaN(s.nu) ? s.key : `${s.key}  (nu=${s.nu.toFixed(2)})`;
    parts.push(text(lx + 28, ly, label, 11));
  });
  return document(f.width, f.height, parts.join("\n"));
}
