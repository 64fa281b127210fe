/**
 * Deterministic SVG scaffolding: identical inputs produce identical
 * bytes (fixed-precision coordinates, no timestamps or random ids).
 */

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

const fmt = (v: number): string => v.toFixed(2);

export function xPix(f: Frame, x: number): number {
  return f.left + ((x - f.xMin) / (f.xMax - f.xMin)) * (f.width - f.left - f.right);
}

export function yPix(f: Frame, y: number): number {
  return f.height - f.bottom - ((y - f.yMin) / (f.yMax - f.yMin)) * (f.height - f.top - f.bottom);
}

export function polyline(f: Frame, pts: Array<[number, number]>, color: string, width = 1.5, dash = ""): string {
  const coords = pts.map(([x, y]) => `${fmt(xPix(f, x))},${fmt(yPix(f, y))}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${color}" stroke-width="${width}"${dashAttr} points="${coords}"/>`;
}

export function polygon(f: Frame, pts: Array<[number, number]>, fill: string, opacity: number): string {
  const coords = pts.map(([x, y]) => `${fmt(xPix(f, x))},${fmt(yPix(f, y))}`).join(" ");
  return `<polygon fill="${fill}" fill-opacity="${opacity}" stroke="none" points="${coords}"/>`;
}

export function marker(f: Frame, x: number, y: number, color: string): string {
  return `<circle cx="${fmt(xPix(f, x))}" cy="${fmt(yPix(f, y))}" r="2.6" fill="${color}"/>`;
}

export function text(x: number, y: number, content: string, size = 11, anchor = "start", color = "#333333"): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica, Arial, sans-serif" font-size="${size}" text-anchor="${anchor}" fill="${color}">${escapeXml(content)}</text>`;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round tick positions covering [lo, hi] with roughly `n` steps. */
export function ticks(lo: number, hi: number, n = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= n) ?? candidates[candidates.length - 1];
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    out.push(Number(v.toFixed(10)));
  }
  return out;
}

export function tickLabel(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toFixed(3);
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

export function axes(f: Frame, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = f.left;
  const x1 = f.width - f.right;
  const y0 = f.height - f.bottom;
  const y1 = f.top;
  parts.push(`<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" height="${fmt(y0 - y1)}" fill="none" stroke="#444444" stroke-width="1"/>`);
  for (const t of ticks(f.xMin, f.xMax)) {
    const px = xPix(f, t);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 4)}" stroke="#444444" stroke-width="1"/>`);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y1)}" stroke="#dddddd" stroke-width="0.5"/>`);
    parts.push(text(px, y0 + 16, tickLabel(t), 10, "middle"));
  }
  for (const t of ticks(f.yMin, f.yMax)) {
    const py = yPix(f, t);
    parts.push(`<line x1="${fmt(x0 - 4)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#444444" stroke-width="1"/>`);
    parts.push(`<line x1="${fmt(x0)}" y1="${fmt(py)}" x2="${fmt(x1)}" y2="${fmt(py)}" stroke="#dddddd" stroke-width="0.5"/>`);
    parts.push(text(x0 - 7, py + 3.5, tickLabel(t), 10, "end"));
  }
  parts.push(text((x0 + x1) / 2, f.height - 8, xLabel, 12, "middle"));
  parts.push(`<text x="14" y="${fmt((y0 + y1) / 2)}" font-family="Helvetica, Arial, sans-serif" font-size="12" text-anchor="middle" fill="#333333" transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})">${escapeXml(yLabel)}</text>`);
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
