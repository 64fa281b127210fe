import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { readCsv, requireColumns } from "../src/csv.js";
import { fitRate } from "../src/fit.js";
import { loadResultsSeries, renderLoglog } from "../src/loglog.js";

const SAMPLE = path.join(__dirname, "..", "sample", "results.csv");

function tmpFile(name: string, content: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "condens-plot-"));
  const p = path.join(dir, name);
  fs.writeFileSync(p, content);
  return p;
}

describe("renderLoglog", () => {
  it("renders the shipped sample with one legend entry per series", () => {
    const svg = renderLoglog(SAMPLE);
    expect(svg).toContain("<svg");
    expect(svg).toContain("cde/mc");
    expect(svg).toContain("cde/lat-s");
    const legendEntries = svg.match(/nu=/g) ?? [];
    expect(legendEntries.length).toBe(2);
  });

  it("matches the upstream fitted slope to 2 decimals", () => {
    // results.csv carries nu_hat computed by the producing package; the
    // annotation recomputed here must agree through the printed digits
    const table = readCsv(SAMPLE);
    const cols = requireColumns(table, ["pointset", "n", "iv", "nu_hat"], SAMPLE);
    const byPointset = new Map<string, Array<[number, number]>>();
    const upstream = new Map<string, number>();
    for (const row of table.rows) {
      const ps = row[cols.get("pointset")!];
      if (!byPointset.has(ps)) byPointset.set(ps, []);
      byPointset.get(ps)!.push([Number(row[cols.get("n")!]), Number(row[cols.get("iv")!])]);
      upstream.set(ps, Number(row[cols.get("nu_hat")!]));
    }
    const svg = renderLoglog(SAMPLE);
    for (const [ps, pairs] of byPointset) {
      const mine = fitRate(pairs).nu;
      expect(Math.abs(mine - upstream.get(ps)!)).toBeLessThan(0.005);
      expect(svg).toContain(`nu=${mine.toFixed(2)}`);
    }
  });

  it("is a pure function of the input bytes", () => {
    expect(renderLoglog(SAMPLE)).toBe(renderLoglog(SAMPLE));
    expect(renderLoglog(SAMPLE)).not.toMatch(/date|time/i);
  });

  it("rejects empty input", () => {
    const p = tmpFile("empty.csv", "model,variant,estimator,pointset,n,iv\n");
    expect(() => renderLoglog(p)).toThrow(/no data rows/);
  });

  it("rejects schema mismatches with the offending name", () => {
    const p = tmpFile("bad.csv", "model,n,value\nm,1024,0.5\n");
    expect(() => renderLoglog(p)).toThrow(/missing column 'estimator'/);
  });

  it("rejects non-numeric cells with a line number", () => {
    const p = tmpFile(
      "nan.csv",
      "estimator,pointset,n,iv\ncde,mc,1024,oops\n"
    );
    expect(() => renderLoglog(p)).toThrow(/:2:/);
  });

  it("loads series sorted and grouped", () => {
    const series = loadResultsSeries(SAMPLE);
    expect(series.map((s) => s.key)).toEqual(["cde/lat-s", "cde/mc"]);
    for (const s of series) {
      expect(s.points.length).toBe(5);
      expect(Number.isFinite(s.nu)).toBe(true);
    }
  });
});
