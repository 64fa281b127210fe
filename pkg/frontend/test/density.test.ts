import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { loadDensityDump, renderDensity } from "../src/density.js";
import { parseArgs, run } from "../src/cli.js";

const SAMPLE = path.join(__dirname, "..", "sample", "density.csv");

function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "condens-plot-"));
}

describe("renderDensity", () => {
  it("draws the mean curve and stderr band from the sample", () => {
    const svg = renderDensity(SAMPLE, false);
    expect(svg).toContain("<svg");
    expect(svg).toContain("<polygon"); // the band
    expect(svg).toContain("grand mean +- stderr");
  });

  it("band edges are mean +- stderr from the CSV", () => {
    const dump = loadDensityDump(SAMPLE);
    for (let i = 0; i < dump.x.length; i += 17) {
      expect(dump.se[i]).toBeGreaterThanOrEqual(0);
    }
    expect(dump.realizations.length).toBe(5);
  });

  it("overlays individual realizations when asked", () => {
    const plain = renderDensity(SAMPLE, false);
    const withReal = renderDensity(SAMPLE, true);
    const count = (s: string) => (s.match(/<polyline/g) ?? []).length;
    expect(count(withReal)).toBe(count(plain) + 5);
    expect(withReal).toContain("5 realizations");
  });

  it("is byte-stable", () => {
    expect(renderDensity(SAMPLE, true)).toBe(renderDensity(SAMPLE, true));
  });

  it("rejects empty input", () => {
    const p = path.join(tmpDir(), "empty.csv");
    fs.writeFileSync(p, "x,fhat,stderr\n");
    expect(() => renderDensity(p, false)).toThrow(/no data rows/);
  });

  it("rejects a missing stderr column", () => {
    const p = path.join(tmpDir(), "bad.csv");
    fs.writeFileSync(p, "x,fhat\n0.5,1.0\n");
    expect(() => renderDensity(p, false)).toThrow(/missing column 'stderr'/);
  });
});

describe("cli", () => {
  it("parses and runs end to end", () => {
    const out = path.join(tmpDir(), "fig.svg");
    run(["--kind", "density", "--in", SAMPLE, "--out", out]);
    expect(fs.existsSync(out)).toBe(true);
    expect(fs.readFileSync(out, "utf-8")).toContain("<svg");
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(() => parseArgs(["--kind", "pie", "--in", "a", "--out", "b"]))
      .toThrow(/unknown plot kind/);
    expect(() => parseArgs(["--kind", "loglog"])).toThrow(/usage/);
  });
});
