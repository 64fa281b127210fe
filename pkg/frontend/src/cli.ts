/**
 * condens-plot --kind {loglog|density|realizations} --in file.csv --out fig.svg
 *
 * Renders static SVG figures from persisted condens CSVs; no coupling to
 * the Python package beyond the file formats.
 */

import * as fs from "fs";
import { renderDensity } from "./density.js";
import { renderLoglog } from "./loglog.js";

interface Args {
  kind: string;
  inPath: string;
  outPath: string;
  yLabel: string;
}

export function parseArgs(argv: string[]): Args {
  const get = (flag: string): string | undefined => {
    const at = argv.indexOf(flag);
    return at >= 0 && at + 1 < argv.length ? argv[at + 1] : undefined;
  };
  const kind = get("--kind");
  const inPath = get("--in");
  const outPath = get("--out");
  if (!kind || !inPath || !outPath) {
    throw new Error(
      "usage: condens-plot --kind {loglog|density|realizations} --in data.csv --out fig.svg"
    );
  }
  if (!["loglog", "density", "realizations"].includes(kind)) {
    throw new Error(`unknown plot kind '${kind}'; use loglog, density or realizations`);
  }
  return { kind, inPath, outPath, yLabel: get("--ylabel") ?? "IV" };
}

export function run(argv: string[]): void {
  const args = parseArgs(argv);
  let svg: string;
  if (args.kind === "loglog") {
    svg = renderLoglog(args.inPath, args.yLabel);
  } else {
    svg = renderDensity(args.inPath, args.kind === "realizations");
  }
  fs.writeFileSync(args.outPath, svg);
  process.stdout.write(`${args.outPath}: ${Buffer.byteLength(svg)} bytes\n`);
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  try {
    run(process.argv.slice(2));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(1);
  }
}
