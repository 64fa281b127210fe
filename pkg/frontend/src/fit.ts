/** Least-squares rate fit in log2-log2 scale: v ~ K n^(-nu). */

export interface RateFit {
  nu: number;
  log2k: number;
}

export function fitRate(pairs: Array<[number, number]>): RateFit {
  const distinct = new Set(pairs.map(([n]) => n));
  if (distinct.size < 2) {
    throw new Error("rate fit needs at least two distinct n values");
  }
  const xs = pairs.map(([n]) => Math.log2(n));
  const ys = pairs.map(([, v]) => Math.log2(v));
  const mx = xs.reduce((a, b) => a + b, 0) / xs.length;
  const my = ys.reduce((a, b) => a + b, 0) / ys.length;
  let sxy = 0;
  let sxx = 0;
  for (let i = 0; i < xs.length; i++) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const slope = sxy / sxx;
  return { nu: -slope, log2k: my - slope * mx };
}
