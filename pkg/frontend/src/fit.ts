/**
 * Mean-centered least-squares line fit — the same textbook formula the
 * harness uses for its slope columns, so recomputed values agree to
 * floating-point accuracy (the cross-check demands 1e-9).
 */

export function leastSquaresSlope(x: number[], y: number[]): { slope: number; intercept: number } {
  if (x.length !== y.length || x.length === 0) {
    throw new Error("fit needs equally sized, nonempty samples");
  }
  const n = x.length;
  let xm = 0;
  let ym = 0;
  for (let i = 0; i < n; i++) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  if (den === 0) {
    return { slope: 0, intercept: ym };
  }
  const slope = num / den;
  return { slope, intercept: ym - slope * xm };
}
