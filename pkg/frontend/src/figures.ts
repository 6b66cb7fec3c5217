/**
 * The four standard figures, each built from one artifact table.
 *
 * This tool computes no science: every number is read from the CSV.  The one
 * derived annotation, a fitted slope, is recomputed by plain least squares
 * on the table columns and must agree with the harness-reported value to
 * 1e-9, otherwise the render is refused (the artifact and tool disagree on
 * arithmetic, so something is stale or corrupt).
 */

import { numericColumn, stringColumn, Table } from "./csv.js";
import { leastSquaresSlope } from "./fit.js";
import { renderFigure, Series } from "./svg.js";

export class SlopeMismatchError extends Error {}

export const FIGURE_KINDS = [
  "radius-decay",
  "energy-drift",
  "sigma-scaling",
  "probe-ratios",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export const EXPECTED_SCHEMA: Record<FigureKind, string> = {
  "radius-decay": "gkdvlab.schedule.v1",
  "energy-drift": "gkdvlab.trace.v1",
  "sigma-scaling": "gkdvlab.sweep.v1",
  "probe-ratios": "gkdvlab.probes.v1",
};

const SLOPE_TOL = 1e-9;

function checkSlope(reported: number, recomputed: number, what: string): void {
  if (Math.abs(reported - recomputed) > SLOPE_TOL) {
    throw new SlopeMismatchError(
      `${what}: recomputed slope ${recomputed} differs from reported ${reported} ` +
        `by more than ${SLOPE_TOL}`,
    );
  }
}

export function radiusDecayFigure(table: Table): string {
  const T = numericColumn(table, "T");
  const theo = numericColumn(table, "sigma_theoretical");
  const meas = numericColumn(table, "sigma_measured");
  const k = numericColumn(table, "k")[0];
  const reported = numericColumn(table, "envelope_slope")[0];
  const fit = leastSquaresSlope(
    T.map((t) => Math.log(t)),
    theo.map((s) => Math.log(s)),
  );
  checkSlope(reported, fit.slope, "radius-decay envelope");
  const limitRate = (2 * k) / (k + 4);
  const series: Series[] = [
    { label: "measured radius", x: T, y: meas, color: "#1965b0", kind: "points" },
    { label: "scheduled envelope", x: T, y: theo, color: "#dc050c", kind: "both" },
  ];
  return renderFigure(series, {
    title: "radius of analyticity vs horizon",
    xLabel: "T",
    yLabel: "sigma",
    xLog: true,
    yLog: true,
    annotations: [
      `fitted envelope slope ${fit.slope.toPrecision(9)}`,
      `limit rate T^-${limitRate} (k=${k})`,
    ],
  });
}

export function energyDriftFigure(table: Table): string {
  const t = numericColumn(table, "t");
  const floor = 1e-17; // display floor for exact zeros on the log axis
  const drift = (vals: number[]) => {
    const base = Math.abs(vals[0]) > 0 ? Math.abs(vals[0]) : 1;
    return vals.map((v) => Math.max(Math.abs(v - vals[0]) / base, floor));
  };
  const series: Series[] = [
    { label: "mass drift", x: t, y: drift(numericColumn(table, "mass")), color: "#1965b0", kind: "line" },
    { label: "energy drift", x: t, y: drift(numericColumn(table, "energy")), color: "#dc050c", kind: "line" },
    { label: "e_sigma drift", x: t, y: drift(numericColumn(table, "e_sigma")), color: "#4eb265", kind: "line" },
    {
      label: "identity residual",
      x: t,
      y: numericColumn(table, "identity_residual").map((v) => Math.max(v, floor)),
      color: "#777777",
      kind: "line",
      dash: "5,3",
    },
  ];
  return renderFigure(series, {
    title: "conserved-quantity drift",
    xLabel: "t",
    yLabel: "relative drift",
    xLog: false,
    yLog: true,
    annotations: [],
  });
}

export function sigmaScalingFigure(table: Table): string {
  const sigma = numericColumn(table, "sigma");
  const dev = numericColumn(table, "deviation");
  const reported = numericColumn(table, "slope")[0];
  const fit = leastSquaresSlope(
    sigma.map((s) => Math.log(s)),
    dev.map((d) => Math.log(d)),
  );
  checkSlope(reported, fit.slope, "sigma-scaling");
  const line = sigma.map((s) => Math.exp(fit.intercept + fit.slope * Math.log(s)));
  const series: Series[] = [
    { label: "D(sigma)", x: sigma, y: dev, color: "#1965b0", kind: "points" },
    { label: "least-squares fit", x: sigma, y: line, color: "#dc050c", kind: "line", dash: "6,3" },
  ];
  return renderFigure(series, {
    title: "weighted-energy deviation scaling",
    xLabel: "sigma",
    yLabel: "sup_t |E_sigma(t) - E_sigma(0)|",
    xLog: true,
    yLog: true,
    annotations: [`fitted slope ${fit.slope.toPrecision(9)}`],
  });
}

export function probeRatiosFigure(table: Table): string {
  const names = stringColumn(table, "probe");
  const maxRatio = numericColumn(table, "max_ratio");
  const meanRatio = numericColumn(table, "mean_ratio");
  const growth = numericColumn(table, "growth_factor");
  const idx = names.map((_, i) => i + 1);
  const series: Series[] = [
    { label: "max ratio", x: idx, y: maxRatio, color: "#1965b0", kind: "both" },
    { label: "mean ratio", x: idx, y: meanRatio, color: "#4eb265", kind: "both" },
  ];
  const annotations = names.map((n, i) => {
    const g = Number.isFinite(growth[i]) ? growth[i].toPrecision(3) : "-";
    return `${i + 1}: ${n} (refinement growth ${g})`;
  });
  return renderFigure(series, {
    title: "inequality probe ratios",
    xLabel: "probe index",
    yLabel: "observed ratio",
    xLog: false,
    yLog: true,
    annotations,
  });
}

export function buildFigure(kind: FigureKind, table: Table): string {
  switch (kind) {
    case "radius-decay":
      return radiusDecayFigure(table);
    case "energy-drift":
      return energyDriftFigure(table);
    case "sigma-scaling":
      return sigmaScalingFigure(table);
    case "probe-ratios":
      return probeRatiosFigure(table);
  }
}
