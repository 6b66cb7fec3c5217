/**
 * Minimal deterministic SVG plotting: fixed canvas, linear/log axes, series
 * as polylines or markers, text annotations.  Figure metadata (series and
 * point counts, axis ranges) is embedded as data- attributes on the root
 * group so tests can verify renders without rasterizing.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  kind: "line" | "points" | "both";
  dash?: string;
}

export interface AxesSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog: boolean;
  yLog: boolean;
  annotations: string[];
}

const W = 760;
const H = 520;
const MARGIN = { left: 78, right: 24, top: 46, bottom: 58 };

function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  return v.toPrecision(6).replace(/\.?0+(e|$)/, "$1");
}

function transform(v: number, log: boolean): number {
  return log ? Math.log10(v) : v;
}

function finiteValues(series: Series[], pick: (s: Series) => number[], log: boolean): number[] {
  const out: number[] = [];
  for (const s of series) {
    for (const v of pick(s)) {
      if (Number.isFinite(v) && (!log || v > 0)) out.push(transform(v, log));
    }
  }
  return out;
}

export function renderFigure(series: Series[], spec: AxesSpec): string {
  const xs = finiteValues(series, (s) => s.x, spec.xLog);
  const ys = finiteValues(series, (s) => s.y, spec.yLog);
  if (xs.length === 0 || ys.length === 0) {
    throw new Error("nothing to plot: no finite data points");
  }
  let x0 = Math.min(...xs);
  let x1 = Math.max(...xs);
  let y0 = Math.min(...ys);
  let y1 = Math.max(...ys);
  if (x1 === x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 === y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const padY = 0.06 * (y1 - y0);
  y0 -= padY;
  y1 += padY;
  const plotW = W - MARGIN.left - MARGIN.right;
  const plotH = H - MARGIN.top - MARGIN.bottom;
  const px = (v: number) => MARGIN.left + ((transform(v, spec.xLog) - x0) / (x1 - x0)) * plotW;
  const py = (v: number) => MARGIN.top + plotH - ((transform(v, spec.yLog) - y0) / (y1 - y0)) * plotH;

  const nPoints = series.reduce((acc, s) => acc + s.x.length, 0);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
  );
  parts.push(
    `<g data-series="${series.length}" data-points="${nPoints}" ` +
      `data-xmin="${fmt(x0)}" data-xmax="${fmt(x1)}" ` +
      `data-ymin="${fmt(y0)}" data-ymax="${fmt(y1)}" ` +
      `data-xlog="${spec.xLog}" data-ylog="${spec.yLog}">`,
  );
  parts.push(`<rect x="0" y="0" width="${W}" height="${H}" fill="white"/>`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${W / 2}" y="24" text-anchor="middle" font-size="16" font-family="monospace">${spec.title}</text>`,
  );
  parts.push(
    `<text x="${W / 2}" y="${H - 14}" text-anchor="middle" font-size="13" font-family="monospace">${spec.xLabel}</text>`,
  );
  parts.push(
    `<text x="20" y="${H / 2}" text-anchor="middle" font-size="13" font-family="monospace" ` +
      `transform="rotate(-90 20 ${H / 2})">${spec.yLabel}</text>`,
  );

  // axis ticks: four per axis, value labels in the transformed scale
  for (let i = 0; i <= 4; i++) {
    const fx = x0 + (i / 4) * (x1 - x0);
    const gx = MARGIN.left + (i / 4) * plotW;
    const labelX = spec.xLog ? `1e${fmt(fx)}` : fmt(fx);
    parts.push(
      `<line x1="${gx}" y1="${MARGIN.top + plotH}" x2="${gx}" y2="${MARGIN.top + plotH + 5}" stroke="#444"/>`,
      `<text x="${gx}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="11" font-family="monospace">${labelX}</text>`,
    );
    const fy = y0 + (i / 4) * (y1 - y0);
    const gy = MARGIN.top + plotH - (i / 4) * plotH;
    const labelY = spec.yLog ? `1e${fmt(fy)}` : fmt(fy);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${gy}" x2="${MARGIN.left}" y2="${gy}" stroke="#444"/>`,
      `<text x="${MARGIN.left - 9}" y="${gy + 4}" text-anchor="end" font-size="11" font-family="monospace">${labelY}</text>`,
    );
  }

  for (const s of series) {
    const pts: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      const vx = s.x[i];
      const vy = s.y[i];
      if (!Number.isFinite(vx) || !Number.isFinite(vy)) continue;
      if ((spec.xLog && vx <= 0) || (spec.yLog && vy <= 0)) continue;
      pts.push(`${fmt(px(vx))},${fmt(py(vy))}`);
    }
    if (pts.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    if (s.kind === "line" || s.kind === "both") {
      parts.push(
        `<polyline data-label="${s.label}" points="${pts.join(" ")}" fill="none" ` +
          `stroke="${s.color}" stroke-width="1.6"${dash}/>`,
      );
    }
    if (s.kind === "points" || s.kind === "both") {
      for (const p of pts) {
        const [cx, cy] = p.split(",");
        parts.push(`<circle data-label="${s.label}" cx="${cx}" cy="${cy}" r="3.4" fill="${s.color}"/>`);
      }
    }
  }

  // legend and annotations
  let ly = MARGIN.top + 16;
  for (const s of series) {
    parts.push(
      `<rect x="${W - MARGIN.right - 190}" y="${ly - 9}" width="11" height="11" fill="${s.color}"/>`,
      `<text x="${W - MARGIN.right - 174}" y="${ly}" font-size="12" font-family="monospace">${s.label}</text>`,
    );
    ly += 18;
  }
  for (const note of spec.annotations) {
    parts.push(
      `<text class="annotation" x="${MARGIN.left + 10}" y="${ly}" font-size="12" font-family="monospace">${note}</text>`,
    );
    ly += 18;
  }
  parts.push("</g></svg>");
  return parts.join("\n") + "\n";
}
