import type { Bar, BarCluster, Metric } from "./bars.js";
import type { CdfCurve } from "./curves.js";
import { orderBy, PRECODER_ORDER, SCHEME_ORDER, schemeColor } from "./style.js";

export const WIDTH = 640;
export const HEIGHT = 440;
export const MARGIN = { top: 18, right: 16, bottom: 48, left: 62 };

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const DASHES = ["", "6 3", "2 2", "9 3 2 3"];

/** Fixed coordinate formatting keeps the output byte-identical across runs. */
export function fmt(value: number): string {
  return value.toFixed(2);
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function niceStep(rough: number): number {
  const power = Math.pow(10, Math.floor(Math.log10(rough)));
  for (const mult of [1, 2, 5, 10]) {
    if (mult * power >= rough) {
      return mult * power;
    }
  }
  return 10 * power;
}

/** Tick positions 0, step, 2*step, ... covering [0, max] with a 1/2/5 step. */
export function ticksFromZero(max: number, target = 6): number[] {
  if (!(max > 0)) {
    return [0, 1];
  }
  const step = niceStep(max / target);
  const count = Math.max(1, Math.ceil(max / step - 1e-9));
  const ticks: number[] = [];
  for (let i = 0; i <= count; i++) {
    ticks.push(Number((i * step).toFixed(10)));
  }
  return ticks;
}

export interface CdfGeometry {
  xMax: number;
  xTicks: number[];
  sx: (x: number) => number;
  sy: (y: number) => number;
}

/** The x/y pixel transforms used by the CDF renderer, exposed for tests. */
export function cdfGeometry(curves: CdfCurve[]): CdfGeometry {
  let sampleMax = 0;
  for (const curve of curves) {
    const last = curve.points[curve.points.length - 1];
    if (last && last.x > sampleMax) {
      sampleMax = last.x;
    }
  }
  const xTicks = ticksFromZero(sampleMax);
  const xMax = xTicks[xTicks.length - 1];
  const sx = (x: number) => MARGIN.left + (x / xMax) * PLOT_W;
  const sy = (y: number) => MARGIN.top + (1 - y) * PLOT_H;
  return { xMax, xTicks, sx, sy };
}

function axisBox(): string {
  return `<rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" width="${fmt(PLOT_W)}" height="${fmt(
    PLOT_H
  )}" fill="none" stroke="#333" stroke-width="1"/>`;
}

function xLabel(text: string): string {
  const x = MARGIN.left + PLOT_W / 2;
  const y = HEIGHT - 10;
  return `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="middle" font-size="13">${escapeXml(text)}</text>`;
}

function yLabel(text: string): string {
  const x = 14;
  const y = MARGIN.top + PLOT_H / 2;
  return `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="middle" font-size="13" transform="rotate(-90 ${fmt(
    x
  )} ${fmt(y)})">${escapeXml(text)}</text>`;
}

function svgOpen(): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n`
  );
}

/** Step polyline through (x_i, i/n): every plotting position is a vertex. */
function stepPoints(curve: CdfCurve, geo: CdfGeometry): string {
  const tokens: string[] = [];
  let last = "";
  const push = (x: number, y: number) => {
    const token = `${fmt(geo.sx(x))},${fmt(geo.sy(y))}`;
    if (token !== last) {
      tokens.push(token);
      last = token;
    }
  };
  const points = curve.points;
  push(points[0].x, 0);
  for (let i = 0; i < points.length; i++) {
    if (i > 0) {
      push(points[i].x, points[i - 1].y);
    }
    push(points[i].x, points[i].y);
  }
  return tokens.join(" ");
}

export function renderCdfSvg(curves: CdfCurve[]): string {
  const geo = cdfGeometry(curves);
  const schemes = orderBy(curves.map((c) => c.scheme), SCHEME_ORDER);
  const precoders = orderBy(curves.map((c) => c.precoder), PRECODER_ORDER);

  let body = svgOpen();
  body += axisBox() + "\n";

  for (const tick of geo.xTicks) {
    const x = fmt(geo.sx(tick));
    const yBase = MARGIN.top + PLOT_H;
    body += `<line x1="${x}" y1="${fmt(yBase)}" x2="${x}" y2="${fmt(yBase + 5)}" stroke="#333"/>`;
    body += `<text x="${x}" y="${fmt(yBase + 18)}" text-anchor="middle" font-size="11">${tick}</text>\n`;
  }
  for (let i = 0; i <= 5; i++) {
    const value = i / 5;
    const y = fmt(geo.sy(value));
    body += `<line x1="${fmt(MARGIN.left - 5)}" y1="${y}" x2="${fmt(MARGIN.left)}" y2="${y}" stroke="#333"/>`;
    body += `<text x="${fmt(MARGIN.left - 9)}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${value.toFixed(
      1
    )}</text>\n`;
  }

  const guideY = fmt(geo.sy(0.1));
  body += `<line class="guide" x1="${fmt(MARGIN.left)}" y1="${guideY}" x2="${fmt(
    MARGIN.left + PLOT_W
  )}" y2="${guideY}" stroke="#999" stroke-dasharray="3 3"/>\n`;

  for (const curve of curves) {
    const color = schemeColor(curve.scheme, schemes);
    const dash = DASHES[precoders.indexOf(curve.precoder) % DASHES.length];
    const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    body += `<polyline data-scheme="${escapeXml(curve.scheme)}" data-precoder="${escapeXml(
      curve.precoder
    )}" fill="none" stroke="${color}" stroke-width="1.5"${dashAttr} points="${stepPoints(curve, geo)}"/>\n`;
  }

  let legendY = MARGIN.top + 14;
  const legendX = MARGIN.left + PLOT_W - 150;
  for (const curve of curves) {
    const color = schemeColor(curve.scheme, schemes);
    const dash = DASHES[precoders.indexOf(curve.precoder) % DASHES.length];
    const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    body += `<line x1="${fmt(legendX)}" y1="${fmt(legendY - 4)}" x2="${fmt(legendX + 26)}" y2="${fmt(
      legendY - 4
    )}" stroke="${color}" stroke-width="1.5"${dashAttr}/>`;
    body += `<text x="${fmt(legendX + 32)}" y="${fmt(legendY)}" font-size="11">${escapeXml(curve.label)}</text>\n`;
    legendY += 15;
  }

  body += xLabel("spectral efficiency per UE (bit/s/Hz)");
  body += yLabel("cumulative probability");
  body += "</svg>\n";
  return body;
}

export function renderBarsSvg(clusters: BarCluster[], metric: Metric): string {
  const allBars: Bar[] = clusters.flatMap((c) => c.bars);
  const schemes = orderBy(allBars.map((b) => b.scheme), SCHEME_ORDER);
  const yTicks = ticksFromZero(Math.max(...allBars.map((b) => b.value)));
  const yMax = yTicks[yTicks.length - 1];
  const sy = (v: number) => MARGIN.top + (1 - v / yMax) * PLOT_H;

  let body = svgOpen();
  body += axisBox() + "\n";

  for (const tick of yTicks) {
    const y = fmt(sy(tick));
    body += `<line x1="${fmt(MARGIN.left - 5)}" y1="${y}" x2="${fmt(MARGIN.left)}" y2="${y}" stroke="#333"/>`;
    body += `<text x="${fmt(MARGIN.left - 9)}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${tick}</text>\n`;
  }

  const clusterW = PLOT_W / clusters.length;
  const maxBars = Math.max(...clusters.map((c) => c.bars.length));
  const barW = (clusterW * 0.82) / maxBars;
  const baseline = MARGIN.top + PLOT_H;

  clusters.forEach((cluster, ci) => {
    const clusterLeft = MARGIN.left + ci * clusterW + clusterW * 0.09;
    cluster.bars.forEach((bar, bi) => {
      const x = clusterLeft + bi * barW;
      const top = sy(bar.value);
      const color = schemeColor(bar.scheme, schemes);
      body += `<rect data-scheme="${escapeXml(bar.scheme)}" data-precoder="${escapeXml(
        bar.precoder
      )}" data-value="${escapeXml(bar.rawValue)}" x="${fmt(x)}" y="${fmt(top)}" width="${fmt(
        barW * 0.92
      )}" height="${fmt(baseline - top)}" fill="${color}">` +
        `<title>${escapeXml(`${bar.scheme} ${bar.precoder}: ${bar.rawValue}`)}</title></rect>\n`;
    });
    const center = MARGIN.left + ci * clusterW + clusterW / 2;
    body += `<text x="${fmt(center)}" y="${fmt(baseline + 18)}" text-anchor="middle" font-size="12">${escapeXml(
      cluster.precoder
    )}</text>\n`;
  });

  let legendX = MARGIN.left + 8;
  const legendY = MARGIN.top + 14;
  for (const scheme of schemes) {
    const color = schemeColor(scheme, schemes);
    body += `<rect x="${fmt(legendX)}" y="${fmt(legendY - 9)}" width="10" height="10" fill="${color}"/>`;
    body += `<text x="${fmt(legendX + 14)}" y="${fmt(legendY)}" font-size="11">${escapeXml(scheme)}</text>\n`;
    legendX += 14 + 7 * scheme.length + 18;
  }

  body += xLabel("precoder");
  body += yLabel(metric.axisTitle);
  body += "</svg>\n";
  return body;
}
