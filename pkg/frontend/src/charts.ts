// Dashboard rendering: score table, kiviat (radar) and bar charts as SVG
// strings. Axis values clamp at the crop threshold for drawing only; the
// tooltip always carries the true count. Score cells reuse the preformatted
// percentage strings from the service verbatim.

import type { ChartSeriesObj, ReportObj } from "./api.js";
import { escapeHtml } from "./highlight.js";

export interface AxisPoint {
  plotted: number;
  tooltip: string;
  clamped: boolean;
}

export function clampAxisValue(value: number, cropAt: number | null): AxisPoint {
  if (cropAt !== null && value > cropAt) {
    return { plotted: cropAt, tooltip: String(value), clamped: true };
  }
  return { plotted: value, tooltip: String(value), clamped: false };
}

/** Radial scale ceiling: the crop threshold when set, else the data maximum. */
export function chartScaleMax(series: ChartSeriesObj): number {
  const top = Math.max(0, ...series.series.flatMap((s) => s.counts));
  const cropped = series.crop_at !== null ? Math.min(top, series.crop_at) : top;
  return Math.max(1, cropped);
}

function polygonPoints(
  counts: number[],
  cropAt: number | null,
  cx: number,
  cy: number,
  radius: number,
  scaleMax: number,
): { x: number; y: number; point: AxisPoint }[] {
  return counts.map((value, i) => {
    const point = clampAxisValue(value, cropAt);
    const angle = (2 * Math.PI * i) / counts.length - Math.PI / 2;
    const r = (Math.min(point.plotted, scaleMax) / scaleMax) * radius;
    return { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle), point };
  });
}

const SIZE = 360;
const CENTER = SIZE / 2;
const RADIUS = 130;

export function renderKiviatSvg(
  series: ChartSeriesObj,
  colors: Record<string, string>,
): string {
  const n = series.axes.length;
  const scaleMax = chartScaleMax(series);
  const parts: string[] = [
    `<svg viewBox="0 0 ${SIZE} ${SIZE}" class="kiviat" role="img">`,
  ];
  for (const ring of [0.25, 0.5, 0.75, 1]) {
    const ringPoints = series.axes
      .map((_, i) => {
        const angle = (2 * Math.PI * i) / n - Math.PI / 2;
        return `${CENTER + RADIUS * ring * Math.cos(angle)},${CENTER + RADIUS * ring * Math.sin(angle)}`;
      })
      .join(" ");
    parts.push(`<polygon class="grid" points="${ringPoints}" />`);
  }
  series.axes.forEach((axis, i) => {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    const x = CENTER + (RADIUS + 24) * Math.cos(angle);
    const y = CENTER + (RADIUS + 24) * Math.sin(angle);
    parts.push(
      `<text class="axis" x="${x.toFixed(1)}" y="${y.toFixed(1)}" text-anchor="middle">${escapeHtml(axis)}</text>`,
    );
  });
  for (const row of series.series) {
    const pts = polygonPoints(row.counts, series.crop_at, CENTER, CENTER, RADIUS, scaleMax);
    const outline = pts.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
    const color = colors[row.system] ?? "#888";
    parts.push(
      `<g class="system" data-system="${escapeHtml(row.system)}">` +
        `<polygon class="shape" points="${outline}" style="stroke:${color};fill:${color};fill-opacity:.12" />` +
        pts
          .map(
            (p, i) =>
              `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="3" style="fill:${color}"` +
              `${p.point.clamped ? ' class="clamped"' : ""}>` +
              `<title>${escapeHtml(row.system)} ${escapeHtml(series.axes[i])}: ${p.point.tooltip}</title>` +
              `</circle>`,
          )
          .join("") +
        `</g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderBarsSvg(
  series: ChartSeriesObj,
  colors: Record<string, string>,
): string {
  const scaleMax = chartScaleMax(series);
  const groupWidth = 34 * series.series.length + 22;
  const width = Math.max(320, series.axes.length * groupWidth);
  const height = 200;
  const parts = [`<svg viewBox="0 0 ${width} ${height}" class="bars" role="img">`];
  series.axes.forEach((axis, ai) => {
    const x0 = ai * groupWidth;
    parts.push(
      `<text class="axis" x="${x0 + groupWidth / 2}" y="${height - 4}" text-anchor="middle">${escapeHtml(axis)}</text>`,
    );
    series.series.forEach((row, si) => {
      const point = clampAxisValue(row.counts[ai], series.crop_at);
      const barHeight = (Math.min(point.plotted, scaleMax) / scaleMax) * (height - 40);
      const x = x0 + 10 + si * 34;
      const y = height - 20 - barHeight;
      const color = colors[row.system] ?? "#888";
      parts.push(
        `<rect x="${x}" y="${y.toFixed(1)}" width="26" height="${barHeight.toFixed(1)}"` +
          ` style="fill:${color}"${point.clamped ? ' class="clamped"' : ""}>` +
          `<title>${escapeHtml(row.system)} ${escapeHtml(axis)}: ${point.tooltip}</title></rect>`,
      );
    });
  });
  parts.push("</svg>");
  return parts.join("");
}

/** Table cells for the score dashboard. The percentage strings come from the
 * service response untouched; this function must never reformat them. */
export function scoreTableRows(reports: ReportObj[]): string[][] {
  return reports.map((r) => [
    r.dataset,
    r.system,
    r.strategy,
    r.precision_pct,
    r.recall_pct,
    r.f2_pct,
  ]);
}

export function renderScoreTable(reports: ReportObj[]): string {
  const head = ["dataset", "system", "strategy", "P %", "R %", "F2 %"];
  const rows = scoreTableRows(reports);
  return (
    `<table class="scores"><thead><tr>` +
    head.map((h) => `<th>${escapeHtml(h)}</th>`).join("") +
    `</tr></thead><tbody>` +
    rows
      .map(
        (cells) =>
          `<tr>` + cells.map((c) => `<td>${escapeHtml(c)}</td>`).join("") + `</tr>`,
      )
      .join("") +
    `</tbody></table>`
  );
}
