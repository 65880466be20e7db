// Grouped bar chart rendering as a standalone SVG string.
//
// One group per application type, two bars per group (traditional, gsc).
// Pure string construction keeps the output deterministic and testable.

import { CASE_TYPES, METHODS, MetricsRow, valueFor, Method } from "./csv.js";

export interface ChartSpec {
  title: string;
  yLabel: string;
  field: "meanOccupiedMbps" | "meanDelayMs";
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };
const COLORS: Record<Method, string> = { traditional: "#5b6770", gsc: "#2a9d62" };

function niceCeiling(maxValue: number): number {
  if (maxValue <= 0) return 1;
  const magnitude = Math.pow(10, Math.floor(Math.log10(maxValue)));
  for (const step of [1, 2, 2.5, 5, 10]) {
    if (maxValue <= step * magnitude) return step * magnitude;
  }
  return 10 * magnitude;
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

export function renderGroupedBars(rows: MetricsRow[], spec: ChartSpec): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const maxValue = Math.max(
    ...CASE_TYPES.flatMap((c) => METHODS.map((m) => valueFor(rows, c, m, spec.field))),
  );
  const yMax = niceCeiling(maxValue);
  const groupW = plotW / CASE_TYPES.length;
  const barW = groupW / 3;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${spec.title}</text>`,
  );

  // y axis with four gridlines
  for (let i = 0; i <= 4; i++) {
    const value = (yMax * i) / 4;
    const y = MARGIN.top + plotH - (plotH * i) / 4;
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="#ddd"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="11">${fmt(value)}</text>`,
    );
  }
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${spec.yLabel}</text>`,
  );

  for (const [gi, caseType] of CASE_TYPES.entries()) {
    const groupX = MARGIN.left + gi * groupW;
    for (const [mi, method] of METHODS.entries()) {
      const value = valueFor(rows, caseType, method, spec.field);
      const barH = yMax > 0 ? (plotH * value) / yMax : 0;
      const x = groupX + groupW / 6 + mi * barW;
      const y = MARGIN.top + plotH - barH;
      parts.push(
        `<rect class="bar" data-case="${caseType}" data-method="${method}" data-value="${value}" x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${barW.toFixed(2)}" height="${barH.toFixed(2)}" fill="${COLORS[method]}"/>`,
      );
    }
    parts.push(
      `<text x="${groupX + groupW / 2}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="12">Type ${caseType}</text>`,
    );
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${WIDTH - MARGIN.right}" y2="${MARGIN.top + plotH}" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">Application type</text>`,
  );

  // legend
  for (const [mi, method] of METHODS.entries()) {
    const x = WIDTH - MARGIN.right - 150 + mi * 90;
    parts.push(`<rect x="${x}" y="34" width="12" height="12" fill="${COLORS[method]}"/>`);
    parts.push(`<text x="${x + 16}" y="44" font-size="12">${method}</text>`);
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export function bandwidthChart(rows: MetricsRow[]): string {
  return renderGroupedBars(rows, {
    title: "Mean occupied bandwidth per application type",
    yLabel: "Occupied bandwidth (Mbps)",
    field: "meanOccupiedMbps",
  });
}

export function delayChart(rows: MetricsRow[]): string {
  return renderGroupedBars(rows, {
    title: "Mean end-to-end delay per application type",
    yLabel: "End-to-end delay (ms)",
    field: "meanDelayMs",
  });
}
