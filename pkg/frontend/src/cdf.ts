/**
 * Empirical CDF figure: one curve per event log, showing the
 * distribution of end-to-end delivery delays.
 */

import type { EventLogData } from "./events.js";
import { logLabel } from "./events.js";
import { ARCH_COLORS } from "./compare.js";
import { esc, linearScale, px, svgDocument, ticks } from "./svg.js";

export interface CdfPoint {
  x: number;
  f: number;
}

/** Step points (x_(i), (i+1)/n) of the sorted sample. */
export function empiricalCdf(values: number[]): CdfPoint[] {
  if (values.length === 0) {
    throw new Error("empirical CDF of an empty sample");
  }
  const sorted = [...values].sort((a, b) => a - b);
  return sorted.map((x, i) => ({ x, f: (i + 1) / sorted.length }));
}

export interface CdfSeries {
  label: string;
  delays: number[];
}

export function seriesFromLogs(logs: EventLogData[]): CdfSeries[] {
  const series = logs.map((log) => ({
    label: logLabel(log),
    delays: log.e2e.map((record) => record.delayMs),
  }));
  series.sort((a, b) => a.label.localeCompare(b.label));
  return series;
}

const EXTRA_COLORS = ["#c18401", "#a626a4", "#0184bc", "#986801"];

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 56, right: 24, bottom: 52, left: 64 };

export interface CdfOptions {
  title?: string;
}

export function renderCdfSvg(
  series: CdfSeries[],
  options: CdfOptions = {},
): string {
  const nonEmpty = series.filter((s) => s.delays.length > 0);
  if (nonEmpty.length === 0) {
    throw new Error("no delivery records to plot");
  }
  const title = options.title ?? "End-to-end delivery delay CDF";
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xMaxData = Math.max(...nonEmpty.map((s) => Math.max(...s.delays)));
  const xTicks = ticks(xMaxData);
  const xMax = xTicks[xTicks.length - 1] as number;
  const x = linearScale(0, xMax, MARGIN.left, MARGIN.left + innerW);
  const y = linearScale(0, 1, MARGIN.top + innerH, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<text x="${px(WIDTH / 2)}" y="28" text-anchor="middle" ` +
    `font-size="17" font-weight="600" fill="#202124">${esc(title)}</text>\n`,
  );

  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    const ty = y(tick);
    parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(ty)}" ` +
      `x2="${px(MARGIN.left + innerW)}" y2="${px(ty)}" ` +
      `stroke="#e8eaed" stroke-width="1"/>\n`,
    );
    parts.push(
      `<text x="${px(MARGIN.left - 8)}" y="${px(ty + 4)}" ` +
      `text-anchor="end" font-size="12" fill="#5f6368">` +
      `${tick.toFixed(2)}</text>\n`,
    );
  }
  for (const tick of xTicks) {
    const tx = x(tick);
    parts.push(
      `<line x1="${px(tx)}" y1="${px(MARGIN.top + innerH)}" ` +
      `x2="${px(tx)}" y2="${px(MARGIN.top + innerH + 5)}" ` +
      `stroke="#202124" stroke-width="1"/>\n`,
    );
    parts.push(
      `<text x="${px(tx)}" y="${px(MARGIN.top + innerH + 20)}" ` +
      `text-anchor="middle" font-size="12" fill="#5f6368">` +
      `${tick.toFixed(0)}</text>\n`,
    );
  }
  parts.push(
    `<text x="${px(MARGIN.left + innerW / 2)}" ` +
    `y="${px(HEIGHT - 12)}" text-anchor="middle" font-size="12" ` +
    `fill="#5f6368">delivery delay (ms)</text>\n`,
  );
  parts.push(
    `<text x="16" y="${px(MARGIN.top + innerH / 2)}" font-size="12" ` +
    `fill="#5f6368" text-anchor="middle" ` +
    `transform="rotate(-90 16 ${px(MARGIN.top + innerH / 2)})">` +
    `fraction delivered</text>\n`,
  );
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(MARGIN.top + innerH)}" ` +
    `x2="${px(MARGIN.left + innerW)}" y2="${px(MARGIN.top + innerH)}" ` +
    `stroke="#202124" stroke-width="1"/>\n`,
  );
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(MARGIN.top)}" ` +
    `x2="${px(MARGIN.left)}" y2="${px(MARGIN.top + innerH)}" ` +
    `stroke="#202124" stroke-width="1"/>\n`,
  );

  let extraIndex = 0;
  nonEmpty.forEach((s, seriesIndex) => {
    let color = ARCH_COLORS.get(s.label);
    if (color === undefined) {
      color = EXTRA_COLORS[extraIndex % EXTRA_COLORS.length] as string;
      extraIndex++;
    }
    const points = empiricalCdf(s.delays);
    const first = points[0] as CdfPoint;
    const coords: string[] = [`${px(x(first.x))},${px(y(0))}`];
    let prevF = 0;
    for (const p of points) {
      coords.push(`${px(x(p.x))},${px(y(prevF))}`);
      coords.push(`${px(x(p.x))},${px(y(p.f))}`);
      prevF = p.f;
    }
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="2" ` +
      `points="${coords.join(" ")}"/>\n`,
    );
    const legendY = MARGIN.top + 10 + seriesIndex * 20;
    const legendX = MARGIN.left + innerW - 150;
    parts.push(
      `<line x1="${px(legendX)}" y1="${px(legendY)}" ` +
      `x2="${px(legendX + 26)}" y2="${px(legendY)}" ` +
      `stroke="${color}" stroke-width="2"/>\n`,
    );
    parts.push(
      `<text x="${px(legendX + 32)}" y="${px(legendY + 4)}" ` +
      `font-size="13" fill="#202124">${esc(s.label)} ` +
      `(${s.delays.length})</text>\n`,
    );
  });

  return svgDocument(WIDTH, HEIGHT, parts.join(""));
}
