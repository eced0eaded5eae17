/**
 * Architecture comparison figure: one bar per architecture showing the
 * mean end-to-end delivery latency pooled across runs (equal weight per
 * run), the fastest architecture highlighted.
 */

import type { RunRow } from "./results.js";
import { esc, linearScale, px, svgDocument, ticks } from "./svg.js";

export interface CompareDatum {
  arch: string;
  meanMs: number;
  runs: number;
}

export const ARCH_COLORS: ReadonlyMap<string, string> = new Map([
  ["plf", "#9aa0a6"],
  ["bdl", "#4c72b0"],
  ["hybrid", "#2f9e44"],
]);

const FALLBACK_COLOR = "#c18401";
const HIGHLIGHT_STROKE = "#1b5e20";

/**
 * Pool rows by architecture: mean of per-run means, equal weight per
 * run.  Rows without samples are skipped; an architecture whose rows
 * all lack samples is dropped.  Result is sorted slowest first so the
 * figure reads left to right toward the winner.
 */
export function summarizeByArch(rows: RunRow[]): CompareDatum[] {
  const pools = new Map<string, number[]>();
  for (const row of rows) {
    if (row.meanMs === null) {
      continue;
    }
    const pool = pools.get(row.arch);
    if (pool === undefined) {
      pools.set(row.arch, [row.meanMs]);
    } else {
      pool.push(row.meanMs);
    }
  }
  const data: CompareDatum[] = [];
  for (const [arch, means] of pools) {
    const total = means.reduce((a, b) => a + b, 0);
    data.push({ arch, meanMs: total / means.length, runs: means.length });
  }
  data.sort((a, b) => b.meanMs - a.meanMs || a.arch.localeCompare(b.arch));
  return data;
}

export interface CompareOptions {
  title?: string;
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 56, right: 24, bottom: 56, left: 72 };

export function renderCompareSvg(
  rows: RunRow[],
  options: CompareOptions = {},
): string {
  const data = summarizeByArch(rows);
  if (data.length === 0) {
    throw new Error("no runs with delivered samples to plot");
  }
  const title = options.title ?? "Mean first-to-last delivery latency";
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const yMaxData = Math.max(...data.map((d) => d.meanMs));
  const yTicks = ticks(yMaxData * 1.1);
  const yMax = yTicks[yTicks.length - 1] as number;
  const y = linearScale(0, yMax, MARGIN.top + innerH, MARGIN.top);
  const fastest = data.reduce((a, b) => (b.meanMs < a.meanMs ? b : a));

  const parts: string[] = [];
  parts.push(
    `<text x="${px(WIDTH / 2)}" y="28" text-anchor="middle" ` +
    `font-size="17" font-weight="600" fill="#202124">${esc(title)}</text>\n`,
  );

  for (const tick of yTicks) {
    const ty = y(tick);
    parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(ty)}" ` +
      `x2="${px(WIDTH - MARGIN.right)}" y2="${px(ty)}" ` +
      `stroke="#e8eaed" stroke-width="1"/>\n`,
    );
    parts.push(
      `<text x="${px(MARGIN.left - 8)}" y="${px(ty + 4)}" ` +
      `text-anchor="end" font-size="12" fill="#5f6368">` +
      `${tick.toFixed(0)}</text>\n`,
    );
  }
  parts.push(
    `<text x="18" y="${px(MARGIN.top + innerH / 2)}" font-size="12" ` +
    `fill="#5f6368" text-anchor="middle" ` +
    `transform="rotate(-90 18 ${px(MARGIN.top + innerH / 2)})">` +
    `mean latency (ms)</text>\n`,
  );

  const slot = innerW / data.length;
  const barW = slot * 0.56;
  data.forEach((d, i) => {
    const cx = MARGIN.left + slot * (i + 0.5);
    const x0 = cx - barW / 2;
    const yTop = y(d.meanMs);
    const h = MARGIN.top + innerH - yTop;
    const fill = ARCH_COLORS.get(d.arch) ?? FALLBACK_COLOR;
    const highlight =
      d === fastest
        ? ` stroke="${HIGHLIGHT_STROKE}" stroke-width="2.5"`
        : "";
    parts.push(
      `<rect x="${px(x0)}" y="${px(yTop)}" width="${px(barW)}" ` +
      `height="${px(h)}" fill="${fill}"${highlight}/>\n`,
    );
    parts.push(
      `<text x="${px(cx)}" y="${px(yTop - 8)}" text-anchor="middle" ` +
      `font-size="13" font-weight="600" fill="#202124">` +
      `${d.meanMs.toFixed(1)} ms</text>\n`,
    );
    const label = d === fastest ? `${d.arch} (fastest)` : d.arch;
    parts.push(
      `<text x="${px(cx)}" y="${px(MARGIN.top + innerH + 22)}" ` +
      `text-anchor="middle" font-size="13" fill="#202124">` +
      `${esc(label)}</text>\n`,
    );
    parts.push(
      `<text x="${px(cx)}" y="${px(MARGIN.top + innerH + 40)}" ` +
      `text-anchor="middle" font-size="11" fill="#5f6368">` +
      `${d.runs} runs</text>\n`,
    );
  });

  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(MARGIN.top + innerH)}" ` +
    `x2="${px(WIDTH - MARGIN.right)}" y2="${px(MARGIN.top + innerH)}" ` +
    `stroke="#202124" stroke-width="1"/>\n`,
  );

  return svgDocument(WIDTH, HEIGHT, parts.join(""));
}
