import { describe, expect, it } from "vitest";

import { renderCompareSvg, summarizeByArch } from "../src/compare.js";
import type { RunRow } from "../src/results.js";

function row(arch: string, seed: number, meanMs: number | null): RunRow {
  return {
    arch,
    seed,
    samples: meanMs === null ? 0 : 100,
    meanMs,
    p50Ms: meanMs,
    p95Ms: meanMs,
    p99Ms: meanMs,
    pdr: meanMs === null ? null : 1,
    configHash: "0000000000000000",
  };
}

describe("summarizeByArch", () => {
  it("pools per-run means with equal weight and sorts slowest first", () => {
    const data = summarizeByArch([
      row("hybrid", 1, 100),
      row("hybrid", 2, 200),
      row("plf", 1, 400),
      row("bdl", 1, 250),
    ]);
    expect(data.map((d) => d.arch)).toEqual(["plf", "bdl", "hybrid"]);
    expect(data[2]).toEqual({ arch: "hybrid", meanMs: 150, runs: 2 });
  });

  it("skips sample-less runs and drops empty architectures", () => {
    const data = summarizeByArch([
      row("plf", 1, 300),
      row("plf", 2, null),
      row("bdl", 1, null),
    ]);
    expect(data).toEqual([{ arch: "plf", meanMs: 300, runs: 1 }]);
  });
});

describe("renderCompareSvg", () => {
  const rows = [
    row("plf", 1, 450),
    row("bdl", 1, 250),
    row("hybrid", 1, 200),
  ];

  it("draws one bar per architecture and highlights the fastest", () => {
    const svg = renderCompareSvg(rows);
    expect(svg.match(/<rect x=/g)).toHaveLength(3);
    expect(svg).toContain("hybrid (fastest)");
    expect(svg).toContain("200.0 ms");
    expect(svg).toContain("450.0 ms");
  });

  it("is deterministic", () => {
    expect(renderCompareSvg(rows)).toBe(renderCompareSvg(rows));
  });

  it("honours a custom title, escaped", () => {
    const svg = renderCompareSvg(rows, { title: "a < b & c" });
    expect(svg).toContain("a &lt; b &amp; c");
  });

  it("rejects inputs with no delivered samples", () => {
    expect(() => renderCompareSvg([row("plf", 1, null)])).toThrow(
      /no runs with delivered samples/,
    );
  });
});
