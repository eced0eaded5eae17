import { describe, expect, it } from "vitest";

import { empiricalCdf, renderCdfSvg, seriesFromLogs } from "../src/cdf.js";
import { parseEventLog, LOG_HEADER } from "../src/events.js";

describe("empiricalCdf", () => {
  it("produces sorted step points reaching exactly 1", () => {
    const points = empiricalCdf([30, 10, 20, 10]);
    expect(points).toEqual([
      { x: 10, f: 0.25 },
      { x: 10, f: 0.5 },
      { x: 20, f: 0.75 },
      { x: 30, f: 1 },
    ]);
  });

  it("does not mutate its input", () => {
    const values = [3, 1, 2];
    empiricalCdf(values);
    expect(values).toEqual([3, 1, 2]);
  });

  it("rejects empty samples", () => {
    expect(() => empiricalCdf([])).toThrow(/empty sample/);
  });
});

function log(arch: string, delays: number[]): string {
  const lines = delays.map(
    (d, i) => `e2e ${1000 + i} ${i} 1000.000 ${d.toFixed(3)} p`,
  );
  return `${LOG_HEADER}\n# arch = ${arch}\n${lines.join("\n")}\n`;
}

describe("renderCdfSvg", () => {
  const series = seriesFromLogs([
    parseEventLog(log("plf", [400, 450, 500])),
    parseEventLog(log("hybrid", [150, 200, 250])),
  ]);

  it("orders series by label and draws one curve each", () => {
    expect(series.map((s) => s.label)).toEqual(["hybrid", "plf"]);
    const svg = renderCdfSvg(series);
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain("hybrid (3)");
    expect(svg).toContain("plf (3)");
  });

  it("is deterministic", () => {
    expect(renderCdfSvg(series)).toBe(renderCdfSvg(series));
  });

  it("rejects series with no records", () => {
    expect(() =>
      renderCdfSvg(seriesFromLogs([parseEventLog(`${LOG_HEADER}\n`)])),
    ).toThrow(/no delivery records/);
  });
});
