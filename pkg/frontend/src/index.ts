export { parseResultsCsv, RESULTS_HEADER } from "./results.js";
export type { RunRow } from "./results.js";
export { parseEventLog, logLabel, LOG_HEADER } from "./events.js";
export type { E2eRecord, EventLogData } from "./events.js";
export { renderCompareSvg, summarizeByArch, ARCH_COLORS } from "./compare.js";
export type { CompareDatum, CompareOptions } from "./compare.js";
export { renderCdfSvg, seriesFromLogs, empiricalCdf } from "./cdf.js";
export type { CdfPoint, CdfSeries, CdfOptions } from "./cdf.js";
export { main } from "./cli.js";
