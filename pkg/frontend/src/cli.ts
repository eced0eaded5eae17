/**
 * Command-line front end.
 *
 *   platoonsim-plots plot-compare --results out/results.csv --out compare.svg
 *   platoonsim-plots plot-cdf --log out/events_plf_1.log --log ... --out cdf.svg
 *
 * Exit codes: 0 success, 1 runtime failure (unreadable or malformed
 * input), 2 usage error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { parseResultsCsv } from "./results.js";
import { parseEventLog } from "./events.js";
import { renderCompareSvg } from "./compare.js";
import { renderCdfSvg, seriesFromLogs } from "./cdf.js";

const USAGE = `usage:
  platoonsim-plots plot-compare --results <results.csv> --out <file.svg> [--title <text>]
  platoonsim-plots plot-cdf --log <events.log> [--log <events.log> ...] --out <file.svg> [--title <text>]`;

function plotCompare(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      results: { type: "string" },
      out: { type: "string" },
      title: { type: "string" },
    },
  });
  if (values.results === undefined || values.out === undefined) {
    throw new UsageError("plot-compare needs --results and --out");
  }
  const rows = parseResultsCsv(readFileSync(values.results, "utf8"));
  const svg = renderCompareSvg(
    rows,
    values.title === undefined ? {} : { title: values.title },
  );
  writeFileSync(values.out, svg);
  console.log(`wrote ${values.out}`);
  return 0;
}

function plotCdf(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      log: { type: "string", multiple: true },
      out: { type: "string" },
      title: { type: "string" },
    },
  });
  if (values.log === undefined || values.log.length === 0 ||
      values.out === undefined) {
    throw new UsageError("plot-cdf needs --log (at least once) and --out");
  }
  const logs = values.log.map((path) =>
    parseEventLog(readFileSync(path, "utf8")),
  );
  const svg = renderCdfSvg(
    seriesFromLogs(logs),
    values.title === undefined ? {} : { title: values.title },
  );
  writeFileSync(values.out, svg);
  console.log(`wrote ${values.out}`);
  return 0;
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "plot-compare") {
      return plotCompare(rest);
    }
    if (command === "plot-cdf") {
      return plotCdf(rest);
    }
    throw new UsageError(
      command === undefined
        ? "missing command"
        : `unknown command ${JSON.stringify(command)}`,
    );
  } catch (error) {
    if (error instanceof UsageError ||
        (error instanceof TypeError && "code" in error &&
         typeof error.code === "string" &&
         error.code.startsWith("ERR_PARSE_ARGS"))) {
      console.error(`${error.message}\n${USAGE}`);
      return 2;
    }
    if (error instanceof Error) {
      console.error(error.message);
      return 1;
    }
    throw error;
  }
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
