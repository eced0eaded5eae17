/**
 * Strict reader for the simulator's `results.csv`.
 *
 * The file is one row per run with a fixed nine-column header.  Latency
 * statistics and pdr are empty strings when a run delivered no samples;
 * they parse to `null`.  Anything else malformed throws with the
 * offending line number.
 */

export interface RunRow {
  arch: string;
  seed: number;
  samples: number;
  meanMs: number | null;
  p50Ms: number | null;
  p95Ms: number | null;
  p99Ms: number | null;
  pdr: number | null;
  configHash: string;
}

export const RESULTS_HEADER =
  "arch,seed,samples,mean_ms,p50_ms,p95_ms,p99_ms,pdr,config_hash";

function fail(line: number, message: string): never {
  throw new Error(`results.csv line ${line}: ${message}`);
}

function int(field: string, name: string, line: number): number {
  if (!/^-?\d+$/.test(field)) {
    fail(line, `${name} must be an integer, got ${JSON.stringify(field)}`);
  }
  return Number(field);
}

function floatOrNull(
  field: string,
  name: string,
  line: number,
): number | null {
  if (field === "") {
    return null;
  }
  const value = Number(field);
  if (!Number.isFinite(value)) {
    fail(line, `${name} must be a finite number, got ${JSON.stringify(field)}`);
  }
  return value;
}

export function parseResultsCsv(text: string): RunRow[] {
  const lines = text.split(/\r?\n/);
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0 || lines[0] !== RESULTS_HEADER) {
    fail(1, `expected header ${JSON.stringify(RESULTS_HEADER)}`);
  }
  const rows: RunRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") {
      fail(i + 1, "blank line");
    }
    const fields = line.split(",");
    if (fields.length !== 9) {
      fail(i + 1, `expected 9 fields, got ${fields.length}`);
    }
    const [arch, seed, samples, mean, p50, p95, p99, pdr, hash] = fields as [
      string, string, string, string, string, string, string, string, string,
    ];
    if (arch === "") {
      fail(i + 1, "empty arch");
    }
    rows.push({
      arch,
      seed: int(seed, "seed", i + 1),
      samples: int(samples, "samples", i + 1),
      meanMs: floatOrNull(mean, "mean_ms", i + 1),
      p50Ms: floatOrNull(p50, "p50_ms", i + 1),
      p95Ms: floatOrNull(p95, "p95_ms", i + 1),
      p99Ms: floatOrNull(p99, "p99_ms", i + 1),
      pdr: floatOrNull(pdr, "pdr", i + 1),
      configHash: hash,
    });
  }
  return rows;
}
