/**
 * Reader for the simulator's line-delimited event logs.
 *
 * Only what the figures need is extracted: the run metadata echoed in
 * the `# key = value` comment header, and the `e2e` records carrying
 * one end-to-end delivery delay each.
 */

export const LOG_HEADER = "#platoonsim-log v1";

export interface E2eRecord {
  tti: number;
  seq: number;
  genMs: number;
  delayMs: number;
  path: string;
}

export interface EventLogData {
  meta: Map<string, string>;
  e2e: E2eRecord[];
}

function fail(line: number, message: string): never {
  throw new Error(`event log line ${line}: ${message}`);
}

function num(field: string, name: string, line: number): number {
  const value = Number(field);
  if (field === "" || !Number.isFinite(value)) {
    fail(line, `${name} must be a finite number, got ${JSON.stringify(field)}`);
  }
  return value;
}

export function parseEventLog(text: string): EventLogData {
  const lines = text.split(/\r?\n/);
  if (lines[0] !== LOG_HEADER) {
    fail(1, `expected schema header ${JSON.stringify(LOG_HEADER)}`);
  }
  const meta = new Map<string, string>();
  const e2e: E2eRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") {
      continue;
    }
    if (line.startsWith("#")) {
      const match = /^# ([^=]+?) = (.*)$/.exec(line);
      if (match !== null) {
        meta.set(match[1] as string, match[2] as string);
      }
      continue;
    }
    const fields = line.split(" ");
    if (fields[0] !== "e2e") {
      continue;
    }
    if (fields.length !== 6) {
      fail(i + 1, `e2e record needs 6 fields, got ${fields.length}`);
    }
    e2e.push({
      tti: num(fields[1] as string, "tti", i + 1),
      seq: num(fields[2] as string, "seq", i + 1),
      genMs: num(fields[3] as string, "gen_ms", i + 1),
      delayMs: num(fields[4] as string, "delay_ms", i + 1),
      path: fields[5] as string,
    });
  }
  return { meta, e2e };
}

/** Label for a parsed log: its architecture, falling back to "run". */
export function logLabel(data: EventLogData): string {
  return data.meta.get("arch") ?? "run";
}
