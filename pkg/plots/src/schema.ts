/**
 * The benchmark CSV contract, mirrored column for column.
 *
 * Everything downstream assumes rows that passed through here, so this is
 * the one place that knows the header and does the string-to-number work.
 */

import Papa from "papaparse";

export const BENCH_COLUMNS = [
  "policy", "dist", "alpha", "records", "ops", "seed", "threads",
  "num_sets", "m", "p", "capacity", "init", "touch_bytes",
  "hits", "misses", "hit_ratio", "wall_time_s", "throughput_ops_s",
  "hit_loc_1", "hit_loc_2", "hit_loc_3", "hit_loc_4",
  "hit_loc_5", "hit_loc_6", "hit_loc_7", "hit_loc_8",
] as const;

export const WARMUP_COLUMNS = [
  "policy", "dist", "seed", "init", "capacity", "ops_completed", "hit_ratio",
] as const;

export interface BenchRow {
  policy: string;
  dist: string;
  alpha: number;
  records: number;
  ops: number;
  seed: number;
  threads: number;
  numSets: number;
  m: number;
  p: number;
  capacity: number;
  init: string;
  touchBytes: number;
  hits: number;
  misses: number;
  hitRatio: number;
  wallTimeS: number;
  throughputOpsS: number;
  /** Hits by location, hit_loc_1..8 in order. */
  locationHits: number[];
}

export interface WarmupRow {
  policy: string;
  dist: string;
  seed: number;
  init: string;
  capacity: number;
  opsCompleted: number;
  hitRatio: number;
}

export class SchemaError extends Error {}

function checkHeader(
  got: string[], expected: readonly string[], source: string,
): void {
  const missing = expected.filter((c) => !got.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${source}: missing column(s) ${missing.join(", ")}; ` +
      `expected header: ${expected.join(",")}`,
    );
  }
}

function num(record: Record<string, string>, col: string, source: string): number {
  const raw = record[col];
  if (raw === undefined || raw === "") return 0;
  const v = Number(raw);
  if (Number.isNaN(v)) {
    throw new SchemaError(`${source}: column ${col} has non-numeric value ${JSON.stringify(raw)}`);
  }
  return v;
}

function parseRecords(
  text: string, expected: readonly string[], source: string,
): Record<string, string>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${source}: ${e.message} (row ${e.row})`);
  }
  checkHeader(parsed.meta.fields ?? [], expected, source);
  if (parsed.data.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return parsed.data;
}

export function parseBenchCsv(text: string, source = "input"): BenchRow[] {
  return parseRecords(text, BENCH_COLUMNS, source).map((r) => ({
    policy: r.policy,
    dist: r.dist,
    alpha: num(r, "alpha", source),
    records: num(r, "records", source),
    ops: num(r, "ops", source),
    seed: num(r, "seed", source),
    threads: num(r, "threads", source),
    numSets: num(r, "num_sets", source),
    m: num(r, "m", source),
    p: num(r, "p", source),
    capacity: num(r, "capacity", source),
    init: r.init,
    touchBytes: num(r, "touch_bytes", source),
    hits: num(r, "hits", source),
    misses: num(r, "misses", source),
    hitRatio: num(r, "hit_ratio", source),
    wallTimeS: num(r, "wall_time_s", source),
    throughputOpsS: num(r, "throughput_ops_s", source),
    locationHits: [1, 2, 3, 4, 5, 6, 7, 8].map(
      (i) => num(r, `hit_loc_${i}`, source)),
  }));
}

export function parseWarmupCsv(text: string, source = "input"): WarmupRow[] {
  return parseRecords(text, WARMUP_COLUMNS, source).map((r) => ({
    policy: r.policy,
    dist: r.dist,
    seed: num(r, "seed", source),
    init: r.init,
    capacity: num(r, "capacity", source),
    opsCompleted: num(r, "ops_completed", source),
    hitRatio: num(r, "hit_ratio", source),
  }));
}
