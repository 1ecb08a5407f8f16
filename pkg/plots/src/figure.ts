/**
 * Turns validated CSV rows into an abstract figure: named series over an
 * axis pair, or labelled stacked bars. No pixels here; the SVG emitter
 * decides geometry.
 */

import { BenchRow, WarmupRow } from "./schema";

export const KINDS = [
  "hitratio", "msweep", "breakdown", "warmup", "scaling",
] as const;
export type Kind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: Kind;
  inputs: string[];
  output: string;
  title?: string;
}

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  name: string;
  points: Point[];
  /** Drawn against the right-hand axis when set. */
  axis?: "y2";
  dashed?: boolean;
}

export interface LineFigure {
  chart: "line";
  xLabel: string;
  yLabel: string;
  y2Label?: string;
  xScale: "linear" | "log";
  series: Series[];
}

export interface BarSegment {
  loc: number;
  count: number;
}

export interface Bar {
  label: string;
  total: number;
  segments: BarSegment[];
}

export interface BarFigure {
  chart: "bars";
  yLabel: string;
  bars: Bar[];
}

export type Figure = LineFigure | BarFigure;

export class FigureError extends Error {}

const VECTOR_POLICIES = new Set(["multistep", "invector"]);

function byFirstAppearance<T>(items: T[], key: (t: T) => string): string[] {
  const seen: string[] = [];
  for (const it of items) {
    const k = key(it);
    if (!seen.includes(k)) seen.push(k);
  }
  return seen;
}

function sortedPoints(pts: Point[]): Point[] {
  return [...pts].sort((a, b) => a.x - b.x);
}

export function hitRatioFigure(rows: BenchRow[]): LineFigure {
  const series = byFirstAppearance(rows, (r) => r.policy).map((policy) => ({
    name: policy,
    points: sortedPoints(rows
      .filter((r) => r.policy === policy)
      .map((r) => ({ x: r.capacity, y: 100 * r.hitRatio }))),
  }));
  return {
    chart: "line",
    xLabel: "cache size (items)",
    yLabel: "hit ratio (%)",
    xScale: "log",
    series,
  };
}

export function mSweepFigure(rows: BenchRow[]): LineFigure {
  const vec = rows.filter((r) => VECTOR_POLICIES.has(r.policy));
  if (vec.length === 0) {
    throw new FigureError("msweep needs rows from a vectorized policy");
  }
  const mValues = [...new Set(vec.map((r) => r.m))].sort((a, b) => a - b);
  const series: Series[] = byFirstAppearance(vec, (r) => r.policy).map(
    (policy) => ({
      name: policy,
      points: sortedPoints(vec
        .filter((r) => r.policy === policy)
        .map((r) => ({ x: r.m, y: 100 * r.hitRatio }))),
    }));
  // Non-vectorized rows become flat reference lines across the M axis.
  for (const r of rows) {
    if (VECTOR_POLICIES.has(r.policy)) continue;
    series.push({
      name: `${r.policy} (reference)`,
      points: mValues.map((m) => ({ x: m, y: 100 * r.hitRatio })),
      dashed: true,
    });
  }
  for (const r of vec) {
    const name = `${r.policy} throughput`;
    let s = series.find((x) => x.name === name);
    if (s === undefined) {
      s = { name, points: [], axis: "y2", dashed: true };
      series.push(s);
    }
    s.points.push({ x: r.m, y: r.throughputOpsS / 1e6 });
  }
  for (const s of series) s.points = sortedPoints(s.points);
  return {
    chart: "line",
    xLabel: "vectors per set (M)",
    yLabel: "hit ratio (%)",
    y2Label: "throughput (Mops/s)",
    xScale: "linear",
    series,
  };
}

export function breakdownFigure(rows: BenchRow[]): BarFigure {
  const bars = rows.map((r) => {
    const sum = r.locationHits.reduce((a, b) => a + b, 0);
    if (Math.abs(sum - r.hits) > 1e-6 * Math.max(1, r.hits)) {
      throw new FigureError(
        `row ${r.policy}: hit_loc columns sum to ${sum}, hits says ${r.hits}`);
    }
    return {
      label: VECTOR_POLICIES.has(r.policy)
        ? `${r.policy} m=${r.m}` : r.policy,
      total: r.hits,
      segments: r.locationHits
        .map((count, i) => ({ loc: i + 1, count }))
        .filter((s) => s.count > 0),
    };
  });
  return { chart: "bars", yLabel: "hits by vector", bars };
}

export function warmupFigure(rows: WarmupRow[]): LineFigure {
  const series = byFirstAppearance(rows, (r) => `${r.policy} ${r.init}`).map(
    (name) => ({
      name,
      points: sortedPoints(rows
        .filter((r) => `${r.policy} ${r.init}` === name)
        .map((r) => ({ x: r.opsCompleted, y: 100 * r.hitRatio }))),
    }));
  return {
    chart: "line",
    xLabel: "operations completed",
    yLabel: "cumulative hit ratio (%)",
    xScale: "log",
    series,
  };
}

export function scalingFigure(rows: BenchRow[]): LineFigure {
  const series = byFirstAppearance(rows, (r) => r.policy).map((policy) => {
    const pts = sortedPoints(rows
      .filter((r) => r.policy === policy)
      .map((r) => ({ x: r.threads, y: r.throughputOpsS })));
    const base = pts[0].y;
    if (base <= 0) {
      throw new FigureError(`policy ${policy}: zero baseline throughput`);
    }
    return { name: policy, points: pts.map((p) => ({ x: p.x, y: p.y / base })) };
  });
  return {
    chart: "line",
    xLabel: "threads",
    yLabel: "relative throughput",
    xScale: "linear",
    series,
  };
}
