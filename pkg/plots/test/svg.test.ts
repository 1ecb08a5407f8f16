import * as fs from "fs";
import * as path from "path";
import { describe, expect, it } from "vitest";

import { breakdownFigure, hitRatioFigure } from "../src/figure";
import { parseBenchCsv } from "../src/schema";
import { emitSvg } from "../src/svg";

const FIXTURES = path.join(__dirname, "..", "fixtures");

function rows(name: string) {
  return parseBenchCsv(fs.readFileSync(path.join(FIXTURES, name), "utf8"));
}

describe("emitSvg on line figures", () => {
  const fig = hitRatioFigure(rows("size_sweep.csv"));

  it("is byte-identical across calls", () => {
    expect(emitSvg(fig)).toBe(emitSvg(fig));
  });

  it("tags every series with its name and point count", () => {
    const svg = emitSvg(fig);
    for (const policy of ["arc", "multistep", "gclock", "lru", "invector"]) {
      expect(svg).toContain(
        `data-series="${policy}" data-points="4"`);
    }
    expect(svg.match(/<circle class="pt"/g)).toHaveLength(20);
  });

  it("draws a legend entry per series and labels both axes", () => {
    const svg = emitSvg(fig, "hit ratio by size");
    expect(svg).toContain(">hit ratio by size<");
    expect(svg).toContain(">cache size (items)<");
    expect(svg).toContain(">hit ratio (%)<");
    for (const policy of ["arc", "multistep", "gclock", "lru", "invector"]) {
      expect(svg).toContain(`>${policy}<`);
    }
  });

  it("is well-formed enough to end where it started", () => {
    const svg = emitSvg(fig);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg.match(/<svg /g)).toHaveLength(1);
  });
});

describe("emitSvg on bar figures", () => {
  const fig = breakdownFigure(rows("m_sweep.csv"));

  it("stacks rects that account for every hit", () => {
    const svg = emitSvg(fig);
    const bars = [...svg.matchAll(
      /<g class="bar" data-bar="([^"]+)" data-total="(\d+)">([\s\S]*?)<\/g>/g)];
    expect(bars).toHaveLength(5);
    for (const [, , total, body] of bars) {
      const counts = [...body.matchAll(/data-count="(\d+)"/g)]
        .map((m) => Number(m[1]));
      expect(counts.reduce((a, b) => a + b, 0)).toBe(Number(total));
    }
  });

  it("gives stacked heights proportional to counts", () => {
    const svg = emitSvg(fig);
    const rects = [...svg.matchAll(
      /data-count="(\d+)" [^>]*height="([0-9.]+)"/g)];
    expect(rects.length).toBeGreaterThan(0);
    const scale = rects.map((m) => Number(m[2]) / Number(m[1]));
    for (const s of scale) {
      expect(s).toBeCloseTo(scale[0], 4);
    }
  });

  it("is deterministic too", () => {
    expect(emitSvg(fig)).toBe(emitSvg(fig));
  });
});
