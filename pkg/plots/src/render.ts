/**
 * File-level entry: read the inputs, shape the figure, write the SVG.
 * Any parse or shaping failure throws before the output path is touched.
 */

import * as fs from "fs";

import {
  Figure, FigureSpec, breakdownFigure, hitRatioFigure, mSweepFigure,
  scalingFigure, warmupFigure,
} from "./figure";
import { parseBenchCsv, parseWarmupCsv } from "./schema";
import { emitSvg } from "./svg";

export function buildFigure(spec: FigureSpec): Figure {
  const texts = spec.inputs.map(
    (p) => [p, fs.readFileSync(p, "utf8")] as const);
  if (spec.kind === "warmup") {
    const rows = texts.flatMap(([p, t]) => parseWarmupCsv(t, p));
    return warmupFigure(rows);
  }
  const rows = texts.flatMap(([p, t]) => parseBenchCsv(t, p));
  switch (spec.kind) {
    case "hitratio":
      return hitRatioFigure(rows);
    case "msweep":
      return mSweepFigure(rows);
    case "breakdown":
      return breakdownFigure(rows);
    case "scaling":
      return scalingFigure(rows);
  }
}

export function render(spec: FigureSpec): string {
  const svg = emitSvg(buildFigure(spec), spec.title);
  fs.writeFileSync(spec.output, svg);
  return spec.output;
}
