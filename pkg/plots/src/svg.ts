/**
 * Deterministic SVG emitter: fixed canvas, fixed palette, fixed number
 * formatting, so identical figures are byte-identical files.
 *
 * Machine-checkable hooks ride along as data attributes: every polyline
 * carries data-series/data-points, every stacked bar data-bar/data-total
 * and per-rect data-loc/data-count.
 */

import { Bar, BarFigure, Figure, LineFigure, Series } from "./figure";

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 40, right: 150, bottom: 56, left: 64 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
];

type Scale = (v: number) => number;

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const inner = linearScale(Math.log10(d0), Math.log10(d1), r0, r1);
  return (v) => inner(Math.log10(v));
}

function px(v: number): string {
  return v.toFixed(2);
}

/** Short human form: 31622 -> "31.6k", 2 -> "2". */
function fmt(v: number): string {
  if (Math.abs(v) >= 10_000_000) return `${+(v / 1e6).toFixed(1)}M`;
  if (Math.abs(v) >= 10_000) return `${+(v / 1e3).toFixed(1)}k`;
  return `${+v.toFixed(2)}`;
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

/** Pad a linear domain so points sit off the frame edges. */
function padded([lo, hi]: [number, number]): [number, number] {
  const pad = (hi - lo || Math.abs(hi) || 1) * 0.08;
  return [lo - pad, hi + pad];
}

function linearTicks([lo, hi]: [number, number], n = 5): number[] {
  const raw = (hi - lo) / n;
  const mag = 10 ** Math.floor(Math.log10(raw || 1));
  const step = [1, 2, 2.5, 5, 10].map((s) => s * mag)
    .find((s) => (hi - lo) / s <= n) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) out.push(+v.toFixed(10));
  return out;
}

function text(
  x: number, y: number, s: string, anchor = "middle", extra = "",
): string {
  return `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
    `font-family="sans-serif" font-size="12"${extra}>${s}</text>`;
}

function legend(names: string[], colors: string[], dashed: boolean[]): string[] {
  const out: string[] = [];
  names.forEach((name, i) => {
    const y = MARGIN.top + 10 + 20 * i;
    const x = WIDTH - MARGIN.right + 14;
    const dash = dashed[i] ? ' stroke-dasharray="6 3"' : "";
    out.push(`<line x1="${px(x)}" y1="${px(y)}" x2="${px(x + 22)}" ` +
      `y2="${px(y)}" stroke="${colors[i]}" stroke-width="2"${dash}/>`);
    out.push(text(x + 28, y + 4, name, "start"));
  });
  return out;
}

function frame(): string {
  return `<rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" ` +
    `width="${px(PLOT_W)}" height="${px(PLOT_H)}" fill="none" ` +
    `stroke="#444" stroke-width="1"/>`;
}

function open(title?: string): string[] {
  const out = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
    `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
  ];
  if (title) out.push(text(WIDTH / 2, 22, title, "middle", ' font-size="14"'));
  return out;
}

function lineChart(fig: LineFigure, title?: string): string {
  const primary = fig.series.filter((s) => s.axis !== "y2");
  const secondary = fig.series.filter((s) => s.axis === "y2");
  const xs = fig.series.flatMap((s) => s.points.map((p) => p.x));
  const xDomain = extent(xs);
  const xScale: Scale = fig.xScale === "log"
    ? logScale(xDomain[0], xDomain[1], MARGIN.left + 12,
               MARGIN.left + PLOT_W - 12)
    : linearScale(...padded(xDomain), MARGIN.left, MARGIN.left + PLOT_W);
  const yDomain = padded(extent(primary.flatMap((s) => s.points.map((p) => p.y))));
  const yScale = linearScale(yDomain[0], yDomain[1],
                             MARGIN.top + PLOT_H, MARGIN.top);

  const out = open(title);
  out.push(frame());

  const xTickVals = [...new Set(xs)].sort((a, b) => a - b);
  const xTicks = xTickVals.length <= 9
    ? xTickVals
    : linearTicks(xDomain, 6);
  for (const v of xTicks) {
    const x = xScale(v);
    out.push(`<line x1="${px(x)}" y1="${px(MARGIN.top + PLOT_H)}" ` +
      `x2="${px(x)}" y2="${px(MARGIN.top + PLOT_H + 5)}" stroke="#444"/>`);
    out.push(text(x, MARGIN.top + PLOT_H + 20, fmt(v)));
  }
  for (const v of linearTicks(yDomain)) {
    const y = yScale(v);
    out.push(`<line x1="${px(MARGIN.left - 5)}" y1="${px(y)}" ` +
      `x2="${px(MARGIN.left)}" y2="${px(y)}" stroke="#444"/>`);
    out.push(`<line x1="${px(MARGIN.left)}" y1="${px(y)}" ` +
      `x2="${px(MARGIN.left + PLOT_W)}" y2="${px(y)}" ` +
      `stroke="#ddd" stroke-width="0.5"/>`);
    out.push(text(MARGIN.left - 10, y + 4, fmt(v), "end"));
  }
  out.push(text(MARGIN.left + PLOT_W / 2, HEIGHT - 14, fig.xLabel));
  out.push(text(0, 0, fig.yLabel, "middle",
    ` transform="translate(16,${px(MARGIN.top + PLOT_H / 2)}) rotate(-90)"`));

  let y2Scale: Scale | undefined;
  if (secondary.length > 0) {
    const d = padded(extent(secondary.flatMap((s) => s.points.map((p) => p.y))));
    y2Scale = linearScale(d[0], d[1], MARGIN.top + PLOT_H, MARGIN.top);
    for (const v of linearTicks(d)) {
      const y = y2Scale(v);
      const x = MARGIN.left + PLOT_W;
      out.push(`<line x1="${px(x)}" y1="${px(y)}" x2="${px(x + 5)}" ` +
        `y2="${px(y)}" stroke="#444"/>`);
      out.push(text(x + 9, y + 4, fmt(v), "start"));
    }
    if (fig.y2Label) {
      out.push(text(0, 0, fig.y2Label, "middle",
        ` transform="translate(${px(WIDTH - MARGIN.right + 52)},` +
        `${px(MARGIN.top + PLOT_H / 2)}) rotate(90)"`));
    }
  }

  fig.series.forEach((s: Series, i: number) => {
    const color = PALETTE[i % PALETTE.length];
    const sy = s.axis === "y2" && y2Scale ? y2Scale : yScale;
    const coords = s.points
      .map((p) => `${px(xScale(p.x))},${px(sy(p.y))}`).join(" ");
    const dash = s.dashed ? ' stroke-dasharray="6 3"' : "";
    out.push(`<polyline class="series" data-series="${s.name}" ` +
      `data-points="${s.points.length}" fill="none" stroke="${color}" ` +
      `stroke-width="2"${dash} points="${coords}"/>`);
    for (const p of s.points) {
      out.push(`<circle class="pt" cx="${px(xScale(p.x))}" ` +
        `cy="${px(sy(p.y))}" r="3" fill="${color}"/>`);
    }
  });

  out.push(...legend(fig.series.map((s) => s.name),
                     fig.series.map((_, i) => PALETTE[i % PALETTE.length]),
                     fig.series.map((s) => !!s.dashed)));
  out.push("</svg>");
  return out.join("\n") + "\n";
}

function barChart(fig: BarFigure, title?: string): string {
  const out = open(title);
  out.push(frame());
  const maxTotal = Math.max(...fig.bars.map((b) => b.total), 1);
  const yScale = linearScale(0, maxTotal * 1.08, MARGIN.top + PLOT_H, MARGIN.top);
  const slot = PLOT_W / fig.bars.length;
  const barW = Math.min(slot * 0.6, 80);

  for (const v of linearTicks([0, maxTotal * 1.08])) {
    const y = yScale(v);
    out.push(`<line x1="${px(MARGIN.left - 5)}" y1="${px(y)}" ` +
      `x2="${px(MARGIN.left)}" y2="${px(y)}" stroke="#444"/>`);
    out.push(text(MARGIN.left - 10, y + 4, fmt(v), "end"));
  }
  out.push(text(0, 0, fig.yLabel, "middle",
    ` transform="translate(16,${px(MARGIN.top + PLOT_H / 2)}) rotate(-90)"`));

  const maxLoc = Math.max(
    ...fig.bars.flatMap((b) => b.segments.map((s) => s.loc)), 1);
  fig.bars.forEach((bar: Bar, i: number) => {
    const x = MARGIN.left + slot * (i + 0.5) - barW / 2;
    const parts: string[] = [];
    let yTop = yScale(0);
    for (const seg of bar.segments) {
      const h = yScale(0) - yScale(seg.count);
      yTop -= h;
      parts.push(`<rect data-loc="${seg.loc}" data-count="${seg.count}" ` +
        `x="${px(x)}" y="${px(yTop)}" width="${px(barW)}" ` +
        `height="${px(h)}" fill="${PALETTE[(seg.loc - 1) % PALETTE.length]}" ` +
        `stroke="white" stroke-width="0.5"/>`);
    }
    out.push(`<g class="bar" data-bar="${bar.label}" ` +
      `data-total="${bar.total}">`);
    out.push(...parts);
    out.push("</g>");
    out.push(text(x + barW / 2, MARGIN.top + PLOT_H + 20, bar.label));
    out.push(text(x + barW / 2, yTop - 6, fmt(bar.total)));
  });

  out.push(...legend(
    Array.from({ length: maxLoc }, (_, i) => `vector ${i + 1}`),
    Array.from({ length: maxLoc }, (_, i) => PALETTE[i % PALETTE.length]),
    Array.from({ length: maxLoc }, () => false)));
  out.push("</svg>");
  return out.join("\n") + "\n";
}

export function emitSvg(fig: Figure, title?: string): string {
  return fig.chart === "line" ? lineChart(fig, title) : barChart(fig, title);
}
