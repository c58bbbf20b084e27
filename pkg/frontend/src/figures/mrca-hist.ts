/**
 * Histogram of rescaled ancestor depths with the limit density overlaid.
 *
 * The sample is depth/gap for coalesced pairs. The density curves are
 * never computed here: they come from the companion CSV the primary
 * emits (x, density, truncated_density), where the truncated curve is
 * the limit law renormalized to the traced range.
 */
import { requireColumns, Table } from "../csv.js";
import {
  COLORS,
  drawEmptyNote,
  drawLegend,
  drawXAxis,
  drawYAxis,
  makeFrame,
  TEXT,
} from "../chart.js";
import { linearScale } from "../scale.js";
import { linePath } from "../svg.js";

export interface MrcaHistOptions {
  density?: Table;
  /** site gap of the run; rescales depths to depth/gap */
  gap?: number;
  bins?: number;
  width?: number;
  height?: number;
  title?: string;
}

export function renderMrcaHist(table: Table, opts: MrcaHistOptions = {}): string {
  const [, ci, di] = requireColumns(table, ["replica", "coalesced", "depth"]);
  const gap = opts.gap ?? 1;
  const sample = table.rows
    .filter((r) => r[ci!] === 1)
    .map((r) => r[di!]! / gap);
  const f = makeFrame({
    width: opts.width ?? 640,
    height: opts.height ?? 420,
    title: opts.title ?? "ancestor depth / gap, coalesced pairs",
  });
  if (sample.length === 0) {
    drawEmptyNote(f);
    return f.svg.document();
  }

  let dens: Array<[number, number, number]> = [];
  if (opts.density) {
    const [xi, pi, ti] = requireColumns(
      opts.density,
      ["x", "density", "truncated_density"],
      "density",
    );
    dens = opts.density.rows.map((r) => [r[xi!]!, r[pi!]!, r[ti!]!]);
  }

  const xMax = dens.length
    ? Math.max(...dens.map((d) => d[0]))
    : Math.max(...sample);
  const nBins = opts.bins ?? 40;
  const binWidth = xMax / nBins || 1;
  const counts = new Array<number>(nBins).fill(0);
  let kept = 0;
  for (const v of sample) {
    if (v > xMax) continue; // beyond the density support, not drawable
    const b = Math.min(Math.floor(v / binWidth), nBins - 1);
    counts[b]!++;
    kept++;
  }
  const heights = counts.map((c) => c / (kept * binWidth));

  const yMax = Math.max(...heights, ...dens.map((d) => d[2])) * 1.08;
  const x = linearScale([0, xMax], [0, f.width]);
  const y = linearScale([0, yMax], [f.height, 0]);

  for (let b = 0; b < nBins; b++) {
    if (heights[b] === 0) continue;
    f.plot.child("rect", {
      x: x(b * binWidth),
      y: y(heights[b]!),
      width: x(binWidth) - x(0),
      height: y(0) - y(heights[b]!),
      fill: COLORS[0]!,
      opacity: 0.45,
      stroke: COLORS[0]!,
      "stroke-width": 0.5,
    });
  }

  if (dens.length) {
    f.plot.child("path", {
      d: linePath(dens.map((d) => [x(d[0]), y(Math.min(d[2], yMax))])),
      stroke: COLORS[1]!,
      "stroke-width": 1.5,
      fill: "none",
    });
    f.plot.child("path", {
      d: linePath(dens.map((d) => [x(d[0]), y(Math.min(d[1], yMax))])),
      stroke: COLORS[1]!,
      "stroke-width": 1.2,
      "stroke-dasharray": "4,3",
      fill: "none",
      opacity: 0.8,
    });
    drawLegend(
      f,
      [
        { label: "sample", color: COLORS[0]! },
        { label: "limit density (truncated)", color: COLORS[1]! },
        { label: "limit density (full)", color: COLORS[1]!, dash: "4,3" },
      ],
      f.width - 190,
      14,
    );
  }

  f.plot
    .child("text", {
      x: f.width,
      y: f.height - 8,
      "text-anchor": "end",
      "font-size": 11,
      fill: TEXT,
    })
    .setText(`${sample.length} coalesced of ${table.rows.length}`);

  drawXAxis(f, x, { label: gap === 1 ? "depth" : `depth / ${gap}` });
  drawYAxis(f, y, { label: "density", grid: true });
  return f.svg.document();
}
