/**
 * Quantile-quantile scatter of a standardized sample against the
 * normal quantiles, with the identity as the reference line.
 */
import { column, requireColumns, Table } from "../csv.js";
import {
  COLORS,
  drawEmptyNote,
  drawLegend,
  drawXAxis,
  drawYAxis,
  makeFrame,
} from "../chart.js";
import { linearScale } from "../scale.js";
import { linePath } from "../svg.js";

export interface QqOptions {
  width?: number;
  height?: number;
  title?: string;
}

export function renderQq(table: Table, opts: QqOptions = {}): string {
  const [ni, si] = requireColumns(table, ["normal_quantile", "sample_quantile"]);
  const f = makeFrame({
    width: opts.width ?? 480,
    height: opts.height ?? 480,
    title: opts.title ?? "normal quantile-quantile",
    margin: { top: 42, right: 20, bottom: 46, left: 60 },
  });
  if (table.rows.length === 0) {
    drawEmptyNote(f);
    return f.svg.document();
  }

  const nq = column(table, ni!);
  const sq = column(table, si!);
  const lo = Math.min(...nq, ...sq);
  const hi = Math.max(...nq, ...sq);
  const pad = (hi - lo) * 0.05 || 1;
  const x = linearScale([lo - pad, hi + pad], [0, f.width]);
  const y = linearScale([lo - pad, hi + pad], [f.height, 0]);

  f.plot.child("path", {
    d: linePath([
      [x(lo), y(lo)],
      [x(hi), y(hi)],
    ]),
    stroke: "#9ca3af",
    "stroke-dasharray": "4,3",
    fill: "none",
  });
  table.rows.forEach((r) => {
    f.plot.child("circle", {
      cx: x(r[ni!]!),
      cy: y(r[si!]!),
      r: 1.6,
      fill: COLORS[0]!,
      opacity: 0.7,
    });
  });

  drawLegend(f, [{ label: "identity", color: "#9ca3af", dash: "4,3" }], 12, 10);
  drawXAxis(f, x, { label: "normal quantile", grid: true });
  drawYAxis(f, y, { label: "sample quantile", grid: true });
  return f.svg.document();
}
