/**
 * Log-log chart of component moment sums against the window size.
 *
 * Points are the simulated means with 3 SE whiskers; lines are the
 * primary's fitted power laws (fit_s2/fit_s3/fit_s4 columns), and the
 * dotted overlay is the exact second-moment oracle. Slopes shown in
 * the legend are read off the fitted lines, not refitted here.
 */
import { column, requireColumns, Table } from "../csv.js";
import {
  COLORS,
  drawEmptyNote,
  drawLegend,
  drawXAxis,
  drawYAxis,
  LegendItem,
  makeFrame,
} from "../chart.js";
import { logScale } from "../scale.js";
import { linePath } from "../svg.js";

export interface SlopesOptions {
  width?: number;
  height?: number;
  title?: string;
}

export function renderSlopes(table: Table, opts: SlopesOptions = {}): string {
  const names = [
    "n",
    "mean_s2",
    "se_s2",
    "fit_s2",
    "mean_s3",
    "se_s3",
    "fit_s3",
    "mean_s4",
    "se_s4",
    "fit_s4",
    "oracle_s2",
  ];
  const idx = requireColumns(table, names);
  const f = makeFrame({
    width: opts.width ?? 640,
    height: opts.height ?? 460,
    title: opts.title ?? "component moment scaling",
    margin: { top: 42, right: 20, bottom: 46, left: 70 },
  });
  if (table.rows.length === 0) {
    drawEmptyNote(f);
    return f.svg.document();
  }

  const ns = column(table, idx[0]!);
  const series = [
    { label: "S2", mean: idx[1]!, se: idx[2]!, fit: idx[3]!, color: COLORS[0]! },
    { label: "S3", mean: idx[4]!, se: idx[5]!, fit: idx[6]!, color: COLORS[1]! },
    { label: "S4", mean: idx[7]!, se: idx[8]!, fit: idx[9]!, color: COLORS[2]! },
  ];

  let yLo = Infinity;
  let yHi = 0;
  for (const s of series) {
    for (const r of table.rows) {
      yLo = Math.min(yLo, r[s.mean]! - 3 * r[s.se]!, r[s.fit]!);
      yHi = Math.max(yHi, r[s.mean]! + 3 * r[s.se]!, r[s.fit]!);
    }
  }
  const x = logScale([Math.min(...ns), Math.max(...ns)], [0, f.width]);
  const y = logScale([yLo * 0.8, yHi * 1.25], [f.height, 0]);

  const legend: LegendItem[] = [];
  for (const s of series) {
    const pts = table.rows.map(
      (r, i) => [x(ns[i]!), y(r[s.fit]!)] as [number, number],
    );
    f.plot.child("path", {
      d: linePath(pts),
      stroke: s.color,
      "stroke-width": 1.3,
      fill: "none",
      opacity: 0.9,
    });
    table.rows.forEach((r, i) => {
      const cx = x(ns[i]!);
      const lo = r[s.mean]! - 3 * r[s.se]!;
      const hi = r[s.mean]! + 3 * r[s.se]!;
      if (lo > 0) {
        f.plot.child("path", {
          d: linePath([
            [cx, y(lo)],
            [cx, y(hi)],
          ]),
          stroke: s.color,
          "stroke-width": 1,
        });
      }
      f.plot.child("circle", {
        cx,
        cy: y(r[s.mean]!),
        r: 3,
        fill: s.color,
      });
    });
    // slope of the primary's fitted line in log-log coordinates
    const first = table.rows[0]!;
    const last = table.rows[table.rows.length - 1]!;
    const slope =
      Math.log(last[s.fit]! / first[s.fit]!) /
      Math.log(ns[ns.length - 1]! / ns[0]!);
    legend.push({ label: `${s.label}, fitted slope ${slope.toFixed(3)}`, color: s.color });
  }

  const oracle = table.rows.map(
    (r, i) => [x(ns[i]!), y(r[idx[10]!]!)] as [number, number],
  );
  f.plot.child("path", {
    d: linePath(oracle),
    stroke: "#111827",
    "stroke-width": 1,
    "stroke-dasharray": "2,3",
    fill: "none",
  });
  legend.push({ label: "S2 exact", color: "#111827", dash: "2,3" });

  drawLegend(f, legend, 12, 10);
  drawXAxis(f, x, { label: "window size n" });
  drawYAxis(f, y, { label: "moment sum", grid: true });
  return f.svg.document();
}
