/**
 * Heatmap of the empirical covariance grid against the limit target.
 *
 * Cells are filled by the empirical value; each carries the number and,
 * underneath, the deviation from the limit column of the same file.
 */
import { requireColumns, SchemaError, Table } from "../csv.js";
import { drawEmptyNote, makeFrame, TEXT } from "../chart.js";
import { tickLabel } from "../scale.js";

export interface CovHeatmapOptions {
  width?: number;
  height?: number;
  title?: string;
}

/** Two-stop ramp from near-white to a deep blue. */
function ramp(t: number): string {
  const from = [248, 250, 252];
  const to = [29, 78, 216];
  const c = from.map((f, i) => Math.round(f + (to[i]! - f) * t));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

export function renderCovHeatmap(table: Table, opts: CovHeatmapOptions = {}): string {
  const [si, ti, ei, li] = requireColumns(table, ["s", "t", "empirical", "limit"]);
  const f = makeFrame({
    width: opts.width ?? 560,
    height: opts.height ?? 520,
    title: opts.title ?? "covariance of the rescaled path",
    margin: { top: 48, right: 24, bottom: 52, left: 64 },
  });
  if (table.rows.length === 0) {
    drawEmptyNote(f);
    return f.svg.document();
  }

  const ss = [...new Set(table.rows.map((r) => r[si!]!))].sort((a, b) => a - b);
  const ts = [...new Set(table.rows.map((r) => r[ti!]!))].sort((a, b) => a - b);
  const value = new Map<string, [number, number]>();
  for (const r of table.rows) {
    value.set(`${r[si!]},${r[ti!]}`, [r[ei!]!, r[li!]!]);
  }
  if (value.size !== ss.length * ts.length) {
    throw new SchemaError(
      `expected a full ${ss.length}x${ts.length} grid, have ${value.size} cells`,
    );
  }

  const cw = f.width / ss.length;
  const ch = f.height / ts.length;
  const vals = table.rows.map((r) => r[ei!]!);
  const vMin = Math.min(...vals);
  const vMax = Math.max(...vals);
  const span = vMax - vMin || 1;

  ss.forEach((s, a) => {
    ts.forEach((t, b) => {
      const [emp, lim] = value.get(`${s},${t}`)!;
      const cx = a * cw;
      // t grows upward
      const cy = (ts.length - 1 - b) * ch;
      const tt = (emp - vMin) / span;
      f.plot.child("rect", {
        x: cx,
        y: cy,
        width: cw,
        height: ch,
        fill: ramp(tt),
        stroke: "#ffffff",
        "stroke-width": 1,
      });
      const dark = tt > 0.55;
      f.plot
        .child("text", {
          x: cx + cw / 2,
          y: cy + ch / 2 - 2,
          "text-anchor": "middle",
          "font-size": 12,
          fill: dark ? "#ffffff" : TEXT,
        })
        .setText(emp.toFixed(3));
      f.plot
        .child("text", {
          x: cx + cw / 2,
          y: cy + ch / 2 + 13,
          "text-anchor": "middle",
          "font-size": 9,
          fill: dark ? "#dbeafe" : "#6b7280",
        })
        .setText(`${emp - lim >= 0 ? "+" : ""}${(emp - lim).toFixed(3)} vs limit`);
    });
  });

  // cell-centered tick labels
  ss.forEach((s, a) => {
    f.plot
      .child("text", {
        x: a * cw + cw / 2,
        y: f.height + 16,
        "text-anchor": "middle",
        "font-size": 11,
        fill: TEXT,
      })
      .setText(tickLabel(s));
  });
  ts.forEach((t, b) => {
    f.plot
      .child("text", {
        x: -8,
        y: (ts.length - 1 - b) * ch + ch / 2 + 4,
        "text-anchor": "end",
        "font-size": 11,
        fill: TEXT,
      })
      .setText(tickLabel(t));
  });
  f.plot
    .child("text", {
      x: f.width / 2,
      y: f.height + 36,
      "text-anchor": "middle",
      "font-size": 12,
      fill: TEXT,
    })
    .setText("s");
  f.plot.child("text", {
    x: -46,
    y: f.height / 2,
    "text-anchor": "middle",
    "font-size": 12,
    fill: TEXT,
    transform: `rotate(-90 -46 ${f.height / 2})`,
  }).setText("t");
  return f.svg.document();
}
