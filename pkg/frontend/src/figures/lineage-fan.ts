/**
 * Arc diagram of one replica's ancestral attachments.
 *
 * Sites sit on a baseline; each edge site -> parent is an arc whose
 * colour is the component of the site. Long jumps leave the window to
 * the left, so the x-domain covers the parents too.
 */
import { requireColumns, Table } from "../csv.js";
import { COLORS, drawEmptyNote, drawXAxis, makeFrame, TEXT } from "../chart.js";
import { linearScale } from "../scale.js";
import { fmt } from "../svg.js";

export interface LineageFanOptions {
  replica?: number;
  width?: number;
  height?: number;
  title?: string;
}

export function renderLineageFan(table: Table, opts: LineageFanOptions = {}): string {
  const [ri, si, pi, ci] = requireColumns(table, [
    "replica",
    "site",
    "parent",
    "component",
  ]);
  const replica = opts.replica ?? 0;
  const rows = table.rows.filter((r) => r[ri!] === replica);
  const f = makeFrame({
    width: opts.width ?? 900,
    height: opts.height ?? 420,
    title: opts.title ?? `ancestral lineages, replica ${replica}`,
  });
  if (rows.length === 0) {
    drawEmptyNote(f);
    return f.svg.document();
  }

  const sites = rows.map((r) => r[si!]!);
  const parents = rows.map((r) => r[pi!]!);
  const lo = Math.min(...parents);
  const hi = Math.max(...sites);
  const x = linearScale([lo, hi], [0, f.width]);
  const baseline = f.height - 14;
  const maxRise = baseline - 8;

  // arcs first, oldest sites in front
  for (const r of rows) {
    const site = r[si!]!;
    const parent = r[pi!]!;
    const comp = r[ci!]!;
    const x1 = x(parent);
    const x2 = x(site);
    const rx = (x2 - x1) / 2;
    const ry = Math.min(rx, maxRise);
    const color = COLORS[(comp - 1) % COLORS.length]!;
    f.plot.child("path", {
      d: `M${fmt(x1)},${fmt(baseline)} A${fmt(rx)},${fmt(ry)} 0 0 1 ${fmt(x2)},${fmt(baseline)}`,
      stroke: color,
      "stroke-width": 1,
      fill: "none",
      opacity: 0.75,
    });
  }
  // site markers over the arcs
  for (const r of rows) {
    const comp = r[ci!]!;
    f.plot.child("circle", {
      cx: x(r[si!]!),
      cy: baseline,
      r: 2,
      fill: COLORS[(comp - 1) % COLORS.length]!,
    });
  }

  const components = new Set(rows.map((r) => r[ci!]!)).size;
  f.plot
    .child("text", {
      x: f.width,
      y: 12,
      "text-anchor": "end",
      "font-size": 11,
      fill: TEXT,
    })
    .setText(`${rows.length} sites, ${components} components`);

  // baseline doubles as the x-axis
  drawXAxis(f, x, { label: "site", at: baseline });
  return f.svg.document();
}
