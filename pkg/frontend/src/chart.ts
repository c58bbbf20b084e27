/** Shared chart frame: margins, axes, grid lines, title, legend. */
import { linePath, Element, Svg } from "./svg.js";
import { Scale, tickLabel } from "./scale.js";

export const COLORS = [
  "#2563eb",
  "#dc2626",
  "#059669",
  "#d97706",
  "#7c3aed",
  "#0891b2",
  "#be185d",
  "#4d7c0f",
];

export const AXIS = "#374151";
export const GRID = "#e5e7eb";
export const TEXT = "#111827";

export interface Frame {
  svg: Svg;
  plot: Element;
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface FrameOptions {
  width: number;
  height: number;
  title?: string;
  margin?: { top: number; right: number; bottom: number; left: number };
}

/** White canvas with a titled plot area; axes are drawn separately. */
export function makeFrame(opts: FrameOptions): Frame {
  const margin = opts.margin ?? { top: 42, right: 20, bottom: 46, left: 58 };
  const svg = new Svg(opts.width, opts.height);
  svg.child("rect", {
    x: 0,
    y: 0,
    width: opts.width,
    height: opts.height,
    fill: "#ffffff",
  });
  if (opts.title) {
    svg
      .child("text", {
        x: opts.width / 2,
        y: margin.top - 18,
        "text-anchor": "middle",
        "font-size": 15,
        fill: TEXT,
      })
      .setText(opts.title);
  }
  const plot = svg.child("g", {
    transform: `translate(${margin.left},${margin.top})`,
  });
  return {
    svg,
    plot,
    left: margin.left,
    top: margin.top,
    width: opts.width - margin.left - margin.right,
    height: opts.height - margin.top - margin.bottom,
  };
}

export interface AxisOptions {
  label?: string;
  grid?: boolean;
  ticks?: number[];
  /** y position of the x-axis line; defaults to the plot bottom */
  at?: number;
}

export function drawXAxis(f: Frame, scale: Scale, opts: AxisOptions = {}): void {
  const y = opts.at ?? f.height;
  const ticks = opts.ticks ?? scale.ticks();
  f.plot.child("path", {
    d: linePath([
      [0, y],
      [f.width, y],
    ]),
    stroke: AXIS,
    fill: "none",
  });
  for (const t of ticks) {
    const x = scale(t);
    if (x < -0.5 || x > f.width + 0.5) continue;
    if (opts.grid) {
      f.plot.child("path", {
        d: linePath([
          [x, 0],
          [x, f.height],
        ]),
        stroke: GRID,
        fill: "none",
      });
    }
    f.plot.child("path", {
      d: linePath([
        [x, y],
        [x, y + 5],
      ]),
      stroke: AXIS,
      fill: "none",
    });
    f.plot
      .child("text", {
        x,
        y: y + 18,
        "text-anchor": "middle",
        "font-size": 11,
        fill: TEXT,
      })
      .setText(tickLabel(t));
  }
  if (opts.label) {
    f.plot
      .child("text", {
        x: f.width / 2,
        y: y + 36,
        "text-anchor": "middle",
        "font-size": 12,
        fill: TEXT,
      })
      .setText(opts.label);
  }
}

export function drawYAxis(f: Frame, scale: Scale, opts: AxisOptions = {}): void {
  const ticks = opts.ticks ?? scale.ticks();
  f.plot.child("path", {
    d: linePath([
      [0, 0],
      [0, f.height],
    ]),
    stroke: AXIS,
    fill: "none",
  });
  for (const t of ticks) {
    const y = scale(t);
    if (y < -0.5 || y > f.height + 0.5) continue;
    if (opts.grid) {
      f.plot.child("path", {
        d: linePath([
          [0, y],
          [f.width, y],
        ]),
        stroke: GRID,
        fill: "none",
      });
    }
    f.plot.child("path", {
      d: linePath([
        [-5, y],
        [0, y],
      ]),
      stroke: AXIS,
      fill: "none",
    });
    f.plot
      .child("text", {
        x: -8,
        y: y + 4,
        "text-anchor": "end",
        "font-size": 11,
        fill: TEXT,
      })
      .setText(tickLabel(t));
  }
  if (opts.label) {
    f.plot.child("text", {
      x: -42,
      y: f.height / 2,
      "text-anchor": "middle",
      "font-size": 12,
      fill: TEXT,
      transform: `rotate(-90 -42 ${f.height / 2})`,
    }).setText(opts.label);
  }
}

export interface LegendItem {
  label: string;
  color: string;
  dash?: string;
}

export function drawLegend(f: Frame, items: LegendItem[], x: number, y: number): void {
  const g = f.plot.child("g");
  items.forEach((item, i) => {
    const yy = y + i * 16;
    g.child("path", {
      d: linePath([
        [x, yy],
        [x + 18, yy],
      ]),
      stroke: item.color,
      "stroke-width": 2,
      fill: "none",
      ...(item.dash ? { "stroke-dasharray": item.dash } : {}),
    });
    g.child("text", {
      x: x + 24,
      y: yy + 4,
      "font-size": 11,
      fill: TEXT,
    }).setText(item.label);
  });
}

/** Centered note for figures rendered from files with no data rows. */
export function drawEmptyNote(f: Frame): void {
  f.plot
    .child("text", {
      x: f.width / 2,
      y: f.height / 2,
      "text-anchor": "middle",
      "font-size": 12,
      fill: "#6b7280",
    })
    .setText("no data rows");
}
