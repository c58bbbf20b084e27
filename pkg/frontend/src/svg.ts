/**
 * Minimal SVG document builder.
 *
 * Figures assemble a tree of elements and serialize it; there is no DOM
 * and no randomness, so a given input always produces the same bytes.
 */

export type Attrs = Record<string, string | number>;

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function escapeText(s: string): string {
  return s.replace(/[&<>"]/g, (ch) => ESCAPES[ch]!);
}

/** Format a coordinate: fixed decimals, no trailing zeros, -0 avoided. */
export function fmt(v: number): string {
  const s = v.toFixed(2).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

export class Element {
  readonly children: Element[] = [];
  private text = "";

  constructor(
    readonly tag: string,
    readonly attrs: Attrs = {},
  ) {}

  child(tag: string, attrs: Attrs = {}): Element {
    const el = new Element(tag, attrs);
    this.children.push(el);
    return el;
  }

  /** Set escaped text content (leaf elements only). */
  setText(s: string): this {
    this.text = escapeText(s);
    return this;
  }

  render(indent = 0): string {
    const pad = "  ".repeat(indent);
    const attrs = Object.entries(this.attrs)
      .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : escapeText(v)}"`)
      .join("");
    if (this.children.length === 0 && this.text === "") {
      return `${pad}<${this.tag}${attrs}/>`;
    }
    if (this.children.length === 0) {
      return `${pad}<${this.tag}${attrs}>${this.text}</${this.tag}>`;
    }
    const body = this.children.map((c) => c.render(indent + 1)).join("\n");
    return `${pad}<${this.tag}${attrs}>\n${body}\n${pad}</${this.tag}>`;
  }
}

export class Svg extends Element {
  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    super("svg", {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      "font-family": "Helvetica, Arial, sans-serif",
    });
  }

  document(): string {
    return `<?xml version="1.0" encoding="UTF-8"?>\n${this.render()}\n`;
  }
}

/** Polyline/path helper: M x0,y0 L x1,y1 ... */
export function linePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
    .join(" ");
}

/** Upper semicircle arc from (x1, y) to (x2, y). */
export function arcPath(x1: number, x2: number, y: number): string {
  const r = Math.abs(x2 - x1) / 2;
  return `M${fmt(x1)},${fmt(y)} A${fmt(r)},${fmt(r)} 0 0 1 ${fmt(x2)},${fmt(y)}`;
}
