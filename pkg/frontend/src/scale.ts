/** Linear and log scales with tick generation, no dependencies. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(count?: number): number[];
}

/** Round a step to the closest 1/2/5 decade multiple. */
function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / mag;
  if (frac <= 1.5) return mag;
  if (frac <= 3.5) return 2 * mag;
  if (frac <= 7.5) return 5 * mag;
  return 10 * mag;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.ticks = (count = 5) => {
    const step = niceStep(Math.abs(span) / count);
    const start = Math.ceil(Math.min(d0, d1) / step) * step;
    const stop = Math.max(d0, d1);
    const out: number[] = [];
    // avoid float drift on exact decade boundaries
    for (let v = start; v <= stop + step * 1e-9; v += step) {
      out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
  };
  return scale;
}

/** Base-10 log scale; the domain must be strictly positive. */
export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) throw new Error("log scale needs a positive domain");
  const inner = linearScale([Math.log10(d0), Math.log10(d1)], range);
  const scale = ((v: number) => inner(Math.log10(v))) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.ticks = () => {
    const lo = Math.ceil(Math.log10(Math.min(d0, d1)) - 1e-9);
    const hi = Math.floor(Math.log10(Math.max(d0, d1)) + 1e-9);
    const out: number[] = [];
    for (let e = lo; e <= hi; e++) out.push(Math.pow(10, e));
    return out;
  };
  return scale;
}

/** Compact tick label: trims float noise, keeps powers readable. */
export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) {
    const e = Math.floor(Math.log10(a));
    const m = v / Math.pow(10, e);
    const mm = Math.round(m * 100) / 100;
    return mm === 1 ? `1e${e}` : `${mm}e${e}`;
  }
  return String(Math.round(v * 1e6) / 1e6);
}
