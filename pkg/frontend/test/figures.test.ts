import { describe, expect, it } from "vitest";
import { fileURLToPath } from "node:url";

import { parseTable, readTable, SchemaError } from "../src/csv.js";
import { renderLineageFan } from "../src/figures/lineage-fan.js";
import { renderMrcaHist } from "../src/figures/mrca-hist.js";
import { renderCovHeatmap } from "../src/figures/cov-heatmap.js";
import { renderSlopes } from "../src/figures/slopes.js";
import { renderQq } from "../src/figures/qq.js";

const fixture = (name: string) =>
  readTable(fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)));

function expectSvg(svg: string): void {
  expect(svg.startsWith('<?xml version="1.0"')).toBe(true);
  expect(svg).toContain("<svg");
  expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  expect(svg).not.toMatch(/NaN|Infinity|undefined/);
}

describe("lineage-fan", () => {
  it("draws arcs and sites for one replica", () => {
    const svg = renderLineageFan(fixture("components.csv"), { replica: 1 });
    expectSvg(svg);
    expect(svg).toContain("48 sites");
    expect(svg).toContain("<path");
    expect(svg).toContain("<circle");
  });

  it("is deterministic", () => {
    const t = fixture("components.csv");
    expect(renderLineageFan(t, { replica: 0 })).toBe(renderLineageFan(t, { replica: 0 }));
  });

  it("notes an absent replica instead of failing", () => {
    const svg = renderLineageFan(fixture("components.csv"), { replica: 99 });
    expectSvg(svg);
    expect(svg).toContain("no data rows");
  });

  it("rejects a table without parent edges", () => {
    const t = parseTable("replica,site\n0,1\n");
    expect(() => renderLineageFan(t)).toThrow(SchemaError);
    expect(() => renderLineageFan(t)).toThrow(/parent/);
  });
});

describe("mrca-hist", () => {
  it("draws histogram bars from coalesced rows", () => {
    const svg = renderMrcaHist(fixture("mrca.csv"), { gap: 200, bins: 36 });
    expectSvg(svg);
    expect(svg).toMatch(/\d+ coalesced of 2000/);
    expect(svg).toContain("<rect");
  });

  it("overlays the density companion with a legend", () => {
    const svg = renderMrcaHist(fixture("mrca.csv"), {
      gap: 200,
      density: fixture("density.csv"),
    });
    expectSvg(svg);
    expect(svg).toContain("limit density (truncated)");
    expect(svg).toContain("stroke-dasharray");
  });

  it("notes empty input", () => {
    const svg = renderMrcaHist(parseTable("replica,coalesced,depth\n"));
    expect(svg).toContain("no data rows");
  });

  it("rejects a density table missing its curve", () => {
    const bad = parseTable("x,density\n0.5,1.0\n");
    expect(() => renderMrcaHist(fixture("mrca.csv"), { density: bad })).toThrow(
      /truncated_density/,
    );
  });
});

describe("cov-heatmap", () => {
  it("draws one cell per grid pair with values", () => {
    const svg = renderCovHeatmap(fixture("cov.csv"));
    expectSvg(svg);
    const cells = svg.match(/<rect/g) ?? [];
    expect(cells.length).toBeGreaterThanOrEqual(17);
    expect(svg).toContain("0.25");
  });

  it("rejects an incomplete grid", () => {
    const t = parseTable("s,t,empirical,limit\n0.5,0.5,1,1\n0.5,1,1,1\n1,0.5,1,1\n");
    expect(() => renderCovHeatmap(t)).toThrow(SchemaError);
  });

  it("notes empty input", () => {
    expect(renderCovHeatmap(parseTable("s,t,empirical,limit\n"))).toContain("no data rows");
  });
});

describe("slopes", () => {
  it("draws fitted lines, whiskers and the exact curve", () => {
    const svg = renderSlopes(fixture("scaling.csv"));
    expectSvg(svg);
    expect(svg).toContain("slope");
    expect(svg).toContain("S2 exact");
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(12);
  });

  it("is deterministic", () => {
    const t = fixture("scaling.csv");
    expect(renderSlopes(t)).toBe(renderSlopes(t));
  });

  it("rejects a table without fit columns", () => {
    const t = parseTable("n,mean_s2,se_s2\n64,1,0.1\n");
    expect(() => renderSlopes(t)).toThrow(/fit_s2/);
  });
});

describe("qq", () => {
  it("draws quantile dots around the identity line", () => {
    const svg = renderQq(fixture("qq.csv"));
    expectSvg(svg);
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(500);
    expect(svg).toContain("stroke-dasharray");
  });

  it("notes empty input", () => {
    expect(renderQq(parseTable("normal_quantile,sample_quantile\n"))).toContain("no data rows");
  });

  it("rejects missing quantile columns", () => {
    expect(() => renderQq(parseTable("a,b\n1,2\n"))).toThrow(/normal_quantile/);
  });
});
