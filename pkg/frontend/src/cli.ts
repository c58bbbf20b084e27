#!/usr/bin/env node
/**
 * plotkit: offline figure generation from coalsim CSV artifacts.
 *
 *   plotkit <kind> --in file.csv --out fig.svg [options]
 *
 * Kinds: lineage-fan | mrca-hist | cov-heatmap | slopes | qq.
 * Every figure is a pure function of its input files; no mathematics
 * is recomputed here beyond presentation (binning, axis scales).
 */
import { parseArgs } from "node:util";
import { writeFileSync } from "node:fs";

import { readTable, SchemaError } from "./csv.js";
import { renderLineageFan } from "./figures/lineage-fan.js";
import { renderMrcaHist } from "./figures/mrca-hist.js";
import { renderCovHeatmap } from "./figures/cov-heatmap.js";
import { renderSlopes } from "./figures/slopes.js";
import { renderQq } from "./figures/qq.js";

const KINDS = ["lineage-fan", "mrca-hist", "cov-heatmap", "slopes", "qq"] as const;
type Kind = (typeof KINDS)[number];

const USAGE = `usage: plotkit <kind> --in file.csv --out fig.svg [options]

kinds
  lineage-fan   arc diagram of one replica (simulate-components CSV)
                  --replica N   replica to draw (default 0)
  mrca-hist     depth histogram with limit density (mrca CSV)
                  --density F   companion density CSV from mrca-test
                  --gap N       rescale depths to depth/gap (default 1)
                  --bins N      histogram bins (default 40)
  cov-heatmap   covariance grid (paths --cov-out CSV)
  slopes        moment-scaling chart (scaling CSV)
  qq            normal quantile-quantile (normality --qq-out CSV)

common options
  --in F        input CSV (required)
  --out F       output SVG (required)
  --title S     figure title
  --width N     canvas width in px
  --height N    canvas height in px
`;

class UsageError extends Error {}

function intFlag(v: string | undefined, name: string, min = 1): number | undefined {
  if (v === undefined) return undefined;
  const n = Number(v);
  if (!Number.isFinite(n) || !Number.isInteger(n) || n < min) {
    throw new UsageError(`--${name} expects an integer >= ${min}, got '${v}'`);
  }
  return n;
}

export function run(argv: string[]): number {
  let kind: Kind;
  let values: Record<string, string | boolean | undefined>;
  try {
    const head = argv[0];
    if (head === undefined || head === "--help" || head === "-h") {
      process.stdout.write(USAGE);
      return head === undefined ? 2 : 0;
    }
    if (!(KINDS as readonly string[]).includes(head)) {
      throw new UsageError(`unknown kind '${head}'`);
    }
    kind = head as Kind;
    values = parseArgs({
      args: argv.slice(1),
      options: {
        in: { type: "string" },
        out: { type: "string" },
        density: { type: "string" },
        gap: { type: "string" },
        bins: { type: "string" },
        replica: { type: "string" },
        title: { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
      },
    }).values;
    if (!values.in) throw new UsageError("--in is required");
    if (!values.out) throw new UsageError("--out is required");
  } catch (err) {
    process.stderr.write(`plotkit: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }

  try {
    const table = readTable(values.in as string);
    const common = {
      title: values.title as string | undefined,
      width: intFlag(values.width as string | undefined, "width"),
      height: intFlag(values.height as string | undefined, "height"),
    };
    let svg: string;
    switch (kind) {
      case "lineage-fan":
        svg = renderLineageFan(table, {
          ...common,
          replica: intFlag(values.replica as string | undefined, "replica", 0) ?? 0,
        });
        break;
      case "mrca-hist":
        svg = renderMrcaHist(table, {
          ...common,
          density: values.density ? readTable(values.density as string) : undefined,
          gap: intFlag(values.gap as string | undefined, "gap"),
          bins: intFlag(values.bins as string | undefined, "bins"),
        });
        break;
      case "cov-heatmap":
        svg = renderCovHeatmap(table, common);
        break;
      case "slopes":
        svg = renderSlopes(table, common);
        break;
      case "qq":
        svg = renderQq(table, common);
        break;
    }
    writeFileSync(values.out as string, svg);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`plotkit: ${err.message}\n${USAGE}`);
      return 2;
    }
    const tag = err instanceof SchemaError ? "schema error" : "error";
    process.stderr.write(`plotkit: ${tag}: ${(err as Error).message}\n`);
    return 1;
  }
}

// invoked as a script, not imported by tests
if (process.argv[1] && /cli\.(ts|js)$/.test(process.argv[1])) {
  process.exit(run(process.argv.slice(2)));
}
