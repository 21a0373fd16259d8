#!/usr/bin/env node
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { buildBarClusters, selectMetric } from "./bars.js";
import { readResultRows, readSummaryRows } from "./csv.js";
import { buildCdfCurves } from "./curves.js";
import { renderBarsSvg, renderCdfSvg } from "./svg.js";

const USAGE = `usage: cfiama-plot --kind cdf|bars --metric se90|avg --in <csv> --out <file>

  --kind    figure kind: "cdf" draws per-(scheme, precoder) SE CDF curves
            from results.csv; "bars" draws grouped summary bars from
            summary.csv, clustered by precoder
  --metric  summary column for --kind bars: "se90" or "avg" (default "se90")
  --in      input CSV path
  --out     output SVG path
`;

type Print = (message: string) => void;

export function run(argv: string[], log: Print = console.log, warn: Print = console.error): number {
  let values: { kind?: string; metric?: string; in?: string; out?: string; help?: boolean };
  try {
    values = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        metric: { type: "string", default: "se90" },
        in: { type: "string" },
        out: { type: "string" },
        help: { type: "boolean", short: "h", default: false },
      },
    }).values;
  } catch (err) {
    warn(String(err instanceof Error ? err.message : err));
    warn(USAGE);
    return 2;
  }

  if (values.help) {
    log(USAGE);
    return 0;
  }
  for (const flag of ["kind", "in", "out"] as const) {
    if (!values[flag]) {
      warn(`missing required flag --${flag}`);
      warn(USAGE);
      return 2;
    }
  }
  if (values.kind !== "cdf" && values.kind !== "bars") {
    warn(`unknown kind "${values.kind}" (expected "cdf" or "bars")`);
    return 2;
  }

  try {
    selectMetric(values.metric ?? "se90");
  } catch (err) {
    warn(String(err instanceof Error ? err.message : err));
    return 2;
  }

  const inPath = values.in as string;
  const outPath = values.out as string;
  try {
    let svg: string;
    let note: string;
    if (values.kind === "cdf") {
      const rows = readResultRows(inPath);
      const { curves, warnings } = buildCdfCurves(rows);
      for (const warning of warnings) {
        warn(warning);
      }
      if (curves.length === 0) {
        warn(`${inPath}: no group has enough usable rows for a CDF curve`);
        return 1;
      }
      svg = renderCdfSvg(curves);
      note = `${curves.length} curves over ${rows.length} rows`;
    } else {
      const metric = selectMetric(values.metric ?? "se90");
      const rows = readSummaryRows(inPath);
      const clusters = buildBarClusters(rows, metric);
      svg = renderBarsSvg(clusters, metric);
      const nBars = clusters.reduce((acc, c) => acc + c.bars.length, 0);
      note = `${nBars} bars (metric ${metric.name})`;
    }
    mkdirSync(dirname(outPath), { recursive: true });
    writeFileSync(outPath, svg);
    log(`wrote ${outPath} (${note})`);
    return 0;
  } catch (err) {
    warn(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const invokedDirectly =
  typeof process.argv[1] === "string" && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
