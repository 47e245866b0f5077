#!/usr/bin/env node
/** Command line front end: read comparison CSVs, write SVG charts and a
 * minima summary.
 *
 *   pqcdns-report --out charts/ --metric mean_bandwidth \
 *     --grouping security-level --sort asc results/dot_comparison_results.csv
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { renderCharts, type ChartSpec, type Grouping, type SortOrder } from "./charts.js";
import { loadResultsFromPaths } from "./load.js";
import { METRIC_COLUMNS, type MetricColumn } from "./schema.js";

function usage(): never {
  process.stderr.write(
    "usage: pqcdns-report [--out DIR] [--metric M] [--grouping G] " +
      "[--sort asc|none] CSV...\n" +
      `  metrics: ${METRIC_COLUMNS.join(", ")}\n` +
      "  groupings: deployment-class, security-level, transport\n",
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  let out = ".";
  let metric: MetricColumn = "mean_bandwidth";
  let grouping: Grouping = "security-level";
  let sort: SortOrder = "asc";
  const paths: string[] = [];

  for (let i = 0; i < argv.length; i++) {
    const a = argv[i]!;
    const next = () => {
      const v = argv[++i];
      if (v === undefined) usage();
      return v;
    };
    if (a === "--out") out = next();
    else if (a === "--metric") {
      const m = next();
      if (!(METRIC_COLUMNS as readonly string[]).includes(m)) usage();
      metric = m as MetricColumn;
    } else if (a === "--grouping") {
      const g = next();
      if (!["deployment-class", "security-level", "transport"].includes(g)) {
        usage();
      }
      grouping = g as Grouping;
    } else if (a === "--sort") {
      const s = next();
      if (s !== "asc" && s !== "none") usage();
      sort = s;
    } else if (a === "--help" || a === "-h") usage();
    else if (a.startsWith("--")) usage();
    else paths.push(a);
  }
  if (paths.length === 0) usage();

  const spec: ChartSpec = { metric, grouping, sort };
  try {
    const table = loadResultsFromPaths(paths);
    const report = renderCharts(table, spec);
    mkdirSync(out, { recursive: true });
    for (const chart of report.charts) {
      const path = join(out, chart.filename);
      writeFileSync(path, chart.svg);
      process.stdout.write(`wrote ${path}\n`);
    }
    const summaryPath = join(out, `${metric}_by_${grouping}_minima.md`);
    writeFileSync(summaryPath, report.summary);
    process.stdout.write(`wrote ${summaryPath}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
