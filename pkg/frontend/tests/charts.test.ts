import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  applyFilter,
  columnMinima,
  renderCharts,
  type ChartSpec,
} from "../src/charts.js";
import { loadResultsFromPaths } from "../src/load.js";
import {
  EmptySelection,
  METRIC_COLUMNS,
  type ResultsTable,
} from "../src/schema.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const DOT = join(FIXTURES, "dot_comparison_results.csv");
const DOH = join(FIXTURES, "doh_comparison_results.csv");

function table(): ResultsTable {
  return loadResultsFromPaths([DOT, DOH]);
}

function barHeights(svg: string): number[] {
  return [...svg.matchAll(/<rect [^>]*height="([\d.]+)"/g)].map((m) =>
    Number(m[1]),
  );
}

function barValues(svg: string): number[] {
  return [...svg.matchAll(/data-value="([\d.]+)"/g)].map((m) => Number(m[1]));
}

describe("renderCharts", () => {
  const spec: ChartSpec = {
    metric: "mean_bandwidth",
    grouping: "security-level",
    sort: "asc",
    filter: { transport: "dot" },
  };

  it("produces byte-identical output for identical inputs", () => {
    const a = renderCharts(table(), spec);
    const b = renderCharts(table(), spec);
    expect(a.charts).toHaveLength(1);
    expect(a.charts[0]!.svg).toBe(b.charts[0]!.svg);
    expect(a.charts[0]!.filename).toBe(b.charts[0]!.filename);
    expect(a.summary).toBe(b.summary);
  });

  it("is insensitive to input row order", () => {
    const t1 = table();
    const t2: ResultsTable = { rows: [...t1.rows].reverse() };
    expect(renderCharts(t1, spec).charts[0]!.svg).toBe(
      renderCharts(t2, spec).charts[0]!.svg,
    );
  });

  it("sorts bars nondecreasing within each group when sort=asc", () => {
    const out = renderCharts(table(), spec);
    const svg = out.charts[0]!.svg;
    const values = barValues(svg);
    expect(values.length).toBeGreaterThan(3);
    // Level-1 fixture rows span 0.58 to 7.96 kB, so a sort violation
    // anywhere would show up as a strict decrease somewhere; heights may
    // only decrease at a group boundary reset.
    const heights = barHeights(svg);
    let groupStart = 0;
    for (let i = 1; i < values.length; i++) {
      if (values[i]! < values[i - 1]!) groupStart = i;
      for (let j = groupStart; j < i; j++) {
        expect(heights[j]!).toBeLessThanOrEqual(heights[i]! + 1e-9);
      }
    }
    // The full level-1 group itself must be nondecreasing.
    const l1 = applyFilter(table(), { transport: "dot", level: 1 }).map(
      (r) => r.metrics.mean_bandwidth,
    );
    const sorted = [...l1].sort((x, y) => x - y);
    expect(values.slice(0, l1.length)).toEqual(
      sorted.map((v) => Number(v.toFixed(4))),
    );
  });

  it("summary minima equal columnwise minima of the filtered table", () => {
    const out = renderCharts(table(), spec);
    const rows = applyFilter(table(), spec.filter);
    for (const level of [1, 3, 5]) {
      const group = rows.filter((r) => r.level === level);
      for (const col of METRIC_COLUMNS) {
        const min = Math.min(...group.map((r) => r.metrics[col]));
        expect(out.summary).toContain(min.toFixed(4));
      }
    }
  });

  it("columnMinima matches an independent reduction", () => {
    const rows = applyFilter(table(), { transport: "doh" });
    const groups = [{ name: "all", rows }];
    const minima = columnMinima(groups)["all"]!;
    for (const col of METRIC_COLUMNS) {
      const expected = rows.reduce(
        (acc, r) => Math.min(acc, r.metrics[col]),
        Infinity,
      );
      expect(minima[col]).toBe(expected);
    }
  });

  it("groups by deployment class", () => {
    const out = renderCharts(table(), {
      metric: "mean_bandwidth",
      grouping: "deployment-class",
      filter: { transport: "dot", level: 1 },
    });
    const svg = out.charts[0]!.svg;
    for (const cls of ["legacy-only", "hybrid-kem-legacy-sig", "hybrid-dual", "pqc-only"]) {
      expect(svg).toContain(`>${cls}</text>`);
    }
    expect(out.charts[0]!.filename).toBe(
      "mean_bandwidth_by_deployment-class.svg",
    );
  });

  it("throws EmptySelection when the filter matches nothing", () => {
    expect(() =>
      renderCharts(table(), { ...spec, filter: { transport: "udp" } }),
    ).toThrowError(EmptySelection);
  });

  it("emits well-formed standalone SVG", () => {
    const svg = renderCharts(table(), spec).charts[0]!.svg;
    expect(svg.startsWith("<svg xmlns=")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    const opens = (svg.match(/<rect /g) ?? []).length;
    expect(opens).toBe(barValues(svg).length);
  });
});
