import { deploymentClass, type DeploymentClass } from "./algorithms.js";
import {
  EmptySelection,
  METRIC_COLUMNS,
  type MetricColumn,
  type ResultRow,
  type ResultsTable,
  type Transport,
} from "./schema.js";

export type Grouping = "deployment-class" | "security-level" | "transport";
export type SortOrder = "asc" | "none";

export interface RowFilter {
  transport?: Transport;
  dnssec?: 0 | 1;
  level?: number;
  workers?: number;
}

export interface ChartSpec {
  metric: MetricColumn;
  grouping: Grouping;
  sort?: SortOrder;
  filter?: RowFilter;
  title?: string;
}

export interface ChartFile {
  filename: string;
  svg: string;
}

export interface ReportOutput {
  charts: ChartFile[];
  summary: string;
}

export const METRIC_LABELS: Record<MetricColumn, string> = {
  mean_latency: "latency (ms)",
  mean_bandwidth: "bandwidth (kB)",
  mean_cpu_client: "client CPU (%)",
  mean_cpu_server: "server CPU (%)",
  mean_mem: "memory (%)",
};

const CLASS_ORDER: DeploymentClass[] = [
  "legacy-only",
  "hybrid-kem-legacy-sig",
  "hybrid-legacy-kem-pqc-sig",
  "hybrid-dual",
  "pqc-only",
];

const BAR_W = 34;
const BAR_GAP = 6;
const GROUP_GAP = 30;
const PLOT_H = 220;
const MARGIN = { top: 40, right: 20, bottom: 96, left: 64 };

function fmt(x: number, digits = 2): string {
  return x.toFixed(digits);
}

function suiteLabel(r: ResultRow): string {
  return `${r.kem}+${r.ds}`;
}

function groupValue(r: ResultRow, grouping: Grouping): string {
  switch (grouping) {
    case "deployment-class":
      return deploymentClass(r.kem, r.ds);
    case "security-level":
      return `level ${r.level}`;
    case "transport":
      return r.transport;
  }
}

function groupSortKey(grouping: Grouping, value: string): string {
  if (grouping === "deployment-class") {
    const i = CLASS_ORDER.indexOf(value as DeploymentClass);
    return String(i < 0 ? CLASS_ORDER.length : i).padStart(2, "0");
  }
  return value;
}

export function applyFilter(
  table: ResultsTable,
  filter: RowFilter | undefined,
): ResultRow[] {
  let rows = table.rows;
  if (filter) {
    rows = rows.filter(
      (r) =>
        (filter.transport === undefined || r.transport === filter.transport) &&
        (filter.dnssec === undefined || r.dnssec === filter.dnssec) &&
        (filter.level === undefined || r.level === filter.level) &&
        (filter.workers === undefined || r.workers === filter.workers),
    );
  }
  return rows;
}

interface Group {
  name: string;
  rows: ResultRow[];
}

function groupRows(rows: ResultRow[], spec: ChartSpec): Group[] {
  const byName = new Map<string, ResultRow[]>();
  for (const r of rows) {
    const g = groupValue(r, spec.grouping);
    const bucket = byName.get(g);
    if (bucket) bucket.push(r);
    else byName.set(g, [r]);
  }
  const names = [...byName.keys()].sort((a, b) =>
    groupSortKey(spec.grouping, a).localeCompare(groupSortKey(spec.grouping, b)),
  );
  return names.map((name) => {
    const members = [...byName.get(name)!];
    if (spec.sort === "asc") {
      members.sort(
        (a, b) =>
          a.metrics[spec.metric] - b.metrics[spec.metric] ||
          suiteLabel(a).localeCompare(suiteLabel(b)),
      );
    } else {
      members.sort((a, b) => suiteLabel(a).localeCompare(suiteLabel(b)));
    }
    return { name, rows: members };
  });
}

function esc(s: string): string {
  return s
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Render one grouped bar chart as a standalone SVG string.  Layout and
 * number formatting are fixed, so equal inputs give equal bytes. */
export function renderSvg(groups: Group[], spec: ChartSpec): string {
  const metric = spec.metric;
  const values = groups.flatMap((g) => g.rows.map((r) => r.metrics[metric]));
  const vmax = Math.max(...values, 0) || 1;

  let x = MARGIN.left;
  const bars: string[] = [];
  const groupLabels: string[] = [];
  for (const g of groups) {
    const x0 = x;
    for (const r of g.rows) {
      const v = r.metrics[metric];
      const h = (v / vmax) * PLOT_H;
      const y = MARGIN.top + PLOT_H - h;
      bars.push(
        `<rect x="${fmt(x)}" y="${fmt(y)}" width="${BAR_W}" ` +
          `height="${fmt(h)}" fill="#4878a8" data-value="${fmt(v, 4)}" ` +
          `data-suite="${esc(suiteLabel(r))}"/>`,
        `<text x="${fmt(x + BAR_W / 2)}" y="${fmt(y - 4)}" ` +
          `font-size="9" text-anchor="middle">${fmt(v)}</text>`,
        `<text x="${fmt(x + BAR_W / 2)}" y="${fmt(MARGIN.top + PLOT_H + 10)}" ` +
          `font-size="8" text-anchor="end" ` +
          `transform="rotate(-45 ${fmt(x + BAR_W / 2)} ` +
          `${fmt(MARGIN.top + PLOT_H + 10)})">${esc(suiteLabel(r))}</text>`,
      );
      x += BAR_W + BAR_GAP;
    }
    const mid = (x0 + x - BAR_GAP) / 2;
    groupLabels.push(
      `<text x="${fmt(mid)}" y="${fmt(MARGIN.top + PLOT_H + 88)}" ` +
        `font-size="11" font-weight="bold" text-anchor="middle">` +
        `${esc(g.name)}</text>`,
    );
    x += GROUP_GAP;
  }
  const width = x - GROUP_GAP + MARGIN.right;
  const height = MARGIN.top + PLOT_H + MARGIN.bottom;
  const title = spec.title ?? `${METRIC_LABELS[metric]} by ${spec.grouping}`;

  const axis = [
    `<line x1="${MARGIN.left - 8}" y1="${MARGIN.top}" ` +
      `x2="${MARGIN.left - 8}" y2="${MARGIN.top + PLOT_H}" stroke="#333"/>`,
    `<line x1="${MARGIN.left - 8}" y1="${MARGIN.top + PLOT_H}" ` +
      `x2="${fmt(width - MARGIN.right)}" y2="${MARGIN.top + PLOT_H}" ` +
      `stroke="#333"/>`,
    `<text x="${MARGIN.left - 12}" y="${MARGIN.top + 4}" font-size="9" ` +
      `text-anchor="end">${fmt(vmax)}</text>`,
    `<text x="${MARGIN.left - 12}" y="${MARGIN.top + PLOT_H}" font-size="9" ` +
      `text-anchor="end">0</text>`,
  ];

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width)}" ` +
      `height="${height}" font-family="sans-serif">`,
    `<title>${esc(title)}</title>`,
    `<text x="${fmt(width / 2)}" y="20" font-size="13" ` +
      `text-anchor="middle">${esc(title)}</text>`,
    ...axis,
    ...bars,
    ...groupLabels,
    `</svg>`,
    ``,
  ].join("\n");
}

/** Markdown table of per-group minima over every metric column; the
 * minimum of the chart's own metric is bolded in each group row. */
export function minimaSummary(groups: Group[], spec: ChartSpec): string {
  const lines: string[] = [
    `# Minima for ${METRIC_LABELS[spec.metric]} by ${spec.grouping}`,
    ``,
    `Lowest value of each metric within each group, with the suite that`,
    `attains it.`,
    ``,
    `| group | ${METRIC_COLUMNS.join(" | ")} |`,
    `|---|${METRIC_COLUMNS.map(() => "---|").join("")}`,
  ];
  for (const g of groups) {
    const cells = METRIC_COLUMNS.map((col) => {
      let best = g.rows[0]!;
      for (const r of g.rows) {
        if (r.metrics[col] < best.metrics[col]) best = r;
      }
      const v = fmt(best.metrics[col], 4);
      const cell = `${v} (${suiteLabel(best)})`;
      return col === spec.metric ? `**${cell}**` : cell;
    });
    lines.push(`| ${g.name} | ${cells.join(" | ")} |`);
  }
  lines.push(``);
  return lines.join("\n");
}

/** Compute per-group columnwise minima as plain numbers. */
export function columnMinima(
  groups: Group[],
): Record<string, Record<MetricColumn, number>> {
  const out: Record<string, Record<MetricColumn, number>> = {};
  for (const g of groups) {
    out[g.name] = Object.fromEntries(
      METRIC_COLUMNS.map((col) => [
        col,
        Math.min(...g.rows.map((r) => r.metrics[col])),
      ]),
    ) as Record<MetricColumn, number>;
  }
  return out;
}

export function renderCharts(
  table: ResultsTable,
  spec: ChartSpec,
): ReportOutput {
  const rows = applyFilter(table, spec.filter);
  if (rows.length === 0) {
    throw new EmptySelection(
      `no rows match filter ${JSON.stringify(spec.filter ?? {})}`,
    );
  }
  const groups = groupRows(rows, spec);
  const stem = `${spec.metric}_by_${spec.grouping}`;
  return {
    charts: [{ filename: `${stem}.svg`, svg: renderSvg(groups, spec) }],
    summary: minimaSummary(groups, spec),
  };
}
