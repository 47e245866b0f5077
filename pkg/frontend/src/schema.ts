import { z } from "zod";

/** Metric columns of the comparison CSV, in file order. */
export const METRIC_COLUMNS = [
  "mean_latency",
  "mean_bandwidth",
  "mean_cpu_client",
  "mean_cpu_server",
  "mean_mem",
] as const;

export type MetricColumn = (typeof METRIC_COLUMNS)[number];

export const TRANSPORTS = ["dot", "doh", "udp"] as const;
export type Transport = (typeof TRANSPORTS)[number];

const numeric = z
  .string()
  .regex(/^-?\d+(\.\d+)?([eE][+-]?\d+)?$/, "not a number")
  .transform(Number);

export const comparisonRowSchema = z.object({
  kem: z.string().min(1),
  ds: z.string().min(1),
  mean_latency: numeric,
  mean_bandwidth: numeric,
  mean_cpu_client: numeric,
  mean_cpu_server: numeric,
  mean_mem: numeric,
});

export const sessionRowSchema = z.object({
  session_id: numeric,
  latency_ms: numeric,
  bandwidth_kb: numeric,
});

/** A benchmark result row plus the run parameters that key it. */
export interface ResultRow {
  kem: string;
  ds: string;
  transport: Transport;
  dnssec: 0 | 1;
  level: number;
  workers: number;
  metrics: Record<MetricColumn, number>;
  source: string;
}

export interface ResultsTable {
  rows: ResultRow[];
}

export class SchemaMismatch extends Error {
  constructor(
    public readonly reason: "duplicate" | "column" | "value",
    message: string,
  ) {
    super(message);
    this.name = "SchemaMismatch";
  }
}

export class EmptySelection extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptySelection";
  }
}

export function rowKey(r: ResultRow): string {
  return [r.kem, r.ds, r.transport, r.dnssec, r.level, r.workers].join("|");
}
