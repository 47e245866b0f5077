import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";

import { suiteLevel } from "./algorithms.js";
import {
  METRIC_COLUMNS,
  type ResultRow,
  type ResultsTable,
  SchemaMismatch,
  type Transport,
  TRANSPORTS,
  comparisonRowSchema,
  rowKey,
} from "./schema.js";

/** Run parameters that the comparison CSV itself does not carry; they are
 * taken from tags if given, otherwise inferred from the file name written
 * by the benchmark CLI ("dot_comparison_results.csv" and friends). */
export interface FileTags {
  transport?: Transport;
  dnssec?: 0 | 1;
  workers?: number;
}

export interface CsvInput {
  name: string;
  text: string;
  tags?: FileTags;
}

function inferTransport(name: string): Transport | undefined {
  const stem = basename(name).toLowerCase();
  for (const t of TRANSPORTS) {
    if (stem.startsWith(`${t}_`) || stem.includes(`_${t}_`)) return t;
  }
  return undefined;
}

function parseOne(input: CsvInput): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(input.text.trim(), {
    header: true,
    comments: "#",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new SchemaMismatch("value", `${input.name}: ${e.message}`);
  }
  const header = parsed.meta.fields ?? [];
  for (const col of ["kem", "ds", ...METRIC_COLUMNS]) {
    if (!header.includes(col)) {
      throw new SchemaMismatch(
        "column",
        `${input.name}: missing metric column '${col}'`,
      );
    }
  }
  const transport = input.tags?.transport ?? inferTransport(input.name);
  if (transport === undefined) {
    throw new SchemaMismatch(
      "value",
      `${input.name}: transport not tagged and not inferable from the file name`,
    );
  }
  const dnssec = input.tags?.dnssec ?? 0;
  const workers = input.tags?.workers ?? 1;

  return parsed.data.map((raw, i) => {
    const check = comparisonRowSchema.safeParse(raw);
    if (!check.success) {
      const issue = check.error.issues[0]!;
      throw new SchemaMismatch(
        "value",
        `${input.name} row ${i + 1}: ${issue.path.join(".")} ${issue.message}`,
      );
    }
    const row = check.data;
    const metrics = Object.fromEntries(
      METRIC_COLUMNS.map((c) => [c, row[c]]),
    ) as ResultRow["metrics"];
    return {
      kem: row.kem,
      ds: row.ds,
      transport,
      dnssec,
      level: suiteLevel(row.kem, row.ds),
      workers,
      metrics,
      source: input.name,
    };
  });
}

/** Merge one or more comparison CSVs into a single validated table. */
export function loadResults(inputs: CsvInput[]): ResultsTable {
  const rows: ResultRow[] = [];
  const seen = new Map<string, string>();
  for (const input of inputs) {
    for (const row of parseOne(input)) {
      const key = rowKey(row);
      const prior = seen.get(key);
      if (prior !== undefined) {
        throw new SchemaMismatch(
          "duplicate",
          `duplicate key (${key.replaceAll("|", ", ")}) in ${row.source}, ` +
            `first seen in ${prior}`,
        );
      }
      seen.set(key, row.source);
      rows.push(row);
    }
  }
  return { rows };
}

export function loadResultsFromPaths(
  paths: string[],
  tags?: FileTags,
): ResultsTable {
  return loadResults(
    paths.map((p) => ({ name: p, text: readFileSync(p, "utf-8"), tags })),
  );
}
