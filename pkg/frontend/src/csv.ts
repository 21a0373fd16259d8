import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface ResultRow {
  setup: number;
  scheme: string;
  precoder: string;
  ue: number;
  se: number;
  status: string;
}

export interface SummaryRow {
  scheme: string;
  precoder: string;
  avgSe: number;
  se90: number;
  count: number;
  /** Column values exactly as they appear in the file, for full-precision labels. */
  raw: { avg_se: string; se90: string; count: string };
}

export const RESULT_COLUMNS = ["setup", "scheme", "precoder", "ue", "se_bits_per_hz", "status"];
export const SUMMARY_COLUMNS = ["scheme", "precoder", "avg_se", "se90", "count"];

function parseTable(path: string, required: string[]): Record<string, string>[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: parse error at row ${first.row}: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((column) => !fields.includes(column));
  if (missing.length === 1) {
    throw new Error(`${path}: missing column "${missing[0]}"`);
  }
  if (missing.length > 1) {
    throw new Error(`${path}: missing columns ${missing.map((c) => `"${c}"`).join(", ")}`);
  }
  return parsed.data;
}

export function readResultRows(path: string): ResultRow[] {
  return parseTable(path, RESULT_COLUMNS).map((row) => ({
    setup: Number(row.setup),
    scheme: row.scheme,
    precoder: row.precoder,
    ue: Number(row.ue),
    se: Number(row.se_bits_per_hz),
    status: row.status,
  }));
}

export function readSummaryRows(path: string): SummaryRow[] {
  return parseTable(path, SUMMARY_COLUMNS).map((row) => ({
    scheme: row.scheme,
    precoder: row.precoder,
    avgSe: Number(row.avg_se),
    se90: Number(row.se90),
    count: Number(row.count),
    raw: { avg_se: row.avg_se, se90: row.se90, count: row.count },
  }));
}
