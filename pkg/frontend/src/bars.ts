import type { SummaryRow } from "./csv.js";
import { orderBy, PRECODER_ORDER, SCHEME_ORDER } from "./style.js";

export interface Metric {
  name: string;
  column: "se90" | "avg_se";
  axisTitle: string;
}

export const METRICS: Record<string, Metric> = {
  se90: { name: "se90", column: "se90", axisTitle: "90% likely SE (bit/s/Hz)" },
  avg: { name: "avg", column: "avg_se", axisTitle: "average SE (bit/s/Hz)" },
};

export function selectMetric(name: string): Metric {
  const metric = METRICS[name];
  if (!metric) {
    const known = Object.keys(METRICS).join(", ");
    throw new Error(`unknown metric "${name}" (expected one of: ${known})`);
  }
  return metric;
}

export interface Bar {
  scheme: string;
  precoder: string;
  value: number;
  /** The metric column's text exactly as read from summary.csv. */
  rawValue: string;
}

export interface BarCluster {
  precoder: string;
  bars: Bar[];
}

/**
 * One cluster per precoder, one bar per scheme inside it, in fixed order.
 * Values are taken verbatim from the summary rows; nothing is recomputed.
 */
export function buildBarClusters(rows: SummaryRow[], metric: Metric): BarCluster[] {
  if (rows.length === 0) {
    throw new Error("summary has no rows to plot");
  }
  const schemes = orderBy(rows.map((r) => r.scheme), SCHEME_ORDER);
  const precoders = orderBy(rows.map((r) => r.precoder), PRECODER_ORDER);
  const clusters: BarCluster[] = [];
  for (const precoder of precoders) {
    const bars: Bar[] = [];
    for (const scheme of schemes) {
      const row = rows.find((r) => r.scheme === scheme && r.precoder === precoder);
      if (!row) {
        continue;
      }
      const value = metric.column === "se90" ? row.se90 : row.avgSe;
      bars.push({ scheme, precoder, value, rawValue: row.raw[metric.column] });
    }
    if (bars.length > 0) {
      clusters.push({ precoder, bars });
    }
  }
  return clusters;
}
