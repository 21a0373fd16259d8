/**
 * Fixed ordering and styling shared by both figure kinds, so that re-running
 * on the same CSVs always produces byte-identical SVG output.
 */

export const SCHEME_ORDER = ["iarmin", "iarsum", "scalable", "greedy", "random"];
export const PRECODER_ORDER = ["mr", "lpmmse"];

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#ff7f0e",
  "#9467bd",
  "#8c564b",
  "#17becf",
  "#bcbd22",
  "#7f7f7f",
  "#e377c2",
];

/** Sort keys by a known order, unknown entries after the known ones, alphabetically. */
export function orderBy(values: string[], known: string[]): string[] {
  const present = new Set(values);
  const head = known.filter((v) => present.has(v));
  const tail = [...present].filter((v) => !known.includes(v)).sort();
  return [...head, ...tail];
}

export function schemeColor(scheme: string, orderedSchemes: string[]): string {
  return PALETTE[orderedSchemes.indexOf(scheme) % PALETTE.length];
}
