import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { run } from "../src/cli.js";

const RESULTS_HEADER = "setup,scheme,precoder,ue,se_bits_per_hz,status\n";
const SUMMARY_HEADER = "scheme,precoder,avg_se,se90,count\n";

function tenRows(scheme: string, precoder: string): string {
  return Array.from({ length: 10 }, (_, i) => `0,${scheme},${precoder},${i},${i + 1},ok`).join("\n");
}

function capture() {
  const lines: string[] = [];
  return { lines, print: (message: string) => lines.push(message) };
}

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plots-cli-"));
}

describe("cli", () => {
  it("prints usage on --help", () => {
    const out = capture();
    const code = run(["--help"], out.print, out.print);
    expect(code).toBe(0);
    const usage = out.lines.join("\n");
    for (const flag of ["--kind", "--metric", "--in", "--out"]) {
      expect(usage).toContain(flag);
    }
  });

  it("requires kind, in, and out", () => {
    const err = capture();
    expect(run([], capture().print, err.print)).toBe(2);
    expect(err.lines[0]).toContain("--kind");
  });

  it("rejects an unknown kind", () => {
    const err = capture();
    const code = run(["--kind", "pie", "--in", "x.csv", "--out", "y.svg"], capture().print, err.print);
    expect(code).toBe(2);
    expect(err.lines[0]).toContain('unknown kind "pie"');
  });

  it("rejects an unknown metric by name", () => {
    const err = capture();
    const code = run(
      ["--kind", "bars", "--metric", "p50", "--in", "x.csv", "--out", "y.svg"],
      capture().print,
      err.print
    );
    expect(code).toBe(2);
    expect(err.lines[0]).toContain('unknown metric "p50"');
  });

  it("rejects an unknown flag", () => {
    const err = capture();
    expect(run(["--bogus"], capture().print, err.print)).toBe(2);
  });

  it("renders a CDF figure from results.csv", () => {
    const dir = tempDir();
    const inPath = join(dir, "results.csv");
    const outPath = join(dir, "out", "cdf.svg");
    writeFileSync(inPath, RESULTS_HEADER + tenRows("iarmin", "mr") + "\n" + tenRows("random", "mr") + "\n");
    const out = capture();
    const code = run(["--kind", "cdf", "--in", inPath, "--out", outPath], out.print, out.print);
    expect(code).toBe(0);
    expect(out.lines[out.lines.length - 1]).toContain(`wrote ${outPath}`);
    const svg = readFileSync(outPath, "utf8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.match(/<polyline /g)).toHaveLength(2);
  });

  it("renders a bar figure from summary.csv", () => {
    const dir = tempDir();
    const inPath = join(dir, "summary.csv");
    const outPath = join(dir, "bars.svg");
    writeFileSync(inPath, SUMMARY_HEADER + "iarmin,mr,1.5,0.5,100\n");
    const out = capture();
    const code = run(["--kind", "bars", "--metric", "avg", "--in", inPath, "--out", outPath], out.print, out.print);
    expect(code).toBe(0);
    expect(readFileSync(outPath, "utf8")).toContain('data-value="1.5"');
  });

  it("warns about an empty group and still renders the rest", () => {
    const dir = tempDir();
    const inPath = join(dir, "results.csv");
    const outPath = join(dir, "cdf.svg");
    const badRows = Array.from({ length: 3 }, (_, i) => `0,greedy,mr,${i},nan,bad_denominator`).join("\n");
    writeFileSync(inPath, RESULTS_HEADER + tenRows("iarmin", "mr") + "\n" + badRows + "\n");
    const log = capture();
    const err = capture();
    const code = run(["--kind", "cdf", "--in", inPath, "--out", outPath], log.print, err.print);
    expect(code).toBe(0);
    expect(err.lines.some((l) => l.includes("empty group scheme=greedy"))).toBe(true);
    expect(readFileSync(outPath, "utf8").match(/<polyline /g)).toHaveLength(1);
  });

  it("fails when no group is drawable", () => {
    const dir = tempDir();
    const inPath = join(dir, "results.csv");
    writeFileSync(inPath, RESULTS_HEADER + "0,iarmin,mr,0,1.0,ok\n");
    const err = capture();
    const code = run(["--kind", "cdf", "--in", inPath, "--out", join(dir, "x.svg")], capture().print, err.print);
    expect(code).toBe(1);
    expect(err.lines.some((l) => l.includes("no group has enough usable rows"))).toBe(true);
  });

  it("fails with a named diagnostic when a column is missing", () => {
    const dir = tempDir();
    const inPath = join(dir, "summary.csv");
    writeFileSync(inPath, "scheme,precoder,se90,count\niarmin,mr,0.5,100\n");
    const err = capture();
    const code = run(["--kind", "bars", "--in", inPath, "--out", join(dir, "x.svg")], capture().print, err.print);
    expect(code).toBe(1);
    expect(err.lines[0]).toContain('missing column "avg_se"');
  });

  it("rejects summary.csv as CDF input", () => {
    const dir = tempDir();
    const inPath = join(dir, "summary.csv");
    const outPath = join(dir, "x.svg");
    writeFileSync(inPath, SUMMARY_HEADER + "iarmin,mr,1.5,0.5,100\n");
    const err = capture();
    const code = run(["--kind", "cdf", "--in", inPath, "--out", outPath], capture().print, err.print);
    expect(code).toBe(1);
    expect(err.lines[0]).toContain("missing column");
    expect(err.lines[0]).toContain('"se_bits_per_hz"');
    expect(existsSync(outPath)).toBe(false);
  });

  it("fails cleanly on a missing input file", () => {
    const dir = tempDir();
    const missing = join(dir, "nope.csv");
    const err = capture();
    const code = run(["--kind", "cdf", "--in", missing, "--out", join(dir, "x.svg")], capture().print, err.print);
    expect(code).toBe(1);
    expect(err.lines[0]).toContain("nope.csv");
  });
});
