import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { readResultRows, readSummaryRows } from "../src/csv.js";

function tempCsv(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-csv-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("readResultRows", () => {
  it("parses typed rows", () => {
    const path = tempCsv(
      "results.csv",
      "setup,scheme,precoder,ue,se_bits_per_hz,status\n" +
        "0,iarmin,mr,3,0.35371980618786514,ok\n" +
        "1,random,lpmmse,0,nan,bad_denominator\n"
    );
    const rows = readResultRows(path);
    expect(rows).toHaveLength(2);
    expect(rows[0]).toEqual({
      setup: 0,
      scheme: "iarmin",
      precoder: "mr",
      ue: 3,
      se: 0.35371980618786514,
      status: "ok",
    });
    expect(rows[1].status).toBe("bad_denominator");
    expect(Number.isNaN(rows[1].se)).toBe(true);
  });

  it("names the missing column", () => {
    const path = tempCsv("results.csv", "setup,scheme,precoder,ue,status\n0,a,mr,0,ok\n");
    expect(() => readResultRows(path)).toThrow('missing column "se_bits_per_hz"');
  });
});

describe("readSummaryRows", () => {
  it("keeps the file text of every value", () => {
    const path = tempCsv(
      "summary.csv",
      "scheme,precoder,avg_se,se90,count\niarmin,mr,1.216343859778356,0.49306455543710437,1500\n"
    );
    const rows = readSummaryRows(path);
    expect(rows).toHaveLength(1);
    expect(rows[0].avgSe).toBe(1.216343859778356);
    expect(rows[0].se90).toBe(0.49306455543710437);
    expect(rows[0].count).toBe(1500);
    expect(rows[0].raw.avg_se).toBe("1.216343859778356");
    expect(rows[0].raw.se90).toBe("0.49306455543710437");
  });

  it("names the missing column", () => {
    const path = tempCsv("summary.csv", "scheme,precoder,se90,count\na,mr,0.5,10\n");
    expect(() => readSummaryRows(path)).toThrow('missing column "avg_se"');
  });
});
