// Shared command-line driver for the two chart tools.

import { readFileSync, writeFileSync } from "node:fs";

import { MetricsRow, parseMetricsCsv, SchemaError } from "./csv.js";

export function runChartTool(
  name: string,
  argv: string[],
  render: (rows: MetricsRow[]) => string,
): number {
  if (argv.length !== 2) {
    process.stderr.write(`usage: ${name} <metrics.csv> <out.svg>\n`);
    return 1;
  }
  const [csvPath, outPath] = argv;
  let text: string;
  try {
    text = readFileSync(csvPath, "utf-8");
  } catch (err) {
    process.stderr.write(`${name}: cannot read ${csvPath}: ${String(err)}\n`);
    return 1;
  }
  let rows: MetricsRow[];
  try {
    rows = parseMetricsCsv(text);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`${name}: invalid metrics file: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
  writeFileSync(outPath, render(rows), "utf-8");
  process.stdout.write(`${name}: wrote ${outPath}\n`);
  return 0;
}
