// Parsing and validation for the simulator's metrics CSV.
//
// Schema: case_type,method,mean_occupied_mbps,mean_delay_ms,routed,blocked
// with exactly the 8 (case 1..4) x (traditional, gsc) combinations.

export const HEADER =
  "case_type,method,mean_occupied_mbps,mean_delay_ms,routed,blocked";

export const CASE_TYPES = [1, 2, 3, 4] as const;
export const METHODS = ["traditional", "gsc"] as const;

export type Method = (typeof METHODS)[number];

export interface MetricsRow {
  caseType: number;
  method: Method;
  meanOccupiedMbps: number;
  meanDelayMs: number;
  routed: number;
  blocked: number;
}

export class SchemaError extends Error {}

export function parseMetricsCsv(text: string): MetricsRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty metrics file");
  }
  if (lines[0].trim() !== HEADER) {
    throw new SchemaError(`unexpected header: ${lines[0]}`);
  }
  const rows: MetricsRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 6) {
      throw new SchemaError(`row ${i + 1}: expected 6 columns, got ${parts.length}`);
    }
    const caseType = Number(parts[0]);
    const method = parts[1] as Method;
    const numbers = parts.slice(2).map(Number);
    if (!CASE_TYPES.includes(caseType as 1 | 2 | 3 | 4)) {
      throw new SchemaError(`row ${i + 1}: unknown case type ${parts[0]}`);
    }
    if (!METHODS.includes(method)) {
      throw new SchemaError(`row ${i + 1}: unknown method ${parts[1]}`);
    }
    if (numbers.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`row ${i + 1}: non-numeric value in ${lines[i]}`);
    }
    rows.push({
      caseType,
      method,
      meanOccupiedMbps: numbers[0],
      meanDelayMs: numbers[1],
      routed: numbers[2],
      blocked: numbers[3],
    });
  }
  validateCombinations(rows);
  return rows;
}

function validateCombinations(rows: MetricsRow[]): void {
  const seen = new Set<string>();
  for (const row of rows) {
    const key = `${row.caseType}/${row.method}`;
    if (seen.has(key)) {
      throw new SchemaError(`duplicate combination ${key}`);
    }
    seen.add(key);
  }
  for (const caseType of CASE_TYPES) {
    for (const method of METHODS) {
      if (!seen.has(`${caseType}/${method}`)) {
        throw new SchemaError(`missing combination case ${caseType} / ${method}`);
      }
    }
  }
  if (rows.length !== 8) {
    throw new SchemaError(`expected exactly 8 rows, got ${rows.length}`);
  }
}

export function valueFor(
  rows: MetricsRow[],
  caseType: number,
  method: Method,
  field: "meanOccupiedMbps" | "meanDelayMs",
): number {
  const row = rows.find((r) => r.caseType === caseType && r.method === method);
  if (row === undefined) {
    throw new SchemaError(`missing combination case ${caseType} / ${method}`);
  }
  return row[field];
}
