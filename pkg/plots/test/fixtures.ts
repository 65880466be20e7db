import { HEADER } from "../src/csv.js";

export function validCsv(overrides: Record<string, [number, number]> = {}): string {
  const defaults: Record<string, [number, number]> = {
    "1/traditional": [120.0, 30.0],
    "1/gsc": [35.0, 30.0],
    "2/traditional": [150.0, 33.0],
    "2/gsc": [100.0, 40.0],
    "3/traditional": [160.0, 31.0],
    "3/gsc": [110.0, 38.0],
    "4/traditional": [170.0, 35.0],
    "4/gsc": [140.0, 48.0],
  };
  Object.assign(defaults, overrides);
  const lines = [HEADER];
  for (const caseType of [1, 2, 3, 4]) {
    for (const method of ["traditional", "gsc"]) {
      const [occ, delay] = defaults[`${caseType}/${method}`];
      lines.push(`${caseType},${method},${occ.toFixed(6)},${delay.toFixed(6)},12,0`);
    }
  }
  return lines.join("\n") + "\n";
}
