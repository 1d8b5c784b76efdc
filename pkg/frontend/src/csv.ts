/**
 * Reader for the summary CSV emitted by the qnfl sweep pipeline
 * (`qnfl aggregate`).  The file is machine-generated: comma-separated,
 * no quoting, one header line, `m` written as a decimal integer or the
 * token "inf", `ortho` written as "true"/"false".
 */

export interface SummaryRow {
  /** Number of qubits. */
  n: number;
  /** Hilbert-space dimension, d = 2^n. */
  d: number;
  /** Schmidt rank of the training states. */
  r: number;
  /** Measurement shots per expectation estimate; Infinity for exact means. */
  m: number;
  /** Number of training examples. */
  N: number;
  /** Whether the training family was sampled orthogonal. */
  ortho: boolean;
  /** Number of Monte-Carlo trials aggregated into this row. */
  trials: number;
  mean_risk: number;
  stderr_risk: number;
  mean_normalized_error: number;
  stderr_normalized_error: number;
}

export const SUMMARY_COLUMNS = [
  "n",
  "d",
  "r",
  "m",
  "N",
  "ortho",
  "trials",
  "mean_risk",
  "stderr_risk",
  "mean_normalized_error",
  "stderr_normalized_error",
] as const;

function parseIntStrict(token: string, column: string, lineNo: number): number {
  if (!/^-?\d+$/.test(token)) {
    throw new Error(`line ${lineNo}: column "${column}" is not an integer: "${token}"`);
  }
  return parseInt(token, 10);
}

function parseShots(token: string, lineNo: number): number {
  if (token === "inf") return Infinity;
  return parseIntStrict(token, "m", lineNo);
}

function parseFloatStrict(token: string, column: string, lineNo: number): number {
  const value = Number(token);
  if (token === "" || Number.isNaN(value)) {
    throw new Error(`line ${lineNo}: column "${column}" is not a number: "${token}"`);
  }
  return value;
}

function parseBool(token: string, column: string, lineNo: number): boolean {
  if (token === "true") return true;
  if (token === "false") return false;
  throw new Error(`line ${lineNo}: column "${column}" must be "true" or "false", got "${token}"`);
}

/**
 * Parse summary-CSV text into typed rows.
 *
 * Header columns may appear in any order and extra columns are ignored,
 * but every required column must be present; a missing column raises a
 * schema error that names it.
 */
export function parseSummaryCsv(text: string): SummaryRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new Error("summary CSV is empty");
  }
  const header = lines[0].split(",").map((cell) => cell.trim());
  const index = new Map<string, number>();
  header.forEach((name, i) => {
    if (!index.has(name)) index.set(name, i);
  });
  const missing = SUMMARY_COLUMNS.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new Error(`summary CSV is missing required column(s): ${missing.join(", ")}`);
  }

  const rows: SummaryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",").map((cell) => cell.trim());
    const lineNo = i + 1;
    if (cells.length < header.length) {
      throw new Error(`line ${lineNo}: expected ${header.length} fields, got ${cells.length}`);
    }
    const cell = (name: string): string => cells[index.get(name)!];
    rows.push({
      n: parseIntStrict(cell("n"), "n", lineNo),
      d: parseIntStrict(cell("d"), "d", lineNo),
      r: parseIntStrict(cell("r"), "r", lineNo),
      m: parseShots(cell("m"), lineNo),
      N: parseIntStrict(cell("N"), "N", lineNo),
      ortho: parseBool(cell("ortho"), "ortho", lineNo),
      trials: parseIntStrict(cell("trials"), "trials", lineNo),
      mean_risk: parseFloatStrict(cell("mean_risk"), "mean_risk", lineNo),
      stderr_risk: parseFloatStrict(cell("stderr_risk"), "stderr_risk", lineNo),
      mean_normalized_error: parseFloatStrict(
        cell("mean_normalized_error"),
        "mean_normalized_error",
        lineNo,
      ),
      stderr_normalized_error: parseFloatStrict(
        cell("stderr_normalized_error"),
        "stderr_normalized_error",
        lineNo,
      ),
    });
  }
  return rows;
}

/** Format a shot count the way the CSV does: integer digits or "inf". */
export function formatShots(m: number): string {
  return m === Infinity ? "inf" : String(m);
}
