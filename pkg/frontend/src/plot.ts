/**
 * SVG figure builders for qnfl summary data.
 *
 * Every builder is a pure function from parsed summary rows and a PlotSpec
 * to an SVG string; file I/O lives in the CLI wrapper.  Each figure embeds
 * the exact numbers it draws in a `<metadata id="plot-data">` element so
 * the rendered values can be inspected without re-deriving them from pixel
 * coordinates.
 */

import { SummaryRow, formatShots } from "./csv.js";

export type PlotKind = "surface_mr" | "lines_vs_N" | "ortho_surface" | "mn_tradeoff";

export const PLOT_KINDS: readonly PlotKind[] = [
  "surface_mr",
  "lines_vs_N",
  "ortho_surface",
  "mn_tradeoff",
];

export interface PlotSpec {
  kind: PlotKind;
  /** Keep only rows with this number of training examples. */
  N?: number;
  /** Keep only rows whose Schmidt rank is in this list. */
  r?: number[];
  /** Keep only rows whose shot count is in this list (Infinity allowed). */
  m?: number[];
  /** Plot the raw risk column instead of the 2/d^2-normalized error. */
  rawRisk?: boolean;
  /** Optional figure title; a kind-specific default is used otherwise. */
  title?: string;
}

export interface SurfacePoint {
  r: number;
  value: number;
  stderr: number;
}

export interface SurfaceSeries {
  m: number | "inf";
  points: SurfacePoint[];
}

export interface LinePoint {
  N: number;
  value: number;
  stderr: number;
}

export interface LineSeries {
  r: number;
  m: number | "inf";
  points: LinePoint[];
}

export interface TradeoffPoint {
  m: number | "inf";
  N: number;
  product: number | "inf";
  value: number;
  stderr: number;
}

export interface TradeoffSeries {
  r: number;
  points: TradeoffPoint[];
}

export interface EmbeddedData {
  kind: PlotKind;
  valueField: "mean_normalized_error" | "mean_risk";
  filters: { N?: number; r?: number[]; m?: (number | "inf")[] };
  series: (SurfaceSeries | LineSeries | TradeoffSeries)[];
}

const PALETTE = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#e45756",
  "#72b7b2",
  "#9d755d",
  "#b279a2",
  "#eeca3b",
];

/** Escape text for inclusion in SVG markup. */
export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function unesc(s: string): string {
  return s.replace(/&lt;/g, "<").replace(/&gt;/g, ">").replace(/&amp;/g, "&");
}

/** Format an SVG coordinate: two decimals, no trailing noise, no "-0". */
function fmt(x: number): string {
  const v = Math.round(x * 100) / 100;
  return (Object.is(v, -0) ? 0 : v).toString();
}

/** Round tick positions covering [lo, hi] with a 1/2/5 step. */
export function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const k of [1, 2, 5, 10]) {
    if (mag * k >= raw) {
      step = mag * k;
      break;
    }
  }
  const ticks: number[] = [];
  const kFirst = Math.ceil(lo / step - 1e-9);
  const kLast = Math.floor(hi / step + 1e-9);
  const decimals = Math.min(12, Math.max(0, 1 - Math.floor(Math.log10(step))));
  for (let k = kFirst; k <= kLast; k++) {
    ticks.push(parseFloat((k * step).toFixed(decimals)));
  }
  return ticks;
}

function lerpColor(c0: string, c1: string, t: number): string {
  const hex = (c: string) => [1, 3, 5].map((i) => parseInt(c.slice(i, i + 2), 16));
  const [r0, g0, b0] = hex(c0);
  const [r1, g1, b1] = hex(c1);
  const mix = (a: number, b: number) => Math.round(a + (b - a) * Math.min(1, Math.max(0, t)));
  const out = [mix(r0, r1), mix(g0, g1), mix(b0, b1)]
    .map((v) => v.toString(16).padStart(2, "0"))
    .join("");
  return `#${out}`;
}

function jsonShots(m: number): number | "inf" {
  return m === Infinity ? "inf" : m;
}

/** Comparator that is safe for Infinity (subtraction would give NaN). */
function cmpNum(x: number, y: number): number {
  return x === y ? 0 : x < y ? -1 : 1;
}

function valueOf(row: SummaryRow, rawRisk: boolean): { value: number; stderr: number } {
  return rawRisk
    ? { value: row.mean_risk, stderr: row.stderr_risk }
    : { value: row.mean_normalized_error, stderr: row.stderr_normalized_error };
}

function valueLabel(rawRisk: boolean): string {
  return rawRisk ? "mean risk" : "normalized error (×2/d²)";
}

function describeFilters(spec: PlotSpec): string {
  const parts: string[] = [];
  if (spec.N !== undefined) parts.push(`N=${spec.N}`);
  if (spec.r !== undefined) parts.push(`r in {${spec.r.join(", ")}}`);
  if (spec.m !== undefined) parts.push(`m in {${spec.m.map(formatShots).join(", ")}}`);
  return parts.length > 0 ? parts.join(", ") : "none";
}

/**
 * Apply the spec's filters (and the kind's orthogonality requirement) to the
 * rows.  Raises if nothing survives, naming the kind and active filters.
 */
export function selectRows(rows: SummaryRow[], spec: PlotSpec): SummaryRow[] {
  const wantOrtho = spec.kind === "ortho_surface";
  let kept = rows.filter((row) => row.ortho === wantOrtho);
  if (spec.N !== undefined) kept = kept.filter((row) => row.N === spec.N);
  if (spec.r !== undefined) kept = kept.filter((row) => spec.r!.includes(row.r));
  if (spec.m !== undefined) kept = kept.filter((row) => spec.m!.includes(row.m));
  if (kept.length === 0) {
    throw new Error(
      `selection matched no rows for kind=${spec.kind} ` +
        `(ortho=${wantOrtho}, filters: ${describeFilters(spec)})`,
    );
  }
  return [...kept].sort((a, b) => a.r - b.r || cmpNum(a.m, b.m) || a.N - b.N);
}

function embedData(data: EmbeddedData): string {
  return `<metadata id="plot-data">${esc(JSON.stringify(data))}</metadata>`;
}

/** Recover the data block a builder embedded in an SVG string. */
export function extractEmbeddedData(svg: string): EmbeddedData {
  const match = svg.match(/<metadata id="plot-data">([\s\S]*?)<\/metadata>/);
  if (!match) {
    throw new Error("SVG has no plot-data metadata block");
  }
  return JSON.parse(unesc(match[1])) as EmbeddedData;
}

function svgHeader(width: number, height: number, title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif" font-size="13">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    `<text x="${width / 2}" y="28" text-anchor="middle" font-size="17" fill="#1a1a1a">` +
    `${esc(title)}</text>\n`
  );
}

function embeddedFilters(spec: PlotSpec): EmbeddedData["filters"] {
  const filters: EmbeddedData["filters"] = {};
  if (spec.N !== undefined) filters.N = spec.N;
  if (spec.r !== undefined) filters.r = [...spec.r];
  if (spec.m !== undefined) filters.m = spec.m.map(jsonShots);
  return filters;
}

// ---------------------------------------------------------------------------
// Surface over (m, r)
// ---------------------------------------------------------------------------

interface SurfaceGrid {
  rValues: number[];
  mValues: number[];
  /** value[mIndex][rIndex] */
  value: number[][];
  stderr: number[][];
}

function surfaceGrid(rows: SummaryRow[], spec: PlotSpec): SurfaceGrid {
  const nValues = [...new Set(rows.map((row) => row.N))];
  if (nValues.length > 1) {
    throw new Error(
      `surface needs a single N; found N in {${nValues.sort((a, b) => a - b).join(", ")}} ` +
        `— pass an N filter`,
    );
  }
  const rValues = [...new Set(rows.map((row) => row.r))].sort((a, b) => a - b);
  const mValues = [...new Set(rows.map((row) => row.m))].sort(cmpNum);
  const byKey = new Map<string, SummaryRow>();
  for (const row of rows) byKey.set(`${row.r}|${row.m}`, row);
  const value: number[][] = [];
  const stderr: number[][] = [];
  for (const m of mValues) {
    const vRow: number[] = [];
    const sRow: number[] = [];
    for (const r of rValues) {
      const row = byKey.get(`${r}|${m}`);
      if (row === undefined) {
        throw new Error(`surface grid is incomplete: no row for r=${r}, m=${formatShots(m)}`);
      }
      const { value: v, stderr: s } = valueOf(row, spec.rawRisk ?? false);
      vRow.push(v);
      sRow.push(s);
    }
    value.push(vRow);
    stderr.push(sRow);
  }
  return { rValues, mValues, value, stderr };
}

/** Positions of shot counts on a log10 axis; Infinity sits one decade past the last finite value. */
function shotAxisPositions(mValues: number[]): number[] {
  const finite = mValues.filter((m) => m !== Infinity);
  const logs = finite.map((m) => Math.log10(Math.max(1, m)));
  const maxLog = logs.length > 0 ? Math.max(...logs) : 0;
  return mValues.map((m) => (m === Infinity ? maxLog + 1 : Math.log10(Math.max(1, m))));
}

function normalize(values: number[]): number[] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  if (hi <= lo) return values.map(() => 0.5);
  return values.map((v) => (v - lo) / (hi - lo));
}

function buildSurface(rows: SummaryRow[], spec: PlotSpec): string {
  const grid = surfaceGrid(rows, spec);
  const width = 760;
  const height = 560;
  const cx = width / 2;
  const cy = 210;
  const sx = 270;
  const sy = 120;
  const sz = 165;

  const a = normalize(grid.rValues.map((_, i) => i)); // r axis, index spacing
  const b = normalize(shotAxisPositions(grid.mValues)); // m axis, log spacing
  const zMax = Math.max(...grid.value.flat());
  const zOf = (v: number) => (zMax > 0 ? v / zMax : 0);
  const project = (ai: number, bj: number, z: number): [number, number] => [
    cx + (ai - bj) * sx,
    cy + (ai + bj) * sy - z * sz,
  ];

  const parts: string[] = [];
  const title =
    spec.title ??
    (spec.kind === "ortho_surface"
      ? `Mean error over (m, r), orthogonal training states, N=${rows[0].N}`
      : `Mean error over (m, r), N=${rows[0].N}`);
  parts.push(svgHeader(width, height, title));

  const R = grid.rValues.length;
  const M = grid.mValues.length;

  if (R >= 2 && M >= 2) {
    // Painter's algorithm: draw quads far to near.
    const quads: { depth: number; svg: string }[] = [];
    for (let j = 0; j < M - 1; j++) {
      for (let i = 0; i < R - 1; i++) {
        const corners: [number, number][] = [
          project(a[i], b[j], zOf(grid.value[j][i])),
          project(a[i + 1], b[j], zOf(grid.value[j][i + 1])),
          project(a[i + 1], b[j + 1], zOf(grid.value[j + 1][i + 1])),
          project(a[i], b[j + 1], zOf(grid.value[j + 1][i])),
        ];
        const mean =
          (grid.value[j][i] +
            grid.value[j][i + 1] +
            grid.value[j + 1][i + 1] +
            grid.value[j + 1][i]) /
          4;
        const fill = lerpColor("#26456e", "#f2c53d", zMax > 0 ? mean / zMax : 0);
        const pts = corners.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        quads.push({
          depth: a[i] + a[i + 1] + b[j] + b[j + 1],
          svg: `<polygon points="${pts}" fill="${fill}" fill-opacity="0.85" stroke="#22304a" stroke-width="0.7"/>`,
        });
      }
    }
    quads.sort((q0, q1) => q0.depth - q1.depth);
    parts.push(quads.map((q) => q.svg).join("\n") + "\n");
  } else {
    // Degenerate grid (a single r or a single m): draw the ridge lines.
    for (let j = 0; j < M; j++) {
      const pts = grid.rValues
        .map((_, i) => project(a[i], b[j], zOf(grid.value[j][i])))
        .map(([x, y]) => `${fmt(x)},${fmt(y)}`)
        .join(" ");
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="#26456e" stroke-width="1.6"/>\n`,
      );
    }
    for (let i = 0; i < R; i++) {
      const pts = grid.mValues
        .map((_, j) => project(a[i], b[j], zOf(grid.value[j][i])))
        .map(([x, y]) => `${fmt(x)},${fmt(y)}`)
        .join(" ");
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="#26456e" stroke-width="1.6"/>\n`,
      );
    }
  }

  // r axis: ticks along the near edge where the m index is largest.
  for (let i = 0; i < R; i++) {
    const [x, y] = project(a[i], 1, 0);
    parts.push(
      `<text x="${fmt(x - 8)}" y="${fmt(y + 18)}" text-anchor="end" fill="#333">` +
        `${grid.rValues[i]}</text>\n`,
    );
  }
  {
    const [x, y] = project(0.5, 1, 0);
    parts.push(
      `<text x="${fmt(x - 40)}" y="${fmt(y + 44)}" text-anchor="middle" fill="#111">` +
        `r (Schmidt rank)</text>\n`,
    );
  }

  // m axis: ticks along the near edge where the r index is largest.
  for (let j = 0; j < M; j++) {
    const [x, y] = project(1, b[j], 0);
    const label = grid.mValues[j] === Infinity ? "∞" : formatShots(grid.mValues[j]);
    parts.push(
      `<text x="${fmt(x + 10)}" y="${fmt(y + 16)}" text-anchor="start" fill="#333">` +
        `${esc(label)}</text>\n`,
    );
  }
  {
    const [x, y] = project(1, 0.5, 0);
    parts.push(
      `<text x="${fmt(x + 52)}" y="${fmt(y + 40)}" text-anchor="middle" fill="#111">` +
        `m (shots, log scale)</text>\n`,
    );
  }

  // Value axis at the leftmost base corner.
  {
    const [x0, y0] = project(0, 1, 0);
    const [, yTop] = project(0, 1, 1);
    parts.push(
      `<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x0)}" y2="${fmt(yTop)}" ` +
        `stroke="#444" stroke-width="1"/>\n`,
    );
    for (const t of niceTicks(0, zMax, 4)) {
      const y = y0 - (zMax > 0 ? t / zMax : 0) * sz;
      parts.push(
        `<line x1="${fmt(x0 - 5)}" y1="${fmt(y)}" x2="${fmt(x0)}" y2="${fmt(y)}" stroke="#444"/>\n` +
          `<text x="${fmt(x0 - 9)}" y="${fmt(y + 4)}" text-anchor="end" fill="#333">` +
          `${t.toPrecision(3).replace(/\.?0+$/, "")}</text>\n`,
      );
    }
    parts.push(
      `<text x="${fmt(x0 - 58)}" y="${fmt((y0 + yTop) / 2)}" text-anchor="middle" fill="#111" ` +
        `transform="rotate(-90 ${fmt(x0 - 58)} ${fmt((y0 + yTop) / 2)})">` +
        `${esc(valueLabel(spec.rawRisk ?? false))}</text>\n`,
    );
  }

  const series: SurfaceSeries[] = grid.mValues.map((m, j) => ({
    m: jsonShots(m),
    points: grid.rValues.map((r, i) => ({
      r,
      value: grid.value[j][i],
      stderr: grid.stderr[j][i],
    })),
  }));
  parts.push(
    embedData({
      kind: spec.kind,
      valueField: spec.rawRisk ? "mean_risk" : "mean_normalized_error",
      filters: embeddedFilters(spec),
      series,
    }) + "\n",
  );
  parts.push("</svg>\n");
  return parts.join("");
}

// ---------------------------------------------------------------------------
// Shared 2-D chart frame for the line-style kinds
// ---------------------------------------------------------------------------

interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  xPos: (x: number) => number;
  yPos: (v: number) => number;
  vMax: number;
}

function makeFrame(xCount: number, vMax: number): Frame {
  const width = 760;
  const height = 520;
  const left = 86;
  const right = width - 180; // room for the legend
  const top = 60;
  const bottom = height - 70;
  const xPos = (x: number) =>
    xCount > 1 ? left + (x / (xCount - 1)) * (right - left) : (left + right) / 2;
  const safeMax = vMax > 0 ? vMax : 1;
  const yPos = (v: number) => bottom - (v / safeMax) * (bottom - top);
  return { width, height, left, right, top, bottom, xPos, yPos, vMax: safeMax };
}

function frameAxes(frame: Frame, xLabels: string[], xTitle: string, yTitle: string): string {
  const parts: string[] = [];
  parts.push(
    `<line x1="${frame.left}" y1="${frame.bottom}" x2="${frame.right}" y2="${frame.bottom}" stroke="#444"/>\n` +
      `<line x1="${frame.left}" y1="${frame.top}" x2="${frame.left}" y2="${frame.bottom}" stroke="#444"/>\n`,
  );
  xLabels.forEach((label, i) => {
    const x = frame.xPos(i);
    parts.push(
      `<line x1="${fmt(x)}" y1="${frame.bottom}" x2="${fmt(x)}" y2="${frame.bottom + 5}" stroke="#444"/>\n` +
        `<text x="${fmt(x)}" y="${frame.bottom + 22}" text-anchor="middle" fill="#333">` +
        `${esc(label)}</text>\n`,
    );
  });
  for (const t of niceTicks(0, frame.vMax, 5)) {
    const y = frame.yPos(t);
    parts.push(
      `<line x1="${frame.left - 5}" y1="${fmt(y)}" x2="${frame.left}" y2="${fmt(y)}" stroke="#444"/>\n` +
        `<line x1="${frame.left}" y1="${fmt(y)}" x2="${frame.right}" y2="${fmt(y)}" stroke="#eee"/>\n` +
        `<text x="${frame.left - 9}" y="${fmt(y + 4)}" text-anchor="end" fill="#333">` +
        `${t.toPrecision(3).replace(/\.?0+$/, "")}</text>\n`,
    );
  }
  parts.push(
    `<text x="${(frame.left + frame.right) / 2}" y="${frame.bottom + 48}" text-anchor="middle" fill="#111">` +
      `${esc(xTitle)}</text>\n`,
  );
  const yMid = (frame.top + frame.bottom) / 2;
  parts.push(
    `<text x="30" y="${yMid}" text-anchor="middle" fill="#111" ` +
      `transform="rotate(-90 30 ${yMid})">${esc(yTitle)}</text>\n`,
  );
  return parts.join("");
}

interface ChartSeries {
  label: string;
  color: string;
  /** x slot index, value, stderr */
  points: [number, number, number][];
}

function drawSeries(frame: Frame, series: ChartSeries[]): string {
  const parts: string[] = [];
  // 3-standard-error bands first, so lines stay visible on top.
  for (const s of series) {
    if (s.points.length < 2) continue;
    const upper = s.points.map(([i, v, se]) => `${fmt(frame.xPos(i))},${fmt(frame.yPos(v + 3 * se))}`);
    const lower = s.points
      .slice()
      .reverse()
      .map(([i, v, se]) => `${fmt(frame.xPos(i))},${fmt(frame.yPos(Math.max(0, v - 3 * se)))}`);
    parts.push(
      `<polygon points="${upper.concat(lower).join(" ")}" fill="${s.color}" fill-opacity="0.15"/>\n`,
    );
  }
  for (const s of series) {
    if (s.points.length >= 2) {
      const pts = s.points
        .map(([i, v]) => `${fmt(frame.xPos(i))},${fmt(frame.yPos(v))}`)
        .join(" ");
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"/>\n`,
      );
    }
    for (const [i, v, se] of s.points) {
      const x = frame.xPos(i);
      if (s.points.length === 1 && se > 0) {
        // A lone point still gets its 3-SE range as a vertical bar.
        parts.push(
          `<line x1="${fmt(x)}" y1="${fmt(frame.yPos(v + 3 * se))}" x2="${fmt(x)}" ` +
            `y2="${fmt(frame.yPos(Math.max(0, v - 3 * se)))}" stroke="${s.color}" stroke-width="1.2"/>\n`,
        );
      }
      parts.push(
        `<circle cx="${fmt(x)}" cy="${fmt(frame.yPos(v))}" r="3.2" fill="${s.color}"/>\n`,
      );
    }
  }
  return parts.join("");
}

function drawLegend(frame: Frame, series: ChartSeries[]): string {
  const parts: string[] = [];
  const x = frame.right + 16;
  series.forEach((s, i) => {
    const y = frame.top + 10 + i * 22;
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${s.color}" stroke-width="2.5"/>\n` +
        `<text x="${x + 28}" y="${y + 4}" fill="#333">${esc(s.label)}</text>\n`,
    );
  });
  return parts.join("");
}

// ---------------------------------------------------------------------------
// Mean error against the number of training examples
// ---------------------------------------------------------------------------

function buildLinesVsN(rows: SummaryRow[], spec: PlotSpec): string {
  const nValues = [...new Set(rows.map((row) => row.N))].sort((a, b) => a - b);
  const keyOf = (row: SummaryRow) => `${row.r}|${row.m}`;
  const keys = [...new Set(rows.map(keyOf))];
  const embedded: LineSeries[] = [];
  const chart: ChartSeries[] = [];
  keys.forEach((key, idx) => {
    const members = rows.filter((row) => keyOf(row) === key);
    const sorted = [...members].sort((p, q) => p.N - q.N);
    const points: LinePoint[] = sorted.map((row) => {
      const { value, stderr } = valueOf(row, spec.rawRisk ?? false);
      return { N: row.N, value, stderr };
    });
    embedded.push({ r: sorted[0].r, m: jsonShots(sorted[0].m), points });
    chart.push({
      label: `r=${sorted[0].r}, m=${formatShots(sorted[0].m)}`,
      color: PALETTE[idx % PALETTE.length],
      points: points.map((p) => [nValues.indexOf(p.N), p.value, p.stderr]),
    });
  });

  const vMax = Math.max(...chart.flatMap((s) => s.points.map(([, v, se]) => v + 3 * se)));
  const frame = makeFrame(nValues.length, vMax);
  const parts: string[] = [];
  parts.push(svgHeader(frame.width, frame.height, spec.title ?? "Mean error vs training-set size"));
  parts.push(frameAxes(frame, nValues.map(String), "N (training examples)", valueLabel(spec.rawRisk ?? false)));
  parts.push(drawSeries(frame, chart));
  parts.push(drawLegend(frame, chart));
  parts.push(
    embedData({
      kind: spec.kind,
      valueField: spec.rawRisk ? "mean_risk" : "mean_normalized_error",
      filters: embeddedFilters(spec),
      series: embedded,
    }) + "\n",
  );
  parts.push("</svg>\n");
  return parts.join("");
}

// ---------------------------------------------------------------------------
// Mean error against the product m·N
// ---------------------------------------------------------------------------

function buildMnTradeoff(rows: SummaryRow[], spec: PlotSpec): string {
  const catKey = (row: SummaryRow) => `${row.m}|${row.N}`;
  const categories = [...new Map(rows.map((row) => [catKey(row), row])).values()]
    .map((row) => ({ m: row.m, N: row.N, product: row.m * row.N }))
    .sort((p, q) => cmpNum(p.product, q.product) || cmpNum(p.m, q.m) || p.N - q.N);
  const catIndex = new Map(categories.map((c, i) => [`${c.m}|${c.N}`, i]));
  const labels = categories.map((c) => `${formatShots(c.m) === "inf" ? "∞" : formatShots(c.m)}×${c.N}`);

  const rValues = [...new Set(rows.map((row) => row.r))].sort((a, b) => a - b);
  const embedded: TradeoffSeries[] = [];
  const chart: ChartSeries[] = [];
  rValues.forEach((r, idx) => {
    const members = rows
      .filter((row) => row.r === r)
      .sort((p, q) => catIndex.get(catKey(p))! - catIndex.get(catKey(q))!);
    const points: TradeoffPoint[] = members.map((row) => {
      const { value, stderr } = valueOf(row, spec.rawRisk ?? false);
      return {
        m: jsonShots(row.m),
        N: row.N,
        product: row.m === Infinity ? "inf" : row.m * row.N,
        value,
        stderr,
      };
    });
    embedded.push({ r, points });
    chart.push({
      label: `r=${r}`,
      color: PALETTE[idx % PALETTE.length],
      points: members.map((row) => {
        const { value, stderr } = valueOf(row, spec.rawRisk ?? false);
        return [catIndex.get(catKey(row))!, value, stderr];
      }),
    });
  });

  const vMax = Math.max(...chart.flatMap((s) => s.points.map(([, v, se]) => v + 3 * se)));
  const frame = makeFrame(categories.length, vMax);
  const parts: string[] = [];
  parts.push(
    svgHeader(frame.width, frame.height, spec.title ?? "Mean error vs measurement budget m·N"),
  );
  parts.push(frameAxes(frame, labels, "m×N (shots × examples)", valueLabel(spec.rawRisk ?? false)));
  parts.push(drawSeries(frame, chart));
  parts.push(drawLegend(frame, chart));
  parts.push(
    embedData({
      kind: spec.kind,
      valueField: spec.rawRisk ? "mean_risk" : "mean_normalized_error",
      filters: embeddedFilters(spec),
      series: embedded,
    }) + "\n",
  );
  parts.push("</svg>\n");
  return parts.join("");
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/** Build the SVG for a spec from already-parsed rows. Pure; rows are not mutated. */
export function buildPlot(rows: SummaryRow[], spec: PlotSpec): string {
  const selected = selectRows(rows, spec);
  switch (spec.kind) {
    case "surface_mr":
    case "ortho_surface":
      return buildSurface(selected, spec);
    case "lines_vs_N":
      return buildLinesVsN(selected, spec);
    case "mn_tradeoff":
      return buildMnTradeoff(selected, spec);
  }
}

/** Reject output paths the SVG backend cannot honour. */
export function checkOutputPath(outPath: string): void {
  if (/\.png$/i.test(outPath)) {
    const suggestion = outPath.replace(/\.png$/i, ".svg");
    throw new Error(
      `PNG output is not supported; this tool writes vector SVG — use "${suggestion}"`,
    );
  }
  if (!/\.svg$/i.test(outPath)) {
    throw new Error(`unsupported output extension in "${outPath}"; expected .svg`);
  }
}
