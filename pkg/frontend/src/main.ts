#!/usr/bin/env node
/**
 * qnfl-plot: render figures from a qnfl summary CSV.
 *
 *   qnfl-plot --in summary.csv --kind surface_mr --N 8 --out fig_surface.svg
 *
 * Kinds: surface_mr, lines_vs_N, ortho_surface, mn_tradeoff.
 * Filters: --N <int>, --r <list>, --m <list> (lists are comma-separated,
 * "inf" allowed in --m).  --raw-risk plots the un-normalized risk column.
 */

import { parseArgs } from "node:util";
import { readFile, writeFile, realpath } from "node:fs/promises";
import { pathToFileURL } from "node:url";
import { parseSummaryCsv } from "./csv.js";
import { buildPlot, checkOutputPath, PlotKind, PlotSpec, PLOT_KINDS } from "./plot.js";

const USAGE = `usage: qnfl-plot --in <summary.csv> --kind <kind> [options]

kinds:
  surface_mr     mean error surface over (m, r); needs a single N (use --N)
  lines_vs_N     mean error vs N, one line per (r, m), 3-SE bands
  ortho_surface  like surface_mr but for orthogonal-family rows
  mn_tradeoff    mean error vs the product m*N, one line per r

options:
  --in <path>    summary CSV produced by "qnfl aggregate"   (required)
  --kind <kind>  one of the kinds above                     (required)
  --out <path>   output SVG path                            (default: <kind>.svg)
  --N <int>      keep rows with this training-set size
  --r <list>     keep rows with these Schmidt ranks, e.g. 1,2,4
  --m <list>     keep rows with these shot counts, e.g. 10,inf
  --raw-risk     plot mean_risk instead of the 2/d^2-normalized error
  --title <str>  override the figure title
  --help         show this message
`;

function parsePositiveInt(token: string, flag: string): number {
  if (!/^\d+$/.test(token)) {
    throw new Error(`${flag} expects a positive integer, got "${token}"`);
  }
  const value = parseInt(token, 10);
  if (value < 1) {
    throw new Error(`${flag} expects a positive integer, got "${token}"`);
  }
  return value;
}

function parseShotList(token: string): number[] {
  return token.split(",").map((part) => {
    const item = part.trim();
    if (item === "inf") return Infinity;
    return parsePositiveInt(item, "--m");
  });
}

function parseIntList(token: string, flag: string): number[] {
  return token.split(",").map((part) => parsePositiveInt(part.trim(), flag));
}

export function specFromArgs(argv: string[]): { spec: PlotSpec; inPath: string; outPath: string } | null {
  const { values } = parseArgs({
    args: argv,
    options: {
      in: { type: "string" },
      kind: { type: "string" },
      out: { type: "string" },
      N: { type: "string" },
      r: { type: "string" },
      m: { type: "string" },
      "raw-risk": { type: "boolean", default: false },
      title: { type: "string" },
      help: { type: "boolean", default: false },
    },
    strict: true,
  });

  if (values.help) return null;
  if (values.in === undefined) throw new Error("--in is required");
  if (values.kind === undefined) throw new Error("--kind is required");
  if (!(PLOT_KINDS as readonly string[]).includes(values.kind)) {
    throw new Error(`unknown kind "${values.kind}"; expected one of ${PLOT_KINDS.join(", ")}`);
  }
  const kind = values.kind as PlotKind;
  const spec: PlotSpec = { kind, rawRisk: values["raw-risk"] };
  if (values.N !== undefined) spec.N = parsePositiveInt(values.N, "--N");
  if (values.r !== undefined) spec.r = parseIntList(values.r, "--r");
  if (values.m !== undefined) spec.m = parseShotList(values.m);
  if (values.title !== undefined) spec.title = values.title;
  const outPath = values.out ?? `${kind}.svg`;
  return { spec, inPath: values.in, outPath };
}

export async function cliMain(argv: string[]): Promise<number> {
  let parsed: { spec: PlotSpec; inPath: string; outPath: string } | null;
  try {
    parsed = specFromArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (parsed === null) {
    console.log(USAGE);
    return 0;
  }
  try {
    checkOutputPath(parsed.outPath);
    const text = await readFile(parsed.inPath, "utf8");
    const rows = parseSummaryCsv(text);
    const svg = buildPlot(rows, parsed.spec);
    await writeFile(parsed.outPath, svg, "utf8");
    console.log(`SVG → ${parsed.outPath} (${rows.length} summary rows read)`);
    return 0;
  } catch (err) {
    if (err instanceof Error && "code" in err && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: cannot read input file "${parsed.inPath}"`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 2;
  }
}

async function invokedAsScript(): Promise<boolean> {
  if (!process.argv[1]) return false;
  try {
    return import.meta.url === pathToFileURL(await realpath(process.argv[1])).href;
  } catch {
    return false;
  }
}

if (await invokedAsScript()) {
  process.exit(await cliMain(process.argv.slice(2)));
}
