import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { cliMain, specFromArgs } from "../src/main.js";
import { extractEmbeddedData, SurfaceSeries } from "../src/plot.js";

const fixturePath = (name: string): string =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

let workDir: string;
let logSpy: ReturnType<typeof vi.spyOn>;
let errSpy: ReturnType<typeof vi.spyOn>;

beforeEach(() => {
  workDir = mkdtempSync(join(tmpdir(), "qnfl-plot-"));
  logSpy = vi.spyOn(console, "log").mockImplementation(() => {});
  errSpy = vi.spyOn(console, "error").mockImplementation(() => {});
});

afterEach(() => {
  rmSync(workDir, { recursive: true, force: true });
  logSpy.mockRestore();
  errSpy.mockRestore();
});

const stderrText = () => errSpy.mock.calls.map((call) => call.join(" ")).join("\n");

describe("specFromArgs", () => {
  it("parses filters and the normalization toggle", () => {
    const parsed = specFromArgs([
      "--in", "s.csv",
      "--kind", "lines_vs_N",
      "--r", "1,2",
      "--m", "10,inf",
      "--N", "8",
      "--raw-risk",
      "--out", "x.svg",
    ])!;
    expect(parsed.inPath).toBe("s.csv");
    expect(parsed.outPath).toBe("x.svg");
    expect(parsed.spec).toEqual({
      kind: "lines_vs_N",
      rawRisk: true,
      r: [1, 2],
      m: [10, Infinity],
      N: 8,
    });
  });

  it("defaults the output path to the kind", () => {
    const parsed = specFromArgs(["--in", "s.csv", "--kind", "surface_mr"])!;
    expect(parsed.outPath).toBe("surface_mr.svg");
    expect(parsed.spec.rawRisk).toBe(false);
  });

  it("rejects bad flags", () => {
    expect(() => specFromArgs(["--kind", "surface_mr"])).toThrow(/--in is required/);
    expect(() => specFromArgs(["--in", "s.csv"])).toThrow(/--kind is required/);
    expect(() => specFromArgs(["--in", "s.csv", "--kind", "pie"])).toThrow(
      /unknown kind "pie".*surface_mr, lines_vs_N, ortho_surface, mn_tradeoff/,
    );
    expect(() => specFromArgs(["--in", "s.csv", "--kind", "surface_mr", "--N", "two"])).toThrow(
      /--N expects a positive integer/,
    );
    expect(() => specFromArgs(["--in", "s.csv", "--kind", "surface_mr", "--m", "0"])).toThrow(
      /--m expects a positive integer/,
    );
    expect(() => specFromArgs(["--bogus"])).toThrow();
  });
});

describe("cliMain", () => {
  it("writes the requested figure and reports it", async () => {
    const out = join(workDir, "fig_surface.svg");
    const code = await cliMain([
      "--in", fixturePath("transition_summary.csv"),
      "--kind", "surface_mr",
      "--N", "8",
      "--out", out,
    ]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf8");
    const series = extractEmbeddedData(svg).series as SurfaceSeries[];
    expect(series.map((s) => s.m)).toEqual([10, 20000]);
    expect(logSpy.mock.calls.join("\n")).toContain("32 summary rows read");
  });

  it("writes byte-identical figures on repeated runs", async () => {
    const argv = (out: string) => [
      "--in", fixturePath("nsweep_summary.csv"),
      "--kind", "lines_vs_N",
      "--out", out,
    ];
    expect(await cliMain(argv(join(workDir, "a.svg")))).toBe(0);
    expect(await cliMain(argv(join(workDir, "b.svg")))).toBe(0);
    const a = readFileSync(join(workDir, "a.svg"));
    const b = readFileSync(join(workDir, "b.svg"));
    expect(a.equals(b)).toBe(true);
  });

  it("fails with exit 2 on a raster output path, suggesting the fix", async () => {
    const code = await cliMain([
      "--in", fixturePath("transition_summary.csv"),
      "--kind", "surface_mr",
      "--N", "8",
      "--out", join(workDir, "fig.png"),
    ]);
    expect(code).toBe(2);
    expect(stderrText()).toMatch(/PNG output is not supported.*fig\.svg/);
  });

  it("fails with exit 2 when the selection is empty", async () => {
    const code = await cliMain([
      "--in", fixturePath("transition_summary.csv"),
      "--kind", "surface_mr",
      "--N", "5",
      "--out", join(workDir, "fig.svg"),
    ]);
    expect(code).toBe(2);
    expect(stderrText()).toContain("selection matched no rows");
  });

  it("fails with exit 2 on usage errors and a missing input file", async () => {
    expect(await cliMain(["--in", "x.csv"])).toBe(2);
    expect(stderrText()).toContain("--kind is required");
    const code = await cliMain([
      "--in", join(workDir, "absent.csv"),
      "--kind", "lines_vs_N",
      "--out", join(workDir, "fig.svg"),
    ]);
    expect(code).toBe(2);
    expect(stderrText()).toContain("cannot read input file");
  });

  it("prints usage on --help and exits 0", async () => {
    expect(await cliMain(["--help"])).toBe(0);
    expect(logSpy.mock.calls.join("\n")).toContain("usage: qnfl-plot");
  });
});
