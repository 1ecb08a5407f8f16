import { execFileSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { beforeAll, describe, expect, it } from "vitest";

const ROOT = path.join(__dirname, "..");
const CLI = path.join(ROOT, "dist", "cli.js");
const FIXTURES = path.join(ROOT, "fixtures");

interface Result {
  status: number;
  stdout: string;
  stderr: string;
}

function run(args: string[]): Result {
  try {
    const stdout = execFileSync("node", [CLI, ...args], {
      encoding: "utf8", stdio: ["ignore", "pipe", "pipe"],
    });
    return { status: 0, stdout, stderr: "" };
  } catch (err) {
    const e = err as { status?: number; stdout?: string; stderr?: string };
    return {
      status: e.status ?? 1,
      stdout: e.stdout?.toString() ?? "",
      stderr: e.stderr?.toString() ?? "",
    };
  }
}

let tmp: string;

beforeAll(() => {
  // npm's pretest hook builds dist; guard anyway so a bare vitest run
  // fails with a message instead of ENOENT noise.
  if (!fs.existsSync(CLI)) {
    throw new Error("dist/cli.js missing; run `npm run build` first");
  }
  tmp = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
});

describe("plots CLI", () => {
  it("renders the size sweep with one series per policy", () => {
    const out = path.join(tmp, "hitratio.svg");
    const res = run(["--kind", "hitratio",
                     "--in", path.join(FIXTURES, "size_sweep.csv"),
                     "--out", out]);
    expect(res.status, res.stderr).toBe(0);
    const svg = fs.readFileSync(out, "utf8");
    for (const policy of ["arc", "multistep", "gclock", "lru", "invector"]) {
      expect(svg).toContain(`data-series="${policy}" data-points="4"`);
    }
  });

  it("accepts several inputs at once", () => {
    const out = path.join(tmp, "merged.svg");
    const res = run(["--kind", "scaling",
                     "--in", path.join(FIXTURES, "scaling.csv"),
                     path.join(FIXTURES, "scaling.csv"),
                     "--out", out]);
    expect(res.status, res.stderr).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
  });

  it("renders breakdown bars whose segments sum to the hits column", () => {
    const out = path.join(tmp, "breakdown.svg");
    const res = run(["--kind", "breakdown",
                     "--in", path.join(FIXTURES, "m_sweep.csv"),
                     "--out", out]);
    expect(res.status, res.stderr).toBe(0);
    const svg = fs.readFileSync(out, "utf8");
    const csv = fs.readFileSync(path.join(FIXTURES, "m_sweep.csv"), "utf8")
      .trim().split("\n");
    const hitsCol = csv[0].split(",").indexOf("hits");
    const expected = csv.slice(1).map((l) => Number(l.split(",")[hitsCol]));
    const totals = [...svg.matchAll(/data-total="(\d+)"/g)]
      .map((m) => Number(m[1]));
    expect(totals).toEqual(expected);
  });

  it("renders the warmup curves from the checkpoint CSV", () => {
    const out = path.join(tmp, "warmup.svg");
    const res = run(["--kind", "warmup",
                     "--in", path.join(FIXTURES, "warmup.csv.warmup.csv"),
                     "--out", out]);
    expect(res.status, res.stderr).toBe(0);
    const svg = fs.readFileSync(out, "utf8");
    expect(svg).toContain('data-series="multistep random"');
    expect(svg).toContain('data-series="lru empty"');
  });

  it("reports a schema diagnostic and writes nothing on bad input", () => {
    const badCsv = path.join(tmp, "bad.csv");
    fs.writeFileSync(badCsv, "policy,hits\nlru,5\n");
    const out = path.join(tmp, "never.svg");
    const res = run(["--kind", "hitratio", "--in", badCsv, "--out", out]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("missing column");
    expect(res.stderr).toContain("hit_ratio");
    expect(fs.existsSync(out)).toBe(false);
  });

  it("treats an empty CSV as an error, not an empty chart", () => {
    const emptyCsv = path.join(tmp, "empty.csv");
    const header = fs.readFileSync(
      path.join(FIXTURES, "size_sweep.csv"), "utf8").split("\n")[0];
    fs.writeFileSync(emptyCsv, header + "\n");
    const out = path.join(tmp, "empty.svg");
    const res = run(["--kind", "hitratio", "--in", emptyCsv, "--out", out]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("no data rows");
    expect(fs.existsSync(out)).toBe(false);
  });

  it("rejects an unknown kind up front", () => {
    const res = run(["--kind", "pie", "--in", "x.csv", "--out", "y.svg"]);
    expect(res.status).not.toBe(0);
  });

  it("writes byte-identical output for identical input", () => {
    const a = path.join(tmp, "a.svg");
    const b = path.join(tmp, "b.svg");
    for (const out of [a, b]) {
      run(["--kind", "msweep", "--in", path.join(FIXTURES, "m_sweep.csv"),
           "--out", out]);
    }
    expect(fs.readFileSync(a, "utf8")).toBe(fs.readFileSync(b, "utf8"));
  });
});
