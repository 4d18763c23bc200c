import { spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { validateBlockDump, type BlockDump } from "../src/schema.js";

const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..");
const CLI = join(ROOT, "dist", "cli.js");
const FIXTURES = join(ROOT, "fixtures");

function runCli(args: string[]): { status: number | null; stdout: string; stderr: string } {
  const result = spawnSync(process.execPath, [CLI, ...args], {
    encoding: "utf8",
    timeout: 60_000,
  });
  return { status: result.status, stdout: result.stdout, stderr: result.stderr };
}

let scratch: string;

beforeAll(() => {
  if (!existsSync(CLI)) {
    throw new Error(`CLI bundle missing at ${CLI}; run \`npm run build\` first`);
  }
  scratch = mkdtempSync(join(tmpdir(), "tbrf-extract-"));
});

afterAll(() => {
  rmSync(scratch, { recursive: true, force: true });
});

describe("tbrf-extract CLI", () => {
  it("prints a schema-valid dump to stdout", () => {
    const { status, stdout } = runCli([join(FIXTURES, "single_paragraph.pdf")]);
    expect(status).toBe(0);
    const dump = JSON.parse(stdout) as BlockDump;
    expect(validateBlockDump(dump).ok).toBe(true);
    expect(dump.doc_id).toBe("single_paragraph");
  }, 60_000);

  it("writes the dump to a file with --output", () => {
    const out = join(scratch, "dump.json");
    const { status, stdout } = runCli([join(FIXTURES, "two_column.pdf"), "--output", out]);
    expect(status).toBe(0);
    expect(stdout).toBe("");
    const dump = JSON.parse(readFileSync(out, "utf8")) as BlockDump;
    expect(validateBlockDump(dump).ok).toBe(true);
    expect(dump.pages).toHaveLength(1);
  }, 60_000);

  it("exits 2 on usage errors", () => {
    const missing = runCli([]);
    expect(missing.status).toBe(2);
    expect(missing.stderr).not.toBe("");

    const unknownFlag = runCli([join(FIXTURES, "single_paragraph.pdf"), "--bogus"]);
    expect(unknownFlag.status).toBe(2);
  }, 60_000);

  it("exits 1 with a JSON error report on rejected PDFs", () => {
    const { status, stderr } = runCli([join(FIXTURES, "encrypted.pdf")]);
    expect(status).toBe(1);
    const report = JSON.parse(stderr) as { error: string; message: string };
    expect(report.error).toBe("EncryptedPdfError");
    expect(report.message).toContain("password");
  }, 60_000);

  it("exits 1 with a JSON error report on missing files", () => {
    const { status, stderr } = runCli([join(FIXTURES, "absent.pdf")]);
    expect(status).toBe(1);
    const report = JSON.parse(stderr) as { error: string };
    expect(report.error).toBe("InputError");
  }, 60_000);
});
