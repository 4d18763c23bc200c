#!/usr/bin/env node
/** tbrf-extract: one PDF in, one block-dump JSON out. */

import { writeFile } from "node:fs/promises";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { ExtractError } from "./errors.js";
import { extractPdfFile } from "./extract.js";

export async function main(argv: string[]): Promise<number> {
  let usageError = false;
  const parser = yargs(argv)
    .scriptName("tbrf-extract")
    .usage("$0 <pdf> [-o dump.json]")
    .command("$0 <pdf>", "extract text/image blocks from a born-digital PDF")
    .positional("pdf", { type: "string", demandOption: true })
    .option("output", {
      alias: "o",
      type: "string",
      describe: "write the dump here instead of stdout",
    })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      if (err) throw err;
      usageError = true;
      process.stderr.write(`${msg}\n`);
    });

  const args = await parser.parse();
  if (usageError) return 2;

  try {
    const dump = await extractPdfFile(args.pdf as string);
    const payload = JSON.stringify(dump, null, 2) + "\n";
    if (args.output) {
      await writeFile(args.output, payload);
    } else {
      process.stdout.write(payload);
    }
    return 0;
  } catch (err) {
    if (err instanceof ExtractError) {
      process.stderr.write(JSON.stringify(err.toJSON()) + "\n");
      return 1;
    }
    throw err;
  }
}

const code = await main(hideBin(process.argv));
process.exitCode = code;
