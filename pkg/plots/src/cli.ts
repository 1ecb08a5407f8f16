#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { KINDS, Kind } from "./figure";
import { render } from "./render";

const argv = yargs(hideBin(process.argv))
  .usage("plots --kind KIND --in FILE... --out FILE")
  .option("kind", {
    choices: KINDS,
    demandOption: true,
    describe: "which figure shape to render",
  })
  .option("in", {
    type: "string",
    array: true,
    demandOption: true,
    describe: "benchmark CSV input(s); the warmup kind takes .warmup.csv files",
  })
  .option("out", {
    type: "string",
    demandOption: true,
    describe: "SVG output path",
  })
  .option("title", { type: "string", describe: "optional chart title" })
  .strict()
  .parseSync();

try {
  const out = render({
    kind: argv.kind as Kind,
    inputs: argv.in as string[],
    output: argv.out,
    title: argv.title,
  });
  console.log(`wrote ${out}`);
} catch (err) {
  console.error(`plots: ${(err as Error).message}`);
  process.exit(1);
}
