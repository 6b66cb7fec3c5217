#!/usr/bin/env node
/**
 * gkdvlab figure renderer.
 *
 * Usage:
 *   render --kind radius-decay|energy-drift|sigma-scaling|probe-ratios
 *          --in <table.csv> --out <figure.svg>
 *
 * Exit codes:
 *   0 ok, 2 usage, 3 schema mismatch, 4 empty table, 5 missing column, 6 io
 */

import { readFileSync, writeFileSync } from "node:fs";
import { EmptyTableError, MissingColumnError, SchemaMismatchError, parseTable } from "./csv.js";
import { EXPECTED_SCHEMA, FIGURE_KINDS, FigureKind, SlopeMismatchError, buildFigure } from "./figures.js";

const EXIT_USAGE = 2;
const EXIT_SCHEMA = 3;
const EXIT_EMPTY = 4;
const EXIT_COLUMN = 5;
const EXIT_IO = 6;

interface Args {
  kind: FigureKind;
  inputs: string[];
  out: string;
}

function parseArgs(argv: string[]): Args {
  let kind: string | null = null;
  const inputs: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--kind") {
      kind = argv[++i];
    } else if (a === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (a === "--out") {
      out = argv[++i];
    } else {
      throw new Error(`unknown argument: ${a}`);
    }
  }
  if (!kind || !out || inputs.length === 0) {
    throw new Error("required: --kind <kind> --in <csv...> --out <svg>");
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown kind '${kind}'; expected one of ${FIGURE_KINDS.join("|")}`);
  }
  return { kind: kind as FigureKind, inputs, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return EXIT_USAGE;
  }
  let text: string;
  try {
    text = readFileSync(args.inputs[0], "utf-8");
  } catch (err) {
    console.error(`cannot read ${args.inputs[0]}: ${(err as Error).message}`);
    return EXIT_IO;
  }
  try {
    const table = parseTable(text, EXPECTED_SCHEMA[args.kind]);
    const svg = buildFigure(args.kind, table);
    writeFileSync(args.out, svg);
  } catch (err) {
    if (err instanceof SchemaMismatchError) {
      console.error(`schema mismatch: ${err.message}`);
      return EXIT_SCHEMA;
    }
    if (err instanceof EmptyTableError) {
      console.error(`empty table: ${err.message}`);
      return EXIT_EMPTY;
    }
    if (err instanceof MissingColumnError) {
      console.error(`missing column: ${err.message}`);
      return EXIT_COLUMN;
    }
    if (err instanceof SlopeMismatchError) {
      console.error(`inconsistent artifact: ${err.message}`);
      return EXIT_SCHEMA;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return EXIT_IO;
  }
  console.log(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
