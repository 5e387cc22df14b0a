#!/usr/bin/env node
/**
 * caspr-annotate: read raw English text, write parsed-document JSON.
 *
 *   caspr-annotate --in FILE --out FILE [--question]
 *
 * Use "-" for stdin/stdout.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { annotate } from "./annotate";

const USAGE =
  "usage: caspr-annotate --in FILE --out FILE [--question]\n" +
  "\n" +
  "Annotates raw English text as parsed-document JSON (tokens with\n" +
  "lemma/POS/NER plus dependency edges). Use - to read stdin or write\n" +
  "stdout. --question treats the input as a single question sentence.\n";

export function main(argv: string[]): number {
  let values: { in?: string; out?: string; question?: boolean; help?: boolean };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        question: { type: "boolean", default: false },
        help: { type: "boolean", short: "h", default: false },
      },
    }));
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  if (values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  if (!values.in || !values.out) {
    process.stderr.write(`error: --in and --out are required\n${USAGE}`);
    return 2;
  }

  let text: string;
  try {
    text = values.in === "-" ? readFileSync(0, "utf8") : readFileSync(values.in, "utf8");
  } catch (err) {
    process.stderr.write(`error: cannot read ${values.in}: ${(err as Error).message}\n`);
    return 2;
  }

  const doc = annotate(text, { question: values.question });
  const payload = JSON.stringify(doc, null, 2) + "\n";
  try {
    if (values.out === "-") {
      process.stdout.write(payload);
    } else {
      writeFileSync(values.out, payload, "utf8");
    }
  } catch (err) {
    process.stderr.write(`error: cannot write ${values.out}: ${(err as Error).message}\n`);
    return 2;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
