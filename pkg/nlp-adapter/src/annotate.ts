/**
 * Text-to-document annotation: sentence splitting, tagging, and
 * dependency inference, producing the JSON consumed by the knowledge
 * compiler's document loader.
 */

import { inferDeps } from "./deps";
import { splitSentences, tagSentence } from "./pipeline";
import { DocumentJson, SentenceJson } from "./types";

export { validateDocument } from "./types";
export type { DepJson, DocumentJson, SentenceJson, TokenJson } from "./types";

export interface AnnotateOptions {
  /** Treat the whole input as one sentence (questions are never split). */
  question?: boolean;
}

export function annotate(text: string, options: AnnotateOptions = {}): DocumentJson {
  const trimmed = text.trim();
  if (trimmed === "") {
    return { sentences: [] };
  }
  const pieces = options.question ? [trimmed] : splitSentences(trimmed);
  const sentences: SentenceJson[] = [];
  for (const piece of pieces) {
    const tokens = tagSentence(piece);
    if (tokens.length === 0) {
      continue;
    }
    const deps = inferDeps(tokens);
    sentences.push({
      tokens: tokens.map((t) => ({
        index: t.index,
        word: t.word,
        lemma: t.lemma,
        pos: t.pos,
        ner: t.ner,
      })),
      deps,
    });
  }
  return { sentences };
}
