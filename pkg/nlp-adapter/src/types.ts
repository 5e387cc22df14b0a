/**
 * Document JSON schema shared with the knowledge compiler: sentences of
 * 1-indexed tokens plus dependency edges, where gov 0 marks the root.
 */

export interface TokenJson {
  index: number;
  word: string;
  lemma: string;
  pos: string;
  ner: string;
}

export interface DepJson {
  gov: number;
  dep: number;
  rel: string;
}

export interface SentenceJson {
  tokens: TokenJson[];
  deps: DepJson[];
}

export interface DocumentJson {
  sentences: SentenceJson[];
}

/**
 * Check a value against the document contract the downstream loader
 * enforces. Returns a list of problems; an empty list means valid.
 */
export function validateDocument(doc: unknown): string[] {
  const problems: string[] = [];
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    return ["$: expected a JSON object"];
  }
  const sentences = (doc as { sentences?: unknown }).sentences;
  if (!Array.isArray(sentences)) {
    return ["sentences: expected a list"];
  }
  sentences.forEach((sent, si) => {
    const spath = `sentences[${si}]`;
    if (typeof sent !== "object" || sent === null) {
      problems.push(`${spath}: expected an object`);
      return;
    }
    const tokens = (sent as { tokens?: unknown }).tokens;
    const deps = (sent as { deps?: unknown }).deps;
    if (!Array.isArray(tokens)) {
      problems.push(`${spath}.tokens: expected a list`);
      return;
    }
    if (!Array.isArray(deps)) {
      problems.push(`${spath}.deps: expected a list`);
      return;
    }
    const valid = new Set<number>();
    tokens.forEach((tok, ti) => {
      const tpath = `${spath}.tokens[${ti}]`;
      if (typeof tok !== "object" || tok === null) {
        problems.push(`${tpath}: expected an object`);
        return;
      }
      const t = tok as Record<string, unknown>;
      if (t.index !== ti + 1) {
        problems.push(`${tpath}.index: expected ${ti + 1}`);
      } else {
        valid.add(ti + 1);
      }
      for (const key of ["word", "lemma", "pos"]) {
        if (typeof t[key] !== "string" || t[key] === "") {
          problems.push(`${tpath}.${key}: expected a non-empty string`);
        }
      }
      if (t.ner !== undefined && typeof t.ner !== "string") {
        problems.push(`${tpath}.ner: expected a string`);
      }
    });
    deps.forEach((dep, di) => {
      const dpath = `${spath}.deps[${di}]`;
      if (typeof dep !== "object" || dep === null) {
        problems.push(`${dpath}: expected an object`);
        return;
      }
      const d = dep as Record<string, unknown>;
      if (typeof d.gov !== "number" || (d.gov !== 0 && !valid.has(d.gov))) {
        problems.push(`${dpath}.gov: no token with index ${String(d.gov)}`);
      }
      if (typeof d.dep !== "number" || !valid.has(d.dep)) {
        problems.push(`${dpath}.dep: no token with index ${String(d.dep)}`);
      }
      if (typeof d.rel !== "string" || d.rel === "") {
        problems.push(`${dpath}.rel: expected a non-empty string`);
      }
    });
  });
  return problems;
}
