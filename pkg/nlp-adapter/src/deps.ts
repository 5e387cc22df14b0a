/**
 * Heuristic dependency inference over tagged tokens. The output follows
 * the enhanced-dependency conventions the knowledge compiler consumes:
 * nsubj/nsubjpass/dobj for clause roles, cop for copulas, case plus
 * nmod:<prep> for prepositional attachment, appos/conj for noun phrase
 * chains, and compound/det/amod/nummod inside noun phrases.
 */

import { TaggedToken } from "./pipeline";
import { DepJson } from "./types";

const NP_POS = new Set([
  "DT", "PDT", "PRP$", "WP$", "JJ", "JJR", "JJS", "CD",
  "NN", "NNS", "NNP", "NNPS", "PRP", "WP", "WDT", "EX", "POS", "HYPH", "FW",
]);

const PUNCT_POS = new Set([
  ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "SYM", "$", "#",
]);

const AUX_LEMMAS = new Set(["be", "do", "have"]);

interface Chunk {
  start: number;
  end: number;
  head: number;
  consumed: boolean;
}

interface Clause {
  main: number;      // main verb position (or phrase head when verbless)
  root: number;      // token that carries the clause's external edge
  firstVerb: number;
  passive: boolean;
  copular: boolean;
  advs: number[];
  subjectAssigned: boolean;
}

function isVerb(pos: string): boolean {
  return pos.startsWith("VB") || pos === "MD";
}

function isNounish(pos: string): boolean {
  return pos.startsWith("NN") || pos === "PRP" || pos === "WP";
}

function isWh(pos: string): boolean {
  return pos === "WP" || pos === "WDT" || pos === "WP$";
}

function isAdverb(pos: string): boolean {
  return pos === "RB" || pos === "RBR" || pos === "RBS";
}

function isPunctToken(tok: TaggedToken): boolean {
  if (PUNCT_POS.has(tok.pos)) {
    return true;
  }
  return /^[^A-Za-z0-9]+$/.test(tok.word);
}

function sanitizeRel(lemma: string): string {
  const clean = lemma.toLowerCase().replace(/[^a-z]/g, "");
  return clean || "prep";
}

function pickHead(tokens: TaggedToken[], start: number, end: number): number {
  for (let i = end; i >= start; i--) {
    if (tokens[i].pos.startsWith("NN")) {
      return i;
    }
  }
  for (let i = end; i >= start; i--) {
    const pos = tokens[i].pos;
    if (pos === "PRP" || pos === "WP") {
      return i;
    }
  }
  for (let i = end; i >= start; i--) {
    if (tokens[i].pos.startsWith("JJ")) {
      return i;
    }
  }
  for (let i = end; i >= start; i--) {
    const pos = tokens[i].pos;
    if (pos !== "HYPH" && pos !== "POS") {
      return i;
    }
  }
  return end;
}

export function inferDeps(tokens: TaggedToken[]): DepJson[] {
  const n = tokens.length;
  const out: DepJson[] = [];
  if (n === 0) {
    return out;
  }
  const seen = new Set<string>();
  const hasIncoming = new Array<boolean>(n).fill(false);
  const add = (gov: number, dep: number, rel: string): void => {
    if (dep < 0 || dep >= n || gov === dep) {
      return;
    }
    const key = `${gov}:${dep}:${rel}`;
    if (seen.has(key)) {
      return;
    }
    seen.add(key);
    out.push({ gov: gov < 0 ? 0 : gov + 1, dep: dep + 1, rel });
    hasIncoming[dep] = true;
  };

  // ---- noun phrase chunks -------------------------------------------------
  const chunks: Chunk[] = [];
  {
    let start = -1;
    for (let i = 0; i <= n; i++) {
      const inNp = i < n && NP_POS.has(tokens[i].pos);
      if (inNp && start < 0) {
        start = i;
      }
      if (!inNp && start >= 0) {
        chunks.push({
          start,
          end: i - 1,
          head: pickHead(tokens, start, i - 1),
          consumed: false,
        });
        start = -1;
      }
    }
  }
  const lastChunk = (pred: (c: Chunk) => boolean): Chunk | undefined => {
    for (let i = chunks.length - 1; i >= 0; i--) {
      if (pred(chunks[i])) {
        return chunks[i];
      }
    }
    return undefined;
  };
  const verbBetween = (a: number, b: number): boolean => {
    for (let p = a + 1; p < b; p++) {
      if (isVerb(tokens[p].pos)) {
        return true;
      }
    }
    return false;
  };

  // ---- verb groups (auxiliary chains, adverbs may interleave) -------------
  interface Group {
    verbs: number[];
    advs: number[];
    main: number;
  }
  const groups: Group[] = [];
  {
    let verbs: number[] = [];
    let advs: number[] = [];
    for (let i = 0; i < n; i++) {
      const pos = tokens[i].pos;
      if (isVerb(pos)) {
        verbs.push(i);
        continue;
      }
      if (isAdverb(pos) && verbs.length > 0 && i + 1 < n && isVerb(tokens[i + 1].pos)) {
        advs.push(i);
        continue;
      }
      if (verbs.length > 0) {
        groups.push({ verbs, advs, main: verbs[verbs.length - 1] });
        verbs = [];
        advs = [];
      }
    }
    if (verbs.length > 0) {
      groups.push({ verbs, advs, main: verbs[verbs.length - 1] });
    }
  }

  // ---- clauses ------------------------------------------------------------
  const clauses: Clause[] = [];
  const used = groups.map(() => false);
  for (let g = 0; g < groups.length; g++) {
    if (used[g]) {
      continue;
    }
    const grp = groups[g];
    const mainTok = tokens[grp.main];
    const single = grp.verbs.length === 1;

    // question inversion: a lone leading auxiliary joins the next verb
    // group when a subject phrase sits between them
    if (
      single &&
      (AUX_LEMMAS.has(mainTok.lemma) || mainTok.pos === "MD") &&
      g + 1 < groups.length &&
      !used[g + 1]
    ) {
      const nxt = groups[g + 1];
      const subj = chunks.find(
        (c) => !c.consumed && c.start > grp.main && c.end < nxt.verbs[0],
      );
      if (subj) {
        used[g + 1] = true;
        const main = nxt.main;
        const passive = mainTok.lemma === "be" && tokens[main].pos === "VBN";
        add(main, grp.main, passive ? "auxpass" : "aux");
        for (const v of nxt.verbs) {
          if (v !== main) {
            add(main, v, "aux");
          }
        }
        add(main, subj.head, passive ? "nsubjpass" : "nsubj");
        subj.consumed = true;
        // a fronted noun phrase is the displaced object
        const fronted = lastChunk((c) => !c.consumed && c.end < grp.main);
        if (fronted) {
          add(main, fronted.head, "dobj");
          fronted.consumed = true;
        }
        clauses.push({
          main,
          root: main,
          firstVerb: grp.main,
          passive,
          copular: false,
          advs: grp.advs.concat(nxt.advs),
          subjectAssigned: true,
        });
        continue;
      }
    }

    let passive = false;
    for (const v of grp.verbs) {
      if (v === grp.main) {
        continue;
      }
      const tok = tokens[v];
      if ((tok.lemma === "be" || tok.lemma === "get") && mainTok.pos === "VBN") {
        add(grp.main, v, "auxpass");
        passive = true;
      } else {
        add(grp.main, v, "aux");
      }
    }
    clauses.push({
      main: grp.main,
      root: grp.main,
      firstVerb: grp.verbs[0],
      passive,
      copular: single && mainTok.lemma === "be",
      advs: grp.advs,
      subjectAssigned: false,
    });
  }
  if (clauses.length === 0) {
    const first = chunks[0];
    const rootPos = first ? first.head : 0;
    if (first) {
      first.consumed = true;
    }
    clauses.push({
      main: rootPos,
      root: rootPos,
      firstVerb: rootPos,
      passive: false,
      copular: false,
      advs: [],
      subjectAssigned: true,
    });
  }
  const zoneEnd = (k: number): number =>
    k + 1 < clauses.length ? clauses[k + 1].firstVerb : n;

  // ---- bracketed appositions: "Company ( ABC )" ---------------------------
  for (let ci = 0; ci + 1 < chunks.length; ci++) {
    const a = chunks[ci];
    const b = chunks[ci + 1];
    if (
      b.start === a.end + 2 &&
      tokens[a.end + 1].pos === "-LRB-" &&
      b.end + 1 < n &&
      tokens[b.end + 1].pos === "-RRB-"
    ) {
      add(a.head, b.head, "appos");
      b.consumed = true;
    }
  }

  // ---- comma and conjunction chains between adjacent chunks ---------------
  for (let ci = 0; ci < chunks.length; ci++) {
    const base = chunks[ci];
    if (base.consumed) {
      continue;
    }
    const members: Chunk[] = [];
    let ccPos = -1;
    let cur = ci;
    while (cur + 1 < chunks.length) {
      const next = chunks[cur + 1];
      if (next.consumed) {
        break;
      }
      let ok = next.start > chunks[cur].end + 1;
      let localCc = -1;
      for (let p = chunks[cur].end + 1; ok && p < next.start; p++) {
        const tok = tokens[p];
        if (tok.word === ",") {
          continue;
        }
        if (tok.pos === "CC") {
          localCc = p;
          continue;
        }
        ok = false;
      }
      if (!ok) {
        break;
      }
      members.push(next);
      if (localCc >= 0) {
        ccPos = localCc;
      }
      cur++;
    }
    if (members.length === 0) {
      continue;
    }
    if (ccPos >= 0 || members.length > 1) {
      for (const m of members) {
        add(base.head, m.head, "conj");
        m.consumed = true;
      }
      if (ccPos >= 0) {
        add(base.head, ccPos, "cc");
      }
    } else {
      add(base.head, members[0].head, "appos");
      members[0].consumed = true;
    }
    ci = cur;
  }

  // ---- copulas: the predicate phrase becomes the clause root --------------
  clauses.forEach((cl, k) => {
    if (!cl.copular) {
      return;
    }
    const end = zoneEnd(k);
    const predAfter = chunks.find(
      (c) => !c.consumed && c.start > cl.main && c.start < end,
    );
    const before = lastChunk((c) => !c.consumed && c.end < cl.firstVerb);
    let root: Chunk | undefined;
    let subj: Chunk | undefined;
    if (predAfter && before && isWh(tokens[before.head].pos)) {
      root = before; // wh-fronted predicate: "What is ABC?"
      subj = predAfter;
    } else if (predAfter) {
      root = predAfter;
      subj = before;
    } else {
      root = before;
    }
    if (!root) {
      cl.copular = false;
      return;
    }
    add(root.head, cl.main, "cop");
    cl.root = root.head;
    root.consumed = true;
    if (subj) {
      add(root.head, subj.head, "nsubj");
      subj.consumed = true;
    }
    cl.subjectAssigned = true;
  });

  // ---- subjects -----------------------------------------------------------
  clauses.forEach((cl) => {
    if (cl.subjectAssigned) {
      return;
    }
    const subj = lastChunk(
      (c) =>
        !c.consumed &&
        c.end < cl.firstVerb &&
        !verbBetween(c.end, cl.firstVerb),
    );
    if (subj) {
      add(cl.main, subj.head, cl.passive ? "nsubjpass" : "nsubj");
      subj.consumed = true;
    }
    cl.subjectAssigned = true;
  });

  // ---- objects and prepositional attachments ------------------------------
  clauses.forEach((cl, k) => {
    const end = zoneEnd(k);
    const anchor = cl.copular ? cl.root : cl.main;
    let sawDobj = false;
    for (const c of chunks) {
      if (c.consumed || c.start <= anchor || c.start >= end) {
        continue;
      }
      const prevPos = c.start - 1;
      const prev = prevPos >= 0 ? tokens[prevPos] : undefined;
      if (prev && (prev.pos === "IN" || prev.pos === "TO")) {
        add(c.head, prevPos, "case");
        if (prev.lemma === "of") {
          const target = lastChunk((x) => x.end < prevPos);
          add(target ? target.head : anchor, c.head, "nmod:of");
        } else if (cl.passive && prev.lemma === "by") {
          add(cl.main, c.head, "nmod:agent");
        } else {
          add(anchor, c.head, "nmod:" + sanitizeRel(prev.lemma));
        }
      } else if (!cl.copular && !sawDobj) {
        add(cl.main, c.head, "dobj");
        sawDobj = true;
      } else {
        add(cl.root, c.head, "dep");
      }
      c.consumed = true;
    }
  });

  // ---- edges inside each noun phrase --------------------------------------
  for (const c of chunks) {
    const h = c.head;
    const possessors = new Set<number>();
    for (let p = c.start; p < c.end; p++) {
      if (tokens[p + 1].pos === "POS" && isNounish(tokens[p].pos)) {
        possessors.add(p);
        add(p, p + 1, "case");
      }
    }
    for (let p = c.start; p <= c.end; p++) {
      if (p === h) {
        continue;
      }
      const pos = tokens[p].pos;
      if (possessors.has(p)) {
        add(h, p, "nmod:poss");
      } else if (pos === "POS") {
        continue;
      } else if (pos === "DT" || pos === "PDT" || pos === "WDT") {
        add(h, p, "det");
      } else if (pos === "PRP$" || pos === "WP$") {
        add(h, p, "nmod:poss");
      } else if (pos.startsWith("JJ")) {
        add(h, p, "amod");
      } else if (pos === "CD") {
        add(h, p, "nummod");
      } else if (pos === "HYPH") {
        add(h, p, "punct");
      } else if (isNounish(pos)) {
        add(h, p, "compound");
      } else {
        add(h, p, "dep");
      }
    }
  }

  // ---- adverbs and particles ----------------------------------------------
  const nearestClause = (p: number): Clause => {
    let best = clauses[0];
    let bestDist = Infinity;
    for (const cl of clauses) {
      const dist = Math.abs(cl.main - p);
      if (dist < bestDist) {
        bestDist = dist;
        best = cl;
      }
    }
    return best;
  };
  clauses.forEach((cl) => {
    for (const a of cl.advs) {
      add(cl.main, a, "advmod");
    }
  });
  for (let p = 0; p < n; p++) {
    const pos = tokens[p].pos;
    if (pos === "WRB" && !hasIncoming[p]) {
      const cl = nearestClause(p);
      add(cl.copular ? cl.root : cl.main, p, "advmod");
    } else if (isAdverb(pos) && !hasIncoming[p]) {
      add(nearestClause(p).main, p, "advmod");
    } else if (pos === "RP") {
      for (let q = p - 1; q >= 0; q--) {
        if (isVerb(tokens[q].pos)) {
          add(q, p, "compound:prt");
          break;
        }
      }
    }
  }

  // ---- clause linking -----------------------------------------------------
  add(-1, clauses[0].root, "root");
  for (let k = 1; k < clauses.length; k++) {
    const prev = clauses[k - 1];
    const cur = clauses[k];
    let ccPos = -1;
    let comma = false;
    for (let p = prev.main + 1; p < cur.firstVerb; p++) {
      if (tokens[p].pos === "CC" && !hasIncoming[p]) {
        ccPos = p;
      }
      if (tokens[p].word === ",") {
        comma = true;
      }
    }
    if (ccPos >= 0) {
      add(prev.root, cur.root, "conj");
      add(prev.root, ccPos, "cc");
    } else if (
      cur.firstVerb > 0 &&
      tokens[cur.firstVerb - 1].pos === "TO"
    ) {
      add(cur.root, cur.firstVerb - 1, "mark");
      add(prev.root, cur.root, "xcomp");
    } else if (comma) {
      add(prev.root, cur.root, "parataxis");
    } else {
      add(prev.root, cur.root, "ccomp");
    }
  }

  // ---- punctuation and anything still unattached --------------------------
  for (let p = 0; p < n; p++) {
    if (isPunctToken(tokens[p]) && !hasIncoming[p]) {
      add(nearestClause(p).root, p, "punct");
    }
  }
  for (let p = 0; p < n; p++) {
    if (!hasIncoming[p] && p !== clauses[0].root) {
      add(nearestClause(p).root, p, "dep");
    }
  }
  return out;
}
