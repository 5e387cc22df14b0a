/**
 * Tokenization and tagging: sentence splitting, Penn POS tags with
 * lemmas from the wink tagger, phrasal-particle retagging, and
 * rule-based named-entity classes for dates, numbers, and acronyms.
 */

import sbd from "sbd";
import posTagger from "wink-pos-tagger";

const tagger = posTagger();

export interface TaggedToken {
  index: number;
  word: string;
  lemma: string;
  pos: string;
  ner: string;
}

const PARTICLES = new Set([
  "out", "up", "off", "down", "away", "back", "over", "apart", "together",
]);

const MONTHS = new Set([
  "january", "february", "march", "april", "may", "june", "july",
  "august", "september", "october", "november", "december",
]);

const MAGNITUDES = new Set([
  "hundred", "thousand", "million", "billion", "trillion",
]);

const ORDINAL_WORDS = new Set([
  "first", "second", "third", "fourth", "fifth", "sixth", "seventh",
  "eighth", "ninth", "tenth", "eleventh", "twelfth", "thirteenth",
  "fourteenth", "fifteenth", "sixteenth", "seventeenth", "eighteenth",
  "nineteenth", "twentieth",
]);

const ORG_SUFFIXES = new Set([
  "company", "corporation", "inc", "corp", "broadcasting", "conference",
  "league", "university", "institute", "association", "committee",
  "agency", "administration", "department", "ministry",
]);

const LOC_PREPS = new Set(["in", "at", "near"]);

export function splitSentences(text: string): string[] {
  return sbd
    .sentences(text, { newline_boundaries: true })
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

export function tagSentence(text: string): TaggedToken[] {
  const tokens: TaggedToken[] = [];
  for (const raw of tagger.tagSentence(text)) {
    const word = raw.value;
    if (!word) {
      continue;
    }
    tokens.push({
      index: tokens.length + 1,
      word,
      lemma: raw.lemma || raw.normal || word.toLowerCase(),
      pos: raw.pos || "SYM",
      ner: "O",
    });
  }
  retagParticles(tokens);
  retagQuestionVerb(tokens);
  applyNer(tokens);
  return tokens;
}

/** A preposition or adverb directly after a verb acts as its particle. */
function retagParticles(tokens: TaggedToken[]): void {
  for (let i = 1; i < tokens.length; i++) {
    const tok = tokens[i];
    const prev = tokens[i - 1];
    if (
      (tok.pos === "IN" || tok.pos === "RB") &&
      PARTICLES.has(tok.lemma) &&
      prev.pos.startsWith("VB")
    ) {
      tok.pos = "RP";
    }
  }
}

const QUESTION_AUX = new Set([
  "do", "will", "would", "can", "could", "shall", "should", "may", "might", "must",
]);

/**
 * In "What company did Walt Disney buy?" the lexical tagger marks the
 * clause-final verb as a noun. When a question has a fronting auxiliary
 * and no verb after it, the final noun must be that verb.
 */
function retagQuestionVerb(tokens: TaggedToken[]): void {
  if (tokens.length < 3 || tokens[tokens.length - 1].word !== "?") {
    return;
  }
  const auxAt = tokens.findIndex(
    (t) => (t.pos.startsWith("VB") && QUESTION_AUX.has(t.lemma)) || t.pos === "MD",
  );
  if (auxAt < 0) {
    return;
  }
  for (let i = auxAt + 1; i < tokens.length; i++) {
    if (tokens[i].pos.startsWith("VB")) {
      return;
    }
  }
  for (let i = tokens.length - 1; i > auxAt; i--) {
    const tok = tokens[i];
    if (/^[^A-Za-z0-9]+$/.test(tok.word)) {
      continue;
    }
    if (tok.pos === "NN" || tok.pos === "NNS") {
      tok.pos = "VB";
    }
    return;
  }
}

function asInt(tok: TaggedToken): number {
  return /^\d+$/.test(tok.word) ? parseInt(tok.word, 10) : NaN;
}

function isDay(tok: TaggedToken): boolean {
  const v = asInt(tok);
  return v >= 1 && v <= 31;
}

function isYear(tok: TaggedToken): boolean {
  const v = asInt(tok);
  return v >= 1000 && v <= 2999;
}

function applyNer(tokens: TaggedToken[]): void {
  const n = tokens.length;
  const isCd = (t: TaggedToken) => t.pos === "CD";
  const isMonth = (t: TaggedToken) => MONTHS.has(t.lemma);

  // date shapes: "19 April 1948", "February 7, 2016", "July 2014"
  let i = 0;
  while (i < n) {
    const tok = tokens[i];
    if (isCd(tok) && isDay(tok) && i + 1 < n && isMonth(tokens[i + 1])) {
      tok.ner = "DATE";
      tokens[i + 1].ner = "DATE";
      i += 2;
      if (i < n && isCd(tokens[i]) && isYear(tokens[i])) {
        tokens[i].ner = "DATE";
        i += 1;
      }
      continue;
    }
    if (isMonth(tok)) {
      tok.ner = "DATE";
      let j = i + 1;
      if (j < n && isCd(tokens[j]) && isDay(tokens[j]) && !isYear(tokens[j])) {
        tokens[j].ner = "DATE";
        j += 1;
        if (
          j + 1 < n &&
          tokens[j].word === "," &&
          isCd(tokens[j + 1]) &&
          isYear(tokens[j + 1])
        ) {
          tokens[j].ner = "DATE"; // the comma joins the merged span
          tokens[j + 1].ner = "DATE";
          j += 2;
        }
      } else if (j < n && isCd(tokens[j]) && isYear(tokens[j])) {
        tokens[j].ner = "DATE";
        j += 1;
      }
      i = j;
      continue;
    }
    i += 1;
  }

  for (const tok of tokens) {
    if (tok.ner !== "O") {
      continue;
    }
    if (tok.pos === "CD") {
      tok.ner = isYear(tok) ? "DATE" : "NUMBER";
    } else if (ORDINAL_WORDS.has(tok.lemma) || /^\d+(st|nd|rd|th)$/i.test(tok.word)) {
      tok.ner = "ORDINAL";
    } else if (MAGNITUDES.has(tok.lemma)) {
      tok.ner = "NUMBER";
    } else if (/^[A-Z]{2,6}$/.test(tok.word) && tok.pos.startsWith("NN")) {
      tok.ner = "ORGANIZATION";
    }
  }

  // proper-noun runs ending in an organization suffix word
  let runStart = -1;
  for (let k = 0; k <= n; k++) {
    const isNnp = k < n && tokens[k].pos.startsWith("NNP");
    if (isNnp && runStart < 0) {
      runStart = k;
    }
    if (!isNnp && runStart >= 0) {
      if (ORG_SUFFIXES.has(tokens[k - 1].lemma)) {
        for (let m = runStart; m < k; m++) {
          if (tokens[m].ner === "O") {
            tokens[m].ner = "ORGANIZATION";
          }
        }
      }
      runStart = -1;
    }
  }

  // proper-noun runs governed by a locative preposition
  runStart = -1;
  for (let k = 0; k <= n; k++) {
    const isNnp = k < n && tokens[k].pos.startsWith("NNP") && tokens[k].ner === "O";
    if (isNnp && runStart < 0) {
      runStart = k;
    }
    if (!isNnp && runStart >= 0) {
      let p = runStart - 1;
      while (p >= 0 && (tokens[p].pos === "DT" || tokens[p].pos.startsWith("JJ"))) {
        p -= 1;
      }
      if (p >= 0 && tokens[p].pos === "IN" && LOC_PREPS.has(tokens[p].lemma)) {
        for (let m = runStart; m < k; m++) {
          tokens[m].ner = "LOCATION";
        }
      }
      runStart = -1;
    }
  }
}
