"""Dependency-parsed document ingestion.

A document is JSON of the form::

    {"sentences": [{"tokens": [{"index": 1, "word": "NASA", "lemma": "nasa",
                                "pos": "NNP", "ner": "ORGANIZATION"}, ...],
                    "deps": [{"gov": 2, "dep": 1, "rel": "nsubj"}, ...]}]}

Token indices are 1-based and contiguous; ``gov`` 0 marks the root edge.
Questions use the same schema.  Normalization lowercases text, merges
multi-token entities, and strips soft punctuation; event segmentation
carves one region per verbal trigger, numbered across the document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .logic import CasprError


class DocumentError(CasprError):
    pass


# Punctuation kept by normalization: brackets and dashes feed the
# abbreviation and time-span patterns downstream.
_KEPT_PUNCT = {"(", ")", "[", "]", "-lrb-", "-rrb-", "-", "–", "—"}
_BRACKET_OPEN = {"(", "[", "-lrb-"}
_BRACKET_CLOSE = {")", "]", "-rrb-"}
_DASHES = {"-", "–", "—"}

_PUNCT_CHARS = set(".,;:!?'\"`()[]{}–—-/\\")

AUX_RELS = {"aux", "auxpass", "aux:pass"}
SUBJECT_RELS = {"nsubj", "nsubjpass", "nsubj:pass", "nsubj:xsubj"}

# Numeric tags stay unmerged: "45 million" must remain two tokens so each
# contributes its own number fact.
_UNMERGED_TAGS = {"NUMBER", "ORDINAL"}


def _is_punct_word(word: str) -> bool:
    w = word.lower()
    if w in ("-lrb-", "-rrb-"):
        return True
    return bool(word) and all(c in _PUNCT_CHARS for c in word)


def _keep_punct(word: str) -> bool:
    return word in _KEPT_PUNCT or all(c in _DASHES for c in word)


@dataclass(frozen=True)
class Token:
    index: int
    word: str
    lemma: str
    pos: str
    ner: str = "O"
    # surface form before lowercasing, for e.g. all-caps checks
    orig: str = ""

    def is_punct(self) -> bool:
        return _is_punct_word(self.word)

    def is_noun(self) -> bool:
        return self.pos.startswith("NN")

    def is_verb(self) -> bool:
        return self.pos.startswith("VB")

    def is_entity(self) -> bool:
        return self.ner != "O"


@dataclass(frozen=True)
class Edge:
    gov: int
    dep: int
    rel: str


@dataclass
class Sentence:
    tokens: list[Token]
    deps: list[Edge]
    _by_index: dict[int, Token] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_index = {t.index: t for t in self.tokens}

    def token(self, index: int) -> Token:
        return self._by_index[index]

    def has(self, index: int) -> bool:
        return index in self._by_index

    def children(self, gov: int, *rels: str) -> list[Edge]:
        out = [e for e in self.deps if e.gov == gov]
        if rels:
            out = [e for e in out if e.rel in rels]
        return sorted(out, key=lambda e: e.dep)

    def children_prefixed(self, gov: int, prefix: str) -> list[Edge]:
        out = [e for e in self.deps if e.gov == gov and e.rel.startswith(prefix)]
        return sorted(out, key=lambda e: e.dep)

    def parents(self, dep: int, *rels: str) -> list[Edge]:
        out = [e for e in self.deps if e.dep == dep and e.gov != 0]
        if rels:
            out = [e for e in out if e.rel in rels]
        return sorted(out, key=lambda e: e.gov)

    def has_parent_rel(self, dep: int, rels: Iterable[str]) -> bool:
        wanted = set(rels)
        return any(e.dep == dep and e.rel in wanted for e in self.deps)

    def roots(self) -> list[int]:
        return [e.dep for e in self.deps if e.gov == 0]


@dataclass
class AnnotatedDocument:
    sentences: list[Sentence]


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def _require(cond: bool, path: str, reason: str) -> None:
    if not cond:
        raise DocumentError("%s: %s" % (path, reason))


def load_document(source) -> AnnotatedDocument:
    """Load and validate document JSON from a path, file object, or dict."""
    if isinstance(source, dict):
        data = source
    elif hasattr(source, "read"):
        data = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as handle:
            data = json.load(handle)

    _require(isinstance(data, dict), "$", "expected a JSON object")
    _require("sentences" in data, "$", "missing 'sentences'")
    _require(isinstance(data["sentences"], list), "sentences", "expected a list")

    sentences = []
    for si, sent in enumerate(data["sentences"]):
        spath = "sentences[%d]" % si
        _require(isinstance(sent, dict), spath, "expected an object")
        _require(isinstance(sent.get("tokens"), list), spath + ".tokens", "expected a list")
        _require(isinstance(sent.get("deps"), list), spath + ".deps", "expected a list")

        tokens = []
        for ti, tok in enumerate(sent["tokens"]):
            tpath = "%s.tokens[%d]" % (spath, ti)
            _require(isinstance(tok, dict), tpath, "expected an object")
            for key in ("index", "word", "lemma", "pos"):
                _require(key in tok, tpath, "missing '%s'" % key)
            _require(isinstance(tok["index"], int), tpath + ".index", "expected an integer")
            _require(tok["index"] == ti + 1, tpath + ".index",
                     "expected %d, found %r" % (ti + 1, tok["index"]))
            for key in ("word", "lemma", "pos"):
                _require(isinstance(tok[key], str) and tok[key] != "",
                         "%s.%s" % (tpath, key), "expected a non-empty string")
            ner = tok.get("ner", "O")
            _require(isinstance(ner, str), tpath + ".ner", "expected a string")
            tokens.append(Token(tok["index"], tok["word"], tok["lemma"],
                                tok["pos"], ner or "O", orig=tok["word"]))

        valid = {t.index for t in tokens}
        deps = []
        for di, dep in enumerate(sent["deps"]):
            dpath = "%s.deps[%d]" % (spath, di)
            _require(isinstance(dep, dict), dpath, "expected an object")
            for key in ("gov", "dep", "rel"):
                _require(key in dep, dpath, "missing '%s'" % key)
            _require(isinstance(dep["gov"], int), dpath + ".gov", "expected an integer")
            _require(isinstance(dep["dep"], int), dpath + ".dep", "expected an integer")
            _require(isinstance(dep["rel"], str) and dep["rel"] != "",
                     dpath + ".rel", "expected a non-empty string")
            _require(dep["gov"] == 0 or dep["gov"] in valid, dpath + ".gov",
                     "no token with index %r" % dep["gov"])
            _require(dep["dep"] in valid, dpath + ".dep",
                     "no token with index %r" % dep["dep"])
            deps.append(Edge(dep["gov"], dep["dep"], dep["rel"]))

        sentences.append(Sentence(tokens, deps))
    return AnnotatedDocument(sentences)


def document_to_json(doc: AnnotatedDocument) -> dict:
    return {
        "sentences": [
            {
                "tokens": [
                    {"index": t.index, "word": t.word, "lemma": t.lemma,
                     "pos": t.pos, "ner": t.ner}
                    for t in s.tokens
                ],
                "deps": [{"gov": e.gov, "dep": e.dep, "rel": e.rel} for e in s.deps],
            }
            for s in doc.sentences
        ]
    }


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def _clean(text: str) -> str:
    if _is_punct_word(text):
        return text.lower()
    return text.lower().replace("-", "_")


class _Groups:
    """Union-find over token indices for merge decisions."""

    def __init__(self, indices):
        self.parent = {i: i for i in indices}

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as representative
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _merge_sentence(sent: Sentence) -> Sentence:
    tokens = sent.tokens
    groups = _Groups([t.index for t in tokens])

    # contiguous same-NER runs (punctuation joins only when itself tagged)
    run: list[Token] = []
    def close_run():
        if len(run) >= 2:
            for t in run[1:]:
                groups.union(run[0].index, t.index)
        run.clear()

    prev_tag = None
    for tok in tokens:
        tag = tok.ner
        if tag in _UNMERGED_TAGS:
            tag = "O"
        if tag != "O" and tag == prev_tag:
            run.append(tok)
        else:
            close_run()
            if tag != "O":
                run.append(tok)
        prev_tag = tag if tag != "O" else None
        if tag == "O":
            prev_tag = None
    close_run()

    # compound-linked proper nouns
    for e in sent.deps:
        if e.rel == "compound" and sent.has(e.gov):
            gov, dep = sent.token(e.gov), sent.token(e.dep)
            if gov.pos.startswith("NNP") and dep.pos.startswith("NNP"):
                groups.union(e.gov, e.dep)

    members: dict[int, list[Token]] = {}
    for tok in tokens:
        members.setdefault(groups.find(tok.index), []).append(tok)

    # External edges decide each group's head; fall back to the last member.
    merged_tokens: list[tuple[int, Token]] = []
    rep_of: dict[int, int] = {}
    for rep in sorted(members):
        group = sorted(members[rep], key=lambda t: t.index)
        in_group = {t.index for t in group}
        for t in group:
            rep_of[t.index] = rep
        if len(group) == 1:
            tok = group[0]
            merged_tokens.append((rep, replace(tok, word=_clean(tok.word),
                                               lemma=_clean(tok.lemma), orig=tok.orig)))
            continue
        head = None
        for e in sent.deps:
            if e.dep in in_group and (e.gov == 0 or e.gov not in in_group):
                head = sent.token(e.dep)
                break
        if head is None:
            head = group[-1]
        parts = [t for t in group if not t.is_punct()]
        word = "_".join(_clean(t.word) for t in parts)
        lemma = "_".join(_clean(t.lemma) for t in parts)
        orig = "_".join(t.orig for t in parts)
        merged_tokens.append((rep, Token(rep, word, lemma, head.pos, head.ner, orig)))

    # drop soft punctuation (keep brackets and dashes for pattern scans)
    kept: list[tuple[int, Token]] = []
    for rep, tok in merged_tokens:
        if tok.is_punct() and not _keep_punct(tok.word):
            continue
        kept.append((rep, tok))

    renumber = {rep: i + 1 for i, (rep, _) in enumerate(kept)}
    new_tokens = [replace(tok, index=renumber[rep]) for rep, tok in kept]

    new_deps: list[Edge] = []
    seen: set[Edge] = set()
    for e in sent.deps:
        gov = 0 if e.gov == 0 else rep_of[e.gov]
        dep = rep_of[e.dep]
        if gov != 0 and gov == dep:
            continue  # intra-group edge
        if (gov != 0 and gov not in renumber) or dep not in renumber:
            continue  # edge onto dropped punctuation
        edge = Edge(renumber.get(gov, 0) if gov else 0, renumber[dep], e.rel)
        if edge not in seen:
            seen.add(edge)
            new_deps.append(edge)
    return Sentence(new_tokens, new_deps)


def normalize_tokens(doc: AnnotatedDocument) -> AnnotatedDocument:
    """Lowercase, merge entity spans and proper compounds, strip soft
    punctuation, and re-index.  Idempotent."""
    return AnnotatedDocument([_merge_sentence(s) for s in doc.sentences])


# ---------------------------------------------------------------------------
# event regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EventRegion:
    id: int
    sentence: int          # 0-based sentence position
    trigger: int           # token index within the sentence
    lemma: str
    copula: bool
    members: frozenset[int]


def _is_trigger(sent: Sentence, tok: Token) -> bool:
    if not tok.is_verb():
        return False
    if sent.has_parent_rel(tok.index, AUX_RELS):
        return False
    return True


def segment_event_regions(doc: AnnotatedDocument) -> list[EventRegion]:
    """One region per verbal trigger, numbered left to right and continuing
    across sentences.  Copular ``be`` triggers a region of its own so that
    questions over copulas can still bind an event variable."""
    regions = []
    next_id = 1
    for si, sent in enumerate(doc.sentences):
        triggers = [t.index for t in sent.tokens if _is_trigger(sent, t)]
        trigger_set = set(triggers)
        for idx in triggers:
            tok = sent.token(idx)
            copula = sent.has_parent_rel(idx, ("cop",))
            lemma = "be" if copula else tok.lemma
            members = {idx}
            frontier = [idx]
            while frontier:
                cur = frontier.pop()
                for e in sent.children(cur):
                    if e.dep in members or e.dep in trigger_set:
                        continue
                    members.add(e.dep)
                    frontier.append(e.dep)
            regions.append(EventRegion(next_id, si, idx, lemma, copula,
                                       frozenset(members)))
            next_id += 1
    return regions


def region_of_token(regions: list[EventRegion], sentence: int, index: int,
                    sent: Optional[Sentence] = None) -> Optional[EventRegion]:
    """Nearest enclosing region for a token, by trigger distance then id.

    Tokens outside every region (common around copulas, whose regions are
    minimal) fall back to the nearest region in the same sentence.
    """
    candidates = [r for r in regions if r.sentence == sentence and index in r.members]
    if not candidates:
        candidates = [r for r in regions if r.sentence == sentence]
    if not candidates:
        return None
    return min(candidates, key=lambda r: (abs(r.trigger - index), r.id))
