"""Ground-fact extraction from normalized documents.

Compilation walks each sentence's event regions and dependency edges and
emits Neo-Davidsonian facts:

* ``event(id, lemma, actor, participant)`` frames, one region per verbal
  trigger, with duplicate frames for modified role fillers,
* ``_property(id, head, prep, value)`` for prepositional attachments of
  the trigger verb or of nouns, claimed by the nearest region,
* ``_mod``, ``_possess``, ``_is`` and ``_relation`` structural facts,
* named-entity class facts (``person``, ``location``, ``time``, ...),
* surface-pattern facts: date parts, parenthesized time spans,
  appositive class membership, bracketed abbreviations, and numbers.

Role slots without a filler carry the constant ``null`` so every fact
stays ground.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .document import (
    _BRACKET_CLOSE,
    _BRACKET_OPEN,
    _DASHES,
    AnnotatedDocument,
    EventRegion,
    Sentence,
    SUBJECT_RELS,
    Token,
    load_document,
    normalize_tokens,
    region_of_token,
    segment_event_regions,
)
from .logic import (
    _BARE_CONST,
    Atom,
    Const,
    Num,
    Program,
    Rule,
    Term,
    check_consistency,
    check_safety,
    sentence_prov,
)

NULL = Const("null")

_CLAUSE = Const("_clause")
_CLCOMPLEMENT = Const("_clcomplement")
_CONJ = Const("_conj")

# nmod subtypes that other generators own: possessives become _possess
# facts and exemplar constructions become _is facts.
_PROPERTY_EXCLUDED = {"nmod:poss", "nmod:such_as", "nmod:like"}

_EXEMPLAR_RELS = {"nmod:such_as", "nmod:like"}

_MODIFIER_RELS = {"amod", "advmod", "nummod"}

# amod/nummod trigger a duplicate frame; compounds join the chain.
_CHAIN_TRIGGER_RELS = {"amod", "nummod"}

_ENTITY_PREDS = {
    "PERSON": "person",
    "LOCATION": "location",
    "GPE": "location",
    "ORGANIZATION": "organization",
    "DATE": "time",
    "TIME": "time",
    "MONEY": "money",
    "PERCENT": "percent",
}

_TIME_TAGS = {"DATE", "TIME"}

_MONTHS = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
}

_NUMBER_WORDS = {"hundred", "thousand", "million", "billion"}


def term_for(text: str) -> Term:
    """Digit strings become numbers; everything else a constant."""
    if text.isdigit():
        return Num(int(text))
    return Const(text)


def _fact(pred: str, *args: Term) -> Rule:
    return Rule(Atom(pred, tuple(args)), ())


@dataclass
class FactBatch:
    """Ground facts from one generator, tagged with source sentences."""

    facts: list[Rule] = field(default_factory=list)
    source_sentence: int = 0  # 1-based; 0 when the batch spans sentences
    sentences: list[int] = field(default_factory=list)  # per-fact, parallel

    def add(self, fact: Rule, sentence: Optional[int] = None) -> None:
        self.facts.append(fact)
        self.sentences.append(self.source_sentence if sentence is None else sentence)

    def tagged(self) -> Iterator[tuple[Rule, int]]:
        return zip(self.facts, self.sentences)


# ---------------------------------------------------------------------------
# role and modifier helpers
# ---------------------------------------------------------------------------


def _resolve_role(sent: Sentence, index: int) -> int:
    """Common nouns with a named apposition stand for that instance."""
    tok = sent.token(index)
    if not tok.is_entity():
        for e in sent.children(index, "appos"):
            if sent.token(e.dep).is_entity():
                return e.dep
    return index


def _modifier_chain(sent: Sentence, index: int) -> Optional[str]:
    """Surface-ordered compound constant for a modified head, or None."""
    trigger_mods = [e.dep for e in sent.children(index)
                    if e.rel in _CHAIN_TRIGGER_RELS]
    if not trigger_mods:
        return None
    parts = set(trigger_mods) | {index}
    parts.update(e.dep for e in sent.children(index, "compound"))
    return "_".join(sent.token(i).lemma for i in sorted(parts))


def _forms(sent: Sentence, index: int) -> list[str]:
    """Bare lemma plus the modified compound, when modifiers exist."""
    bare = sent.token(index).lemma
    chain = _modifier_chain(sent, index)
    if chain and chain != bare:
        return [bare, chain]
    return [bare]


def _role_term(sent: Sentence, index: Optional[int]) -> Term:
    if index is None:
        return NULL
    return term_for(sent.token(index).lemma)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_event_facts(region: EventRegion, sent: Sentence) -> FactBatch:
    """Event frames for one region: the cross product of actors and
    participants, plus one duplicate frame per modified role."""
    batch = FactBatch(source_sentence=region.sentence + 1)
    if region.copula:
        return batch

    actors = [_resolve_role(sent, e.dep)
              for e in sent.children(region.trigger)
              if e.rel in SUBJECT_RELS]
    participants = [_resolve_role(sent, e.dep)
                    for e in sent.children(region.trigger, "dobj")]
    a_slots: list[Optional[int]] = list(actors) or [None]
    p_slots: list[Optional[int]] = list(participants) or [None]

    eid = Num(region.id)
    lemma = Const(region.lemma)
    for a in a_slots:
        for p in p_slots:
            batch.add(_fact("event", eid, lemma,
                            _role_term(sent, a), _role_term(sent, p)))
    for a in a_slots:
        chain = None if a is None else _modifier_chain(sent, a)
        if chain:
            for p in p_slots:
                batch.add(_fact("event", eid, lemma,
                                Const(chain), _role_term(sent, p)))
    for p in p_slots:
        chain = None if p is None else _modifier_chain(sent, p)
        if chain:
            for a in a_slots:
                batch.add(_fact("event", eid, lemma,
                                _role_term(sent, a), Const(chain)))
    return batch


def _prep_term(sent: Sentence, edge) -> Term:
    # passive agents get a reserved marker; other subtypes name the
    # preposition directly, and bare nmod falls back to the case token
    if edge.rel == "nmod:agent":
        return Const("_by")
    if ":" in edge.rel:
        return Const(edge.rel.split(":", 1)[1])
    for c in sent.children(edge.dep, "case"):
        return Const(sent.token(c.dep).lemma)
    return NULL


def gen_property_facts(region: EventRegion, sent: Sentence,
                       regions: Optional[list[EventRegion]] = None) -> FactBatch:
    """Prepositional attachments of the trigger and of nouns whose
    nearest region this one is."""
    batch = FactBatch(source_sentence=region.sentence + 1)
    eid = Num(region.id)

    for e in sent.children_prefixed(region.trigger, "nmod"):
        if e.rel in _PROPERTY_EXCLUDED:
            continue
        batch.add(_fact("_property", eid, Const(region.lemma),
                        _prep_term(sent, e), _role_term(sent, e.dep)))

    for tok in sent.tokens:
        if not tok.is_noun() or tok.index == region.trigger:
            continue
        edges = [e for e in sent.children_prefixed(tok.index, "nmod")
                 if e.rel not in _PROPERTY_EXCLUDED]
        if not edges:
            continue
        if regions is not None:
            home = region_of_token(regions, region.sentence, tok.index, sent)
            if home is None or home.id != region.id:
                continue
        elif tok.index not in region.members:
            continue
        for e in edges:
            batch.add(_fact("_property", eid, term_for(tok.lemma),
                            _prep_term(sent, e), _role_term(sent, e.dep)))
    return batch


def gen_modifier_facts(sent: Sentence, sent_no: int = 1) -> FactBatch:
    """Adjective, adverb, and numeral modifiers as _mod(head, modifier)."""
    batch = FactBatch(source_sentence=sent_no)
    edges = sorted((e for e in sent.deps if e.rel in _MODIFIER_RELS and e.gov != 0),
                   key=lambda e: (e.gov, e.dep))
    for e in edges:
        batch.add(_fact("_mod", term_for(sent.token(e.gov).lemma),
                        term_for(sent.token(e.dep).lemma)))
    return batch


def gen_possess_facts(sent: Sentence, sent_no: int = 1) -> FactBatch:
    """Possessives as _possess(owner, owned), carried across appositions
    of the owned noun."""
    batch = FactBatch(source_sentence=sent_no)
    edges = sorted((e for e in sent.deps if e.rel == "nmod:poss" and e.gov != 0),
                   key=lambda e: (e.gov, e.dep))
    for e in edges:
        owner = term_for(sent.token(e.dep).lemma)
        batch.add(_fact("_possess", owner, term_for(sent.token(e.gov).lemma)))
        for ap in sent.children(e.gov, "appos"):
            batch.add(_fact("_possess", owner, term_for(sent.token(ap.dep).lemma)))
    return batch


def gen_instance_facts(sent: Sentence, sent_no: int = 1) -> FactBatch:
    """Class membership from copulas (subject is complement, bare and
    modified, including conjoined complements) and from exemplar
    constructions (examples belong to the modified category)."""
    batch = FactBatch(source_sentence=sent_no)

    for cop in sorted((e for e in sent.deps if e.rel == "cop"),
                      key=lambda e: (e.gov, e.dep)):
        pred_idx = cop.gov
        subjects = [e.dep for e in sent.children(pred_idx)
                    if e.rel in SUBJECT_RELS]
        if not subjects:
            continue
        complements = [pred_idx] + [e.dep for e in sent.children(pred_idx, "conj")]
        for s in subjects:
            s_term = term_for(sent.token(s).lemma)
            for c in complements:
                for form in _forms(sent, c):
                    batch.add(_fact("_is", s_term, term_for(form)))

    for e in sorted((e for e in sent.deps if e.rel in _EXEMPLAR_RELS),
                    key=lambda e: (e.gov, e.dep)):
        category = _modifier_chain(sent, e.gov) or sent.token(e.gov).lemma
        for form in _forms(sent, e.dep):
            batch.add(_fact("_is", term_for(form), term_for(category)))
    return batch


def gen_relation_facts(doc: AnnotatedDocument,
                       regions: Optional[list[EventRegion]] = None) -> FactBatch:
    """Inter-clause links: adverbial clauses and noun-attached clauses as
    _clause, clausal complements as _clcomplement, and conjunctions as
    _conj (region ids for verbs, constants for nouns)."""
    if regions is None:
        regions = segment_event_regions(doc)
    trig: dict[tuple[int, int], EventRegion] = {
        (r.sentence, r.trigger): r for r in regions
    }
    batch = FactBatch()
    for si, sent in enumerate(doc.sentences):
        sno = si + 1
        for e in sent.deps:
            if e.gov == 0:
                continue
            g = trig.get((si, e.gov))
            d = trig.get((si, e.dep))
            if e.rel == "advcl" or e.rel.startswith("advcl:"):
                if g and d:
                    batch.add(_fact("_relation", Num(g.id), Num(d.id), _CLAUSE), sno)
            elif e.rel == "acl" or e.rel.startswith("acl:"):
                gov_tok = sent.token(e.gov)
                if d and not gov_tok.is_verb():
                    batch.add(_fact("_relation", term_for(gov_tok.lemma),
                                    Num(d.id), _CLAUSE), sno)
            elif e.rel in ("ccomp", "xcomp"):
                if g and d:
                    batch.add(_fact("_relation", Num(g.id), Num(d.id),
                                    _CLCOMPLEMENT), sno)
            elif e.rel == "conj" or e.rel.startswith("conj:"):
                if g and d:
                    batch.add(_fact("_relation", Num(g.id), Num(d.id), _CONJ), sno)
                elif g is None and d is None:
                    gt, dt = sent.token(e.gov), sent.token(e.dep)
                    if gt.is_noun() and dt.is_noun():
                        batch.add(_fact("_relation", term_for(gt.lemma),
                                        term_for(dt.lemma), _CONJ), sno)
    return batch


def gen_entity_facts(doc: AnnotatedDocument) -> FactBatch:
    """Named-entity class facts; date and clock tags both map to time."""
    batch = FactBatch()
    for si, sent in enumerate(doc.sentences):
        for tok in sent.tokens:
            pred = _ENTITY_PREDS.get(tok.ner)
            if pred:
                batch.add(_fact(pred, term_for(tok.lemma)), si + 1)
    return batch


# -- surface patterns -------------------------------------------------------


def _is_dash(tok: Token) -> bool:
    word = tok.word
    return bool(word) and all(c in _DASHES or c == "-" for c in word)


def _is_date_like(tok: Token) -> bool:
    return tok.ner in _TIME_TAGS or tok.word.isdigit()


def _digit_word(word: str) -> bool:
    return bool(word) and word[0].isdigit() and word.replace(",", "").isdigit()


def _date_part_facts(lemma: str, sno: int, batch: FactBatch) -> None:
    """day/month/year parts for the three recognized date shapes."""
    t = term_for(lemma)
    if lemma.isdigit() and len(lemma) == 4:
        batch.add(_fact("year", t, Num(int(lemma))), sno)
        return
    parts = lemma.split("_")
    if len(parts) != 3 or not (parts[2].isdigit() and len(parts[2]) == 4):
        return
    if parts[0].isdigit() and parts[1] in _MONTHS:
        day, month = parts[0], parts[1]
    elif parts[0] in _MONTHS and parts[1].isdigit():
        day, month = parts[1], parts[0]
    else:
        return
    batch.add(_fact("day", t, Num(int(day))), sno)
    batch.add(_fact("month", t, Const(month)), sno)
    batch.add(_fact("year", t, Num(int(parts[2]))), sno)


_ALLCAPS = re.compile(r"\A[A-Z][A-Z0-9]+\Z")


def _is_abbrev_token(tok: Token) -> bool:
    return bool(_ALLCAPS.match(tok.orig))


def gen_special_facts(doc: AnnotatedDocument) -> FactBatch:
    """Surface patterns: date parts, parenthesized time spans, appositive
    class facts, abbreviations, and number mentions."""
    batch = FactBatch()
    for si, sent in enumerate(doc.sentences):
        sno = si + 1
        toks = sent.tokens

        for tok in toks:
            if tok.ner in _TIME_TAGS:
                _date_part_facts(tok.lemma, sno, batch)

        # entity ( date - date ) spans
        for i in range(len(toks) - 5):
            head, op, start, dash, end, close = toks[i:i + 6]
            if (op.word in _BRACKET_OPEN and close.word in _BRACKET_CLOSE
                    and _is_dash(dash)
                    and _is_date_like(start) and _is_date_like(end)
                    and (head.is_entity() or head.is_noun())):
                h = term_for(head.lemma)
                for pred, tok in (("_start_date", start), ("_end_date", end)):
                    batch.add(_fact(pred, h, term_for(tok.lemma)), sno)
                for tok in (start, end):
                    batch.add(_fact("time", term_for(tok.lemma)), sno)
                    if tok.lemma.isdigit() and len(tok.lemma) == 4:
                        value = Num(int(tok.lemma))
                        batch.add(_fact("year", value, value), sno)

        # appositions: class facts for common/named pairs, abbreviations
        # for named/named pairs
        for e in sorted((e for e in sent.deps if e.rel == "appos" and e.gov != 0),
                        key=lambda e: (e.gov, e.dep)):
            gov, dep = sent.token(e.gov), sent.token(e.dep)
            gov_common = gov.is_noun() and not gov.is_entity() \
                and not gov.pos.startswith("NNP")
            dep_common = dep.is_noun() and not dep.is_entity() \
                and not dep.pos.startswith("NNP")
            if gov_common != dep_common:
                concept, instance = (gov, dep) if gov_common else (dep, gov)
                if _BARE_CONST.match(concept.lemma):
                    batch.add(_fact(concept.lemma, term_for(instance.lemma)), sno)
            elif gov.is_entity() and dep.is_entity():
                short, long = sorted((gov.lemma, dep.lemma), key=len)
                if len(short) < len(long):
                    batch.add(_fact("_abbreviation", Const(short), Const(long)), sno)

        # concept ( ALLCAPS ) bracket abbreviations
        for j in range(1, len(toks) - 2):
            if toks[j].word not in _BRACKET_OPEN:
                continue
            if toks[j + 2].word not in _BRACKET_CLOSE:
                continue
            if not _is_abbrev_token(toks[j + 1]):
                continue
            x = toks[j - 1]
            if x.pos == "POS" and j >= 2:
                x = toks[j - 2]
            if x.is_entity() or x.is_noun():
                batch.add(_fact("_abbreviation", Const(toks[j + 1].lemma),
                                Const(x.lemma)), sno)

        # standalone numbers: digit strings and scale words
        for tok in toks:
            if tok.ner in _TIME_TAGS:
                continue
            if _digit_word(tok.word):
                batch.add(_fact("number", term_for(tok.lemma)), sno)
            elif tok.lemma in _NUMBER_WORDS:
                batch.add(_fact("number", Const(tok.lemma)), sno)
    return batch


# ---------------------------------------------------------------------------
# document compilation
# ---------------------------------------------------------------------------


def compile_document(source) -> Program:
    """Compile a document (dict, path, file object, or loaded document)
    into a deduplicated, per-sentence-attributed fact program."""
    if isinstance(source, AnnotatedDocument):
        doc = source
    else:
        doc = load_document(source)
    norm = normalize_tokens(doc)
    regions = segment_event_regions(norm)

    batches: list[FactBatch] = []
    for si, sent in enumerate(norm.sentences):
        sno = si + 1
        for region in (r for r in regions if r.sentence == si):
            batches.append(gen_event_facts(region, sent))
            batches.append(gen_property_facts(region, sent, regions))
        batches.append(gen_modifier_facts(sent, sno))
        batches.append(gen_possess_facts(sent, sno))
        batches.append(gen_instance_facts(sent, sno))
    batches.append(gen_relation_facts(norm, regions))
    batches.append(gen_entity_facts(norm))
    batches.append(gen_special_facts(norm))

    program = Program()
    for batch in batches:
        for fact, sno in batch.tagged():
            program.add_unique(fact, sentence_prov(sno))
    check_safety(program)
    check_consistency(program)
    return program
