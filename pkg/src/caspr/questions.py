"""Question compilation into confidence-laddered conjunctive queries.

Questions arrive in the same parsed-sentence JSON shape as passages.
Analysis extracts four parameters: the question word, the question type,
the answer word, and the answer type.  Generation then renders the
question as conjunctive queries over the knowledge base's predicates,
binding the answer to a distinguished variable X<k>, and relaxation
derives progressively weaker query classes:

* classI   (certain)  - every constraint the question supports,
* classII  (likely)   - ground fact subgoals dropped,
* classIII (possible) - only subgoals carrying the answer variable,
  plus the base constraints,
* classIV  (guess)    - base constraints alone.

Each class holds a list of queries tried in order; the first one that
succeeds supplies the answer, and the class it came from supplies the
confidence word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .document import (
    SUBJECT_RELS,
    AnnotatedDocument,
    DocumentError,
    EventRegion,
    Sentence,
    load_document,
    normalize_tokens,
    segment_event_regions,
)
from .kb import _PROPERTY_EXCLUDED, _prep_term, term_for
from .logic import (
    ANON_NAME,
    Atom,
    Const,
    Literal,
    Term,
    Var,
    _BARE_CONST,
    parse_query,
    print_query,
)


# ---------------------------------------------------------------------------
# question analysis
# ---------------------------------------------------------------------------

WH_TAGS = ("WDT", "WP", "WP$", "WRB")

_TYPE_BY_WORD = {
    "what": "WHAT",
    "which": "WHICH",
    "where": "WHERE",
    "who": "WHO",
    "whom": "WHO",
    "whose": "WHO",
    "when": "WHEN",
}

_HOW_TYPES = {
    "many": "HOW_MANY",
    "much": "HOW_MUCH",
    "long": "HOW_LONG",
    "far": "HOW_FAR",
}

# answer types fixed by the question type alone
_ANSWER_TYPE = {
    "WHERE": "PLACE",
    "WHO": "PERSON",
    "WHEN": "TIME",
    "HOW_MANY": "NUMBER",
    "HOW_MUCH": "NUMBER",
    "HOW_LONG": "NUMBER",
    "HOW_FAR": "NUMBER",
    "UNKNOWN": "UNKNOWN",
}

# answer words that specialize WHAT/WHICH to a calendar part
_PART_WORDS = {
    "year": "YEAR",
    "month": "MONTH",
    "day": "DAY",
    "date": "TIME",
    "time": "TIME",
}

# relations climbed from the question word towards its governing noun
_CLIMB_RELS = {"det", "det:qmod", "amod", "advmod", "nummod",
               "nmod:poss", "mark", "case"}

# (trigger lemma, question type) pairs with a dedicated span predicate
SPECIAL_EXPANSIONS = {
    ("bear", "WHEN"): "_start_date",
    ("die", "WHEN"): "_end_date",
}


@dataclass(frozen=True)
class QuestionAnalysis:
    """The four understanding parameters plus the token indices they
    came from (indices refer to the normalized question sentence)."""

    question_word: Optional[str]
    question_type: str
    answer_word: Optional[str]
    answer_type: str
    wh_index: Optional[int] = None
    answer_index: Optional[int] = None


def _analyze_sentence(sent: Sentence) -> QuestionAnalysis:
    wh = next((t for t in sent.tokens if t.pos in WH_TAGS), None)

    if wh is None:
        # copula or modal question: keep the marker, type stays unknown
        word = None
        for tok in sent.tokens:
            if sent.has_parent_rel(tok.index, ("cop",)) or tok.pos == "MD":
                word = tok.lemma
                break
        return QuestionAnalysis(word, "UNKNOWN", None, "UNKNOWN")

    qtype = _TYPE_BY_WORD.get(wh.lemma, "UNKNOWN")
    if wh.lemma == "how":
        qtype = "UNKNOWN"
        for e in sent.parents(wh.index, "advmod"):
            qtype = _HOW_TYPES.get(sent.token(e.gov).lemma, "UNKNOWN")
            break
        if qtype == "UNKNOWN" and sent.has(wh.index + 1):
            qtype = _HOW_TYPES.get(sent.token(wh.index + 1).lemma, "UNKNOWN")

    answer_tok = None
    idx = wh.index
    for _ in range(3):
        step = [e for e in sent.parents(idx) if e.rel in _CLIMB_RELS]
        if not step:
            break
        idx = step[0].gov
        if sent.token(idx).is_noun():
            answer_tok = sent.token(idx)
            break

    answer_word = answer_tok.lemma if answer_tok else None
    if qtype in ("WHAT", "WHICH"):
        answer_type = _PART_WORDS.get(answer_word or "", "VARIABLE")
    else:
        answer_type = _ANSWER_TYPE.get(qtype, "UNKNOWN")

    return QuestionAnalysis(
        wh.lemma, qtype, answer_word, answer_type,
        wh_index=wh.index,
        answer_index=answer_tok.index if answer_tok else None)


def analyze_question(source) -> QuestionAnalysis:
    """Extract (question word, question type, answer word, answer type)
    from a parsed question.

    pre: the document holds at least one sentence; the first one is the
    question.
    """
    sent = _question_sentence(_as_document(source))
    return _analyze_sentence(sent)


# ---------------------------------------------------------------------------
# queries and ladders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Query:
    """One conjunctive query; ``answer_var`` names the variable whose
    binding is the answer."""

    literals: tuple[Literal, ...]
    answer_var: str
    confidence_class: str = "classI"
    variant: int = 0

    def render(self) -> str:
        return print_query(self.literals)


CLASS_LABELS = ("classI", "classII", "classIII", "classIV")


@dataclass
class QueryLadder:
    """The four query classes for one question, strongest first."""

    analysis: Optional[QuestionAnalysis]
    class_i: list[Query] = field(default_factory=list)
    class_ii: list[Query] = field(default_factory=list)
    class_iii: list[Query] = field(default_factory=list)
    class_iv: list[Query] = field(default_factory=list)

    def classes(self) -> list[tuple[str, list[Query]]]:
        return [("classI", self.class_i), ("classII", self.class_ii),
                ("classIII", self.class_iii), ("classIV", self.class_iv)]

    def render(self) -> str:
        lines = []
        for label, queries in self.classes():
            for q in queries:
                lines.append("%s: %s" % (label, print_query(q.literals)))
        return "\n".join(lines) + "\n" if lines else ""


def parse_ladder(text: str) -> list[tuple[str, tuple[Literal, ...]]]:
    """Read ladder lines of the form ``classN: ?- lit, lit.`` back into
    labeled literal tuples (inverse of QueryLadder.render)."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        label, _, rest = line.partition(":")
        out.append((label.strip(), parse_query(rest.strip())))
    return out


# ---------------------------------------------------------------------------
# constraint generation
# ---------------------------------------------------------------------------


def _lit(pred: str, *args: Term) -> Literal:
    return Literal(Atom(pred, tuple(args)))


def _as_document(source) -> AnnotatedDocument:
    doc = source if isinstance(source, AnnotatedDocument) else load_document(source)
    return normalize_tokens(doc)


def _question_sentence(norm: AnnotatedDocument) -> Sentence:
    if not norm.sentences:
        raise DocumentError("question has no sentences")
    return norm.sentences[0]


def _question_region(sent: Sentence,
                     regions: list[EventRegion]) -> Optional[EventRegion]:
    """The region whose trigger carries the question: a root non-copula
    trigger if any, else the first non-copula region, else the copula."""
    local = [r for r in regions if r.sentence == 0]
    if not local:
        return None
    roots = set(sent.roots())
    plain = [r for r in local if not r.copula]
    for r in plain:
        if r.trigger in roots:
            return r
    if plain:
        return plain[0]
    return local[0]


@dataclass
class _Slot:
    """Occupant of an event role: the term placed in the slot and the
    entity-linking subgoal that constrains it, if any."""

    term: Term
    similar: Optional[Literal] = None


def _role_slot(sent: Sentence, analysis: QuestionAnalysis,
               index: Optional[int], prefix: str, k: int) -> _Slot:
    if index is not None and index in (analysis.wh_index, analysis.answer_index):
        return _Slot(Var("X%d" % k))
    var = Var("%s%d" % (prefix, k))
    if index is None:
        return _Slot(var)
    entity = term_for(sent.token(index).lemma)
    return _Slot(var, _lit("_similar", entity, var))


def _region_roles(sent: Sentence,
                  region: EventRegion) -> tuple[Optional[int], Optional[int], str]:
    """(actor index, participant index, verb lemma) for a region.  For
    copula regions the subject of the predicate acts and the predicate
    word participates."""
    if region.copula:
        pred_idx = None
        for e in sent.deps:
            if e.rel == "cop" and e.dep == region.trigger:
                pred_idx = e.gov
                break
        subj = None
        if pred_idx is not None:
            for e in sent.children(pred_idx):
                if e.rel in SUBJECT_RELS:
                    subj = e.dep
                    break
        return subj, pred_idx, region.lemma
    actor = None
    part = None
    for e in sent.children(region.trigger):
        if e.rel in SUBJECT_RELS and actor is None:
            actor = e.dep
        elif e.rel == "dobj" and part is None:
            part = e.dep
    return actor, part, region.lemma


def _variant_groups(sent: Sentence, analysis: QuestionAnalysis,
                    region: EventRegion, k: int) -> list[list[Literal]]:
    """The alternative event shapes for one trigger: plain event, agent
    displaced into a _by property, actor displaced into a clause
    relation; copula questions lead with a class-membership variant."""
    actor_idx, part_idx, lemma = _region_roles(sent, region)
    a = _role_slot(sent, analysis, actor_idx, "S", k)
    p = _role_slot(sent, analysis, part_idx, "O", k)
    sims = [s.similar for s in (a, p) if s.similar is not None]

    E = Var("E%d" % k)
    anon = Var(ANON_NAME)
    verb = Const(lemma)
    groups = [
        [_lit("event", E, verb, a.term, p.term), *sims],
        [_lit("event", E, verb, anon, p.term),
         _lit("_property", E, verb, Const("_by"), a.term), *sims],
        [_lit("event", E, verb, anon, anon),
         _lit("_relation", a.term, E, Const("_clause")), *sims],
    ]
    if region.copula:
        groups.insert(0, [_lit("_is", a.term, p.term), *sims])
    return groups


def gen_event_query_variants(analysis: QuestionAnalysis,
                             source) -> list[list[Literal]]:
    """Event-shaped subgoal alternatives for the question's trigger
    verb.  Empty when the question has no event region."""
    norm = _as_document(source)
    sent = _question_sentence(norm)
    region = _question_region(sent, segment_event_regions(norm))
    if region is None:
        return []
    return _variant_groups(sent, analysis, region, region.id)


def _answer_term(sent: Sentence, analysis: QuestionAnalysis,
                 index: int, k: int) -> Term:
    if index in (analysis.wh_index, analysis.answer_index):
        return Var("X%d" % k)
    return term_for(sent.token(index).lemma)


def _property_subgoals(sent: Sentence, analysis: QuestionAnalysis,
                       region: Optional[EventRegion],
                       k: int) -> list[Literal]:
    E = Var("E%d" % k)
    out: list[Literal] = []
    seen: set[str] = set()

    def push(lit: Literal) -> None:
        if str(lit) not in seen:
            seen.add(str(lit))
            out.append(lit)

    if region is not None:
        verb = Const(region.lemma)
        for e in sent.children_prefixed(region.trigger, "nmod"):
            if e.rel in _PROPERTY_EXCLUDED:
                continue
            push(_lit("_property", E, verb, _prep_term(sent, e),
                      _answer_term(sent, analysis, e.dep, k)))

    for tok in sent.tokens:
        if not tok.is_noun():
            continue
        if region is not None and tok.index == region.trigger:
            continue
        for e in sent.children_prefixed(tok.index, "nmod"):
            if e.rel in _PROPERTY_EXCLUDED:
                continue
            push(_lit("_property", E, term_for(tok.lemma),
                      _prep_term(sent, e),
                      _answer_term(sent, analysis, e.dep, k)))
    return out


# prepositions assumed when the question gives none
_AUTO_PREP = {"TIME": "on", "PLACE": "in"}


def _auto_link(analysis: QuestionAnalysis, region: Optional[EventRegion],
               subgoals: list[Literal], k: int) -> list[Literal]:
    """When a WHEN/WHERE question produced no property touching the
    answer variable, tie the answer to the trigger with the default
    preposition for the answer type."""
    prep = _AUTO_PREP.get(analysis.answer_type)
    if prep is None or region is None:
        return subgoals
    x_name = "X%d" % k
    if any(_mentions_var(lit, x_name) for lit in subgoals):
        return subgoals
    extra = _lit("_property", Var("E%d" % k), Const(region.lemma),
                 Const(prep), Var(x_name))
    return subgoals + [extra]


def gen_property_query_subgoals(analysis: QuestionAnalysis,
                                source) -> list[Literal]:
    """_property subgoals from the question's prepositional structure,
    with the answer word replaced by the answer variable."""
    norm = _as_document(source)
    sent = _question_sentence(norm)
    region = _question_region(sent, segment_event_regions(norm))
    k = region.id if region is not None else 1
    subgoals = _property_subgoals(sent, analysis, region, k)
    return _auto_link(analysis, region, subgoals, k)


def _entity_subgoals(sent: Sentence) -> list[Literal]:
    out: list[Literal] = []
    seen: set[str] = set()
    for tok in sent.tokens:
        if tok.ner == "ORGANIZATION" and tok.lemma not in seen:
            seen.add(tok.lemma)
            out.append(_lit("organization", Const(tok.lemma)))
    return out


def gen_base_constraints(analysis: QuestionAnalysis,
                         k: int = 1) -> list[list[Literal]]:
    """Answer-type constraints as alternative subgoal groups.

    Most types yield one group; PLACE and PERSON yield a plain-fact
    group and a sense-tagged group tried in that order.  A usable answer
    word yields the word itself as predicate: sense-tagged (arity 2)
    for resolved WHAT/WHICH questions, plain (arity 1) otherwise.  With
    nothing to constrain the list holds one empty group.
    """
    X = Var("X%d" % k)
    T = Var("T%d" % k)
    at = analysis.answer_type
    if at == "TIME":
        return [[_lit("time", X)]]
    if at in ("DAY", "MONTH", "YEAR"):
        return [[_lit(at.lower(), T, X), _lit("time", T)]]
    if at == "PLACE":
        return [[_lit("location", X)],
                [_lit("location", X, Const("noun_location"))]]
    if at == "PERSON":
        return [[_lit("person", X)],
                [_lit("person", X, Const("noun_person"))]]
    if at == "NUMBER":
        return [[_lit("number", X)]]
    word = analysis.answer_word
    if word and _BARE_CONST.match(word):
        if at == "VARIABLE":
            return [[_lit(word, X, Var(ANON_NAME))]]
        return [[_lit(word, X)]]
    return [[]]


def _special_groups(analysis: QuestionAnalysis,
                    region: Optional[EventRegion],
                    actor: _Slot,
                    base_groups: list[list[Literal]],
                    k: int,
                    table=None) -> list[list[Literal]]:
    """Extra whole-query alternatives from the span predicates, for
    verbs whose answer often comes from a lifespan span rather than an
    event (born/when, died/when)."""
    if region is None or actor.similar is None:
        return []
    table = SPECIAL_EXPANSIONS if table is None else table
    pred = table.get((region.lemma, analysis.question_type))
    if pred is None:
        return []
    entity = actor.similar.atom.args[0]
    S = Var("S%d" % k)
    X = Var("X%d" % k)
    groups = []
    for base in base_groups:
        groups.append([_lit(pred, S, X), _lit("_similar", entity, S), *base])
    return groups


def combine_constraints(variant_groups: Sequence[Sequence[Literal]],
                        property_subgoals: Sequence[Literal],
                        base_groups: Sequence[Sequence[Literal]],
                        entity_subgoals: Sequence[Literal] = (),
                        special_groups: Sequence[Sequence[Literal]] = (),
                        k: int = 1) -> list[Query]:
    """Assemble the strongest (classI) query list: every event variant
    crossed with every base alternative, then the special expansions."""
    bodies: list[list[Literal]] = []
    for base in (base_groups or [[]]):
        if variant_groups:
            for vg in variant_groups:
                bodies.append(list(vg) + list(property_subgoals)
                              + list(entity_subgoals) + list(base))
        else:
            lits = (list(property_subgoals) + list(entity_subgoals)
                    + list(base))
            if lits:
                bodies.append(lits)
    bodies.extend(list(g) for g in special_groups)

    queries: list[Query] = []
    seen: set[tuple[str, ...]] = set()
    for body in bodies:
        if not body:
            continue
        key = tuple(str(l) for l in body)
        if key in seen:
            continue
        seen.add(key)
        queries.append(Query(tuple(body), "X%d" % k, "classI", len(queries)))
    return queries


# ---------------------------------------------------------------------------
# relaxation
# ---------------------------------------------------------------------------


def _term_vars(term: Term) -> list[str]:
    return [term.name] if isinstance(term, Var) else []


def _has_var(lit: Literal) -> bool:
    return any(isinstance(a, Var) for a in lit.atom.args)


def _mentions_var(lit: Literal, name: str) -> bool:
    return any(name in _term_vars(a) for a in lit.atom.args)


def _dedupe_bodies(bodies: Iterable[Sequence[Literal]],
                   answer_var: str, label: str) -> list[Query]:
    out: list[Query] = []
    seen: set[tuple[str, ...]] = set()
    for body in bodies:
        if not body:
            continue
        key = tuple(str(l) for l in body)
        if key in seen:
            continue
        seen.add(key)
        out.append(Query(tuple(body), answer_var, label, len(out)))
    return out


def build_relaxation_ladder(class_i: Sequence[Query],
                            base_groups: Sequence[Sequence[Literal]] = (),
                            k: int = 1,
                            analysis: Optional[QuestionAnalysis] = None) -> QueryLadder:
    """Weaken the strongest queries into the four-class ladder.

    classII drops subgoals with no variables (already-ground checks).
    classIII keeps only subgoals carrying the answer variable plus the
    base constraints, deduplicated across variants.  classIV is the base
    constraints alone.  Every weaker query's subgoals are a subset of
    some stronger query's.
    """
    x_name = "X%d" % k
    base_strs = {str(l) for g in base_groups for l in g}

    class_ii = _dedupe_bodies(
        ([l for l in q.literals if _has_var(l)] for q in class_i),
        x_name, "classII")
    class_iii = _dedupe_bodies(
        ([l for l in q.literals
          if _mentions_var(l, x_name) or str(l) in base_strs]
         for q in class_i),
        x_name, "classIII")
    class_iii = [q for q in class_iii
                 if any(_mentions_var(l, x_name) for l in q.literals)]
    class_iv = _dedupe_bodies(base_groups, x_name, "classIV")

    return QueryLadder(analysis, list(class_i), class_ii, class_iii, class_iv)


# ---------------------------------------------------------------------------
# front door
# ---------------------------------------------------------------------------


def compile_question(source, special_map=None) -> QueryLadder:
    """Parse-to-ladder pipeline for one question document.

    pre: the first sentence is the question.
    post: classIV subgoals appear in classIII, classIII queries derive
    from classI, and every query binds the same answer variable.
    """
    norm = _as_document(source)
    sent = _question_sentence(norm)
    analysis = _analyze_sentence(sent)
    region = _question_region(sent, segment_event_regions(norm))
    k = region.id if region is not None else 1

    base_groups = gen_base_constraints(analysis, k)
    variants: list[list[Literal]] = []
    actor = _Slot(Var("S%d" % k))
    if region is not None:
        actor_idx, _, _ = _region_roles(sent, region)
        actor = _role_slot(sent, analysis, actor_idx, "S", k)
        variants = _variant_groups(sent, analysis, region, k)

    props = _auto_link(analysis, region,
                       _property_subgoals(sent, analysis, region, k), k)
    entities = _entity_subgoals(sent)
    specials = _special_groups(analysis, region, actor, base_groups, k,
                               table=special_map)

    class_i = combine_constraints(variants, props, base_groups,
                                  entities, specials, k)
    return build_relaxation_ladder(class_i, base_groups, k, analysis)
