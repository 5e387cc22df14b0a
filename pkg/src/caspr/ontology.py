"""Commonsense rule generation.

From a lexicon of concepts (ordered senses, hypernym chains, gloss
keywords) this module derives:

- hypernym transfer rules: each chain link lifts an instance one level
  up unless an abnormality predicate blocks it,
- word-sense characteristic rules: a sense holds when contextual
  characteristics support it,
- word-sense preference rules: a ladder that defaults to the most used
  sense while letting explicit denials push selection down the list,
- the fixed similarity closure over abbreviations and class membership,
- manually curated rules imported from plain program text.

``build_ontology`` ties these together for one compiled knowledge base:
it finds which lexicon concepts the text actually uses, emits their rule
sets, bridges instances to the concept guards, and derives the
characteristics facts from the surrounding text evidence.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .logic import (
    Atom,
    CasprError,
    Const,
    Literal,
    PROV_MANUAL,
    PROV_ONTOLOGY,
    Program,
    Rule,
    Var,
    check_safety,
    fact,
    parse_program,
    stratification_check,
)


class OntologyError(CasprError):
    """Lexicon schema violation or rule-generation misuse."""


# ---------------------------------------------------------------------------
# lexicon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sense:
    sense_id: str
    hypernyms: tuple[str, ...] = ()
    gloss_keywords: tuple[str, ...] = ()


@dataclass
class Lexicon:
    entries: dict[str, tuple[Sense, ...]] = field(default_factory=dict)

    def senses(self, concept: str) -> tuple[Sense, ...]:
        return self.entries.get(concept, ())

    def __contains__(self, concept: str) -> bool:
        return concept in self.entries


def _string_list(value, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or any(not isinstance(v, str) or not v
                                          for v in value):
        raise OntologyError("%s: expected a list of non-empty strings" % where)
    return tuple(value)


def load_lexicon(source) -> Lexicon:
    """Read a lexicon from a path, an open file, or a parsed dict.

    Layout: {concept: [{"sense": tag, "hypernyms": [...],
    "gloss_keywords": [...]}, ...], ...}.  Senses are ordered most used
    first; hypernym chains must not revisit a lemma.
    """
    if isinstance(source, (dict, list)):
        data = source
    elif hasattr(source, "read"):
        data = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as handle:
            data = json.load(handle)

    if not isinstance(data, dict):
        raise OntologyError("lexicon: expected an object at the top level")
    entries: dict[str, tuple[Sense, ...]] = {}
    for concept, raw_senses in data.items():
        where = "lexicon entry '%s'" % concept
        if not isinstance(concept, str) or not concept:
            raise OntologyError("lexicon: concept keys must be non-empty strings")
        if not isinstance(raw_senses, list) or not raw_senses:
            raise OntologyError("%s: expected a non-empty list of senses" % where)
        senses = []
        seen_ids = set()
        for i, raw in enumerate(raw_senses):
            swhere = "%s.senses[%d]" % (where, i)
            if not isinstance(raw, dict):
                raise OntologyError("%s: expected an object" % swhere)
            unknown = set(raw) - {"sense", "hypernyms", "gloss_keywords"}
            if unknown:
                raise OntologyError(
                    "%s: unknown keys %s" % (swhere, sorted(unknown)))
            sense_id = raw.get("sense")
            if not isinstance(sense_id, str) or not sense_id:
                raise OntologyError("%s.sense: expected a non-empty string" % swhere)
            if sense_id in seen_ids:
                raise OntologyError(
                    "%s: duplicate sense tag '%s'" % (where, sense_id))
            seen_ids.add(sense_id)
            chain = _string_list(raw.get("hypernyms", []),
                                 swhere + ".hypernyms")
            keywords = _string_list(raw.get("gloss_keywords", []),
                                    swhere + ".gloss_keywords")
            walked = [concept]
            for lemma in chain:
                if lemma in walked:
                    raise OntologyError(
                        "%s: hypernym cycle through '%s'" % (swhere, lemma))
                walked.append(lemma)
            senses.append(Sense(sense_id, chain, keywords))
        entries[concept] = tuple(senses)
    return Lexicon(entries)


# ---------------------------------------------------------------------------
# rule templates
# ---------------------------------------------------------------------------

_X = Var("X")


def _sense_ids(senses: Sequence[Union[Sense, str]]) -> list[str]:
    return [s.sense_id if isinstance(s, Sense) else s for s in senses]


def _sense_atom(concept: str, sense_id: str, neg: bool = False) -> Atom:
    return Atom(concept, (_X, Const(sense_id)), neg=neg)


def gen_sense_characteristic_rules(concept: str,
                                   senses: Sequence[Union[Sense, str]]
                                   ) -> list[Rule]:
    """One rule per sense, most used first:
    c(X, s) :- c(X), characteristics(s, X), not -c(X, s)."""
    rules = []
    for sense_id in _sense_ids(senses):
        rules.append(Rule(
            _sense_atom(concept, sense_id),
            (
                Literal(Atom(concept, (_X,))),
                Literal(Atom("characteristics", (Const(sense_id), _X))),
                Literal(_sense_atom(concept, sense_id, neg=True), naf=True),
            )))
    return rules


def gen_sense_preference_rules(concept: str,
                               senses: Sequence[Union[Sense, str]]
                               ) -> list[Rule]:
    """The elimination ladder: sense p applies when p's denial is absent,
    every earlier sense is explicitly denied, and no later sense is
    derivable."""
    ids = _sense_ids(senses)
    if not ids:
        raise OntologyError(
            "concept '%s' has no senses to build a preference ladder" % concept)
    rules = []
    for p, sense_id in enumerate(ids):
        body = [
            Literal(Atom(concept, (_X,))),
            Literal(_sense_atom(concept, sense_id, neg=True), naf=True),
        ]
        for earlier in ids[:p]:
            body.append(Literal(_sense_atom(concept, earlier, neg=True)))
        for later in ids[p + 1:]:
            body.append(Literal(_sense_atom(concept, later), naf=True))
        rules.append(Rule(_sense_atom(concept, sense_id), tuple(body)))
    return rules


def gen_hypernym_rules(lex: Lexicon, concept: str, sense: Sense) -> list[Rule]:
    """One defeasible transfer rule per chain link, all tagged with the
    sense that activated the chain:
    parent(X, s) :- child(X, s), not ab_parent(X)."""
    if sense not in lex.senses(concept):
        raise OntologyError(
            "sense '%s' does not belong to concept '%s'"
            % (sense.sense_id, concept))
    tag = Const(sense.sense_id)
    rules = []
    chain = [concept] + list(sense.hypernyms)
    for child, parent in zip(chain, chain[1:]):
        rules.append(Rule(
            Atom(parent, (_X, tag)),
            (
                Literal(Atom(child, (_X, tag))),
                Literal(Atom("ab_" + parent, (_X,)), naf=True),
            )))
    return rules


@dataclass
class SenseRuleSet:
    concept: str
    senses: tuple[str, ...]
    characteristic_rules: list[Rule]
    preference_rules: list[Rule]
    hypernym_rules: list[Rule]

    def all_rules(self) -> list[Rule]:
        return (self.characteristic_rules + self.preference_rules
                + self.hypernym_rules)


def sense_rule_set(lex: Lexicon, concept: str) -> SenseRuleSet:
    senses = lex.senses(concept)
    hyper: list[Rule] = []
    for sense in senses:
        hyper.extend(gen_hypernym_rules(lex, concept, sense))
    return SenseRuleSet(
        concept=concept,
        senses=tuple(_sense_ids(senses)),
        characteristic_rules=gen_sense_characteristic_rules(concept, senses),
        preference_rules=gen_sense_preference_rules(concept, senses),
        hypernym_rules=hyper,
    )


# ---------------------------------------------------------------------------
# similarity
# ---------------------------------------------------------------------------

_SIMILAR_RULES = """
_similar(X, Y) :- _abbreviation(X, Y).
_similar(X, Y) :- _abbreviation(Y, X).
_similar(X, Y) :- _is(X, Y).
_similar(X, Y) :- _similar(X, Z), _similar(Z, Y).
_similar(X, X) :- mentioned(X).
"""


def gen_similar_rules() -> list[Rule]:
    """The fixed similarity closure: abbreviations both ways, class
    membership, transitivity, and reflexivity over mentioned terms."""
    return parse_program(_SIMILAR_RULES, provenance=PROV_ONTOLOGY).rules


def gen_mentioned_facts(kb: Program) -> list[Rule]:
    """mentioned(c) for every named constant in the knowledge base, so
    the reflexive similarity rule stays safe and ground."""
    out = []
    for term in kb.constants():
        if isinstance(term, Const) and term.text != "null":
            out.append(fact(Atom("mentioned", (term,))))
    return out


# ---------------------------------------------------------------------------
# manual knowledge
# ---------------------------------------------------------------------------


def _skolem_name(i: int) -> str:
    letters = ""
    i += 1
    while i:
        i, rem = divmod(i - 1, 26)
        letters = chr(ord("a") + rem) + letters
    return "sk_" + letters


def import_manual_knowledge(text: str) -> list[Rule]:
    """Parse curated rules.  Variables that appear only in the head or
    under NAF (the usual shape for abnormality guards over rule-local
    identifiers) are closed off with fresh constants; the result must be
    safe."""
    program = parse_program(text, provenance=PROV_MANUAL)
    counter = 0
    out: list[Rule] = []
    for rule in program.rules:
        if rule.is_fact():
            out.append(rule)  # a variable in a fact is a mistake, not a guard
            continue
        positive_vars = {v.name for lit in rule.body if not lit.naf
                         for v in lit.atom.variables()}
        unbound: dict[str, Const] = {}
        scan = ([rule.head] if rule.head else []) + [l.atom for l in rule.body]
        for atom in scan:
            for v in atom.variables():
                if v.name not in positive_vars and v.name not in unbound:
                    unbound[v.name] = Const(_skolem_name(counter))
                    counter += 1
        if unbound:
            env = dict(unbound)
            head = None
            if rule.head is not None:
                head = Atom(rule.head.pred,
                            tuple(env.get(a.name, a) if isinstance(a, Var) else a
                                  for a in rule.head.args),
                            rule.head.neg)
            body = tuple(
                Literal(Atom(l.atom.pred,
                             tuple(env.get(a.name, a) if isinstance(a, Var) else a
                                   for a in l.atom.args),
                             l.atom.neg), l.naf)
                for l in rule.body)
            rule = Rule(head, body)
        out.append(rule)
    checked = Program()
    checked.extend(out, PROV_MANUAL)
    check_safety(checked)
    return out


# ---------------------------------------------------------------------------
# ontology assembly
# ---------------------------------------------------------------------------

_EVIDENCE_PREDS = ("_mod", "_is", "_property")


def build_ontology(lex: Lexicon, kb: Program) -> Program:
    """kb plus the rule sets for every lexicon concept the text uses.

    A concept counts as used when its lemma appears as a fact constant,
    as a unary fact predicate, or as the class side of an _is fact.  For
    each used concept: bridge facts c(x) for every _is(x, c), a
    characteristics(s, x) fact whenever a gloss keyword or chain lemma
    of s co-occurs with x in a _mod/_is/_property fact, then the
    characteristic, preference, and hypernym rules.
    """
    out = Program()
    out.extend(kb)

    constants: set[str] = set()
    unary_preds: set[str] = set()
    unary_facts: dict[str, list[Const]] = {}
    is_pairs: list[tuple[Const, Const]] = []
    neighbors: dict[str, set[str]] = {}
    existing = set(kb.rules)

    for rule in kb.facts():
        atom = rule.head
        for arg in atom.args:
            if isinstance(arg, Const):
                constants.add(arg.text)
        if not atom.neg and len(atom.args) == 1 and isinstance(atom.args[0], Const):
            unary_preds.add(atom.pred)
            unary_facts.setdefault(atom.pred, []).append(atom.args[0])
        if (atom.pred == "_is" and not atom.neg and len(atom.args) == 2
                and all(isinstance(a, Const) for a in atom.args)):
            is_pairs.append((atom.args[0], atom.args[1]))
        if atom.pred in _EVIDENCE_PREDS and not atom.neg:
            names = [a.text for a in atom.args if isinstance(a, Const)]
            for name in names:
                bag = neighbors.setdefault(name, set())
                bag.update(n for n in names if n != name)

    for concept, senses in lex.entries.items():
        used = (concept in constants or concept in unary_preds
                or any(cls.text == concept for _, cls in is_pairs))
        if not used:
            continue

        instances: dict[Const, None] = {}
        for inst, cls in is_pairs:
            if cls.text == concept:
                instances.setdefault(inst, None)
        for inst in unary_facts.get(concept, ()):
            instances.setdefault(inst, None)

        for inst, cls in is_pairs:
            if cls.text == concept:
                bridge = fact(Atom(concept, (inst,)))
                if bridge not in existing:
                    out.add_unique(bridge, PROV_ONTOLOGY)

        for sense in senses:
            evidence = set(sense.gloss_keywords) | set(sense.hypernyms)
            for inst in instances:
                if neighbors.get(inst.text, set()) & evidence:
                    out.add_unique(
                        fact(Atom("characteristics",
                                  (Const(sense.sense_id), inst))),
                        PROV_ONTOLOGY)

        for rule in sense_rule_set(lex, concept).all_rules():
            out.add_unique(rule, PROV_ONTOLOGY)

    stratification_check(out)
    return out


def assemble_program(kb: Program,
                     lexicon: Optional[Lexicon] = None,
                     manual: Union[Program, Sequence[Rule]] = ()) -> Program:
    """Everything the solver needs for one passage in a single program:
    the compiled facts, manually curated rules, the word-sense machinery
    for lexicon concepts the text uses, the similarity closure, and the
    mentioned facts that keep reflexive similarity ground.

    post: result is safe; mentioned facts cover constants contributed
    by every layer, including manual rules and sense bridges.
    """
    program = Program()
    program.extend(kb)
    if isinstance(manual, Program):
        program.extend(manual)
    else:
        program.extend(list(manual), PROV_MANUAL)
    if lexicon is not None:
        program = build_ontology(lexicon, program)
    program.extend(gen_similar_rules())
    program.extend(gen_mentioned_facts(program), PROV_ONTOLOGY)
    check_safety(program)
    return program


def default_lexicon_path() -> Optional[str]:
    """Resolve the lexicon location from the CASPR_LEXICON variable."""
    return os.environ.get("CASPR_LEXICON")
