"""Core logic-program representation.

Rules are function-free: terms are constants, integers, or variables.
Classical negation is carried on the atom (``-p(X)``) and behaves as a
predicate namespace disjoint from ``p``; negation as failure is carried
on body literals (``not p(X)``).  The reserved constant ``null`` marks
absent event roles and is an ordinary constant to the engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class CasprError(Exception):
    """Base class for errors raised by this package."""


class ParseError(CasprError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__("%s (line %d, col %d)" % (message, line, col))
        self.line = line
        self.col = col


class SafetyError(CasprError):
    pass


class ConsistencyError(CasprError):
    pass


class StratificationError(CasprError):
    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message)
        self.cycle = cycle


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------

# Constants outside this shape are printed single-quoted, so date and
# numeric strings like '581,309' or 'february_7_2016' survive a
# print/parse round trip.
_BARE_CONST = re.compile(r"\A_?[a-z][a-z_]*\Z")
_IDENT = re.compile(r"\A[_a-z][A-Za-z0-9_]*\Z")

ANON_NAME = "_"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    text: str
    # Quoting is display state, not identity: 'foo' and foo unify.
    quoted: bool = field(default=False, compare=False)

    def __str__(self) -> str:
        if self.quoted or not _BARE_CONST.match(self.text):
            return "'%s'" % self.text
        return self.text


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self) -> str:
        return str(self.value)


Term = Union[Var, Const, Num]

NULL = Const("null")


def mk_const(text: str) -> Const:
    """Build a constant from normalized token text, quoting when needed."""
    return Const(text, quoted=not _BARE_CONST.match(text))


def mk_term(text: str) -> Term:
    """Constant or integer from raw token text (digits become integers)."""
    if text.isdigit():
        return Num(int(text))
    return mk_const(text)


def is_anon(term: Term) -> bool:
    return isinstance(term, Var) and term.name == ANON_NAME


# ---------------------------------------------------------------------------
# atoms, literals, rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()
    neg: bool = False  # classical negation

    def key(self) -> tuple[bool, str, int]:
        """Predicate identity: name, arity, and negation namespace."""
        return (self.neg, self.pred, len(self.args))

    def variables(self) -> Iterator[Var]:
        for a in self.args:
            if isinstance(a, Var):
                yield a

    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def __str__(self) -> str:
        sign = "-" if self.neg else ""
        if not self.args:
            return sign + self.pred
        return "%s%s(%s)" % (sign, self.pred, ", ".join(str(a) for a in self.args))


@dataclass(frozen=True)
class Literal:
    atom: Atom
    naf: bool = False

    def __str__(self) -> str:
        return ("not " if self.naf else "") + str(self.atom)


@dataclass(frozen=True)
class Rule:
    head: Optional[Atom]
    body: tuple[Literal, ...] = ()

    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    def __str__(self) -> str:
        if self.head is None:
            return ":- %s." % ", ".join(str(l) for l in self.body)
        if not self.body:
            return "%s." % self.head
        return "%s :- %s." % (self.head, ", ".join(str(l) for l in self.body))


def fact(atom: Atom) -> Rule:
    return Rule(atom, ())


def rule_safety_errors(rule: Rule) -> list[str]:
    """Safety: every head or NAF variable occurs in a positive body literal.

    Anonymous variables are existential per occurrence, so one in a head
    or NAF literal can never be bound and is reported too.
    """
    bound = set()
    for lit in rule.body:
        if not lit.naf:
            bound.update(v.name for v in lit.atom.variables() if not is_anon(v))
    errors = []
    if rule.head is not None:
        for v in rule.head.variables():
            if is_anon(v):
                errors.append("anonymous variable in head of %s" % rule)
            elif v.name not in bound:
                errors.append("unsafe head variable %s in %s" % (v.name, rule))
    for lit in rule.body:
        if not lit.naf:
            continue
        for v in lit.atom.variables():
            if is_anon(v):
                errors.append("anonymous variable under NAF in %s" % rule)
            elif v.name not in bound:
                errors.append("unsafe NAF variable %s in %s" % (v.name, rule))
    if rule.is_fact() and not rule.head.is_ground():
        errors.append("non-ground fact %s" % rule)
    return errors


# ---------------------------------------------------------------------------
# programs
# ---------------------------------------------------------------------------

# Rule provenance values: "sentence:<n>", "ontology", "manual", "plumbing".
PROV_ONTOLOGY = "ontology"
PROV_MANUAL = "manual"
PROV_PLUMBING = "plumbing"


def sentence_prov(index: int) -> str:
    return "sentence:%d" % index


class Program:
    """Ordered rule list with per-rule provenance.

    Equality and the print/parse round trip cover the rules only;
    provenance is bookkeeping for justifications.
    """

    def __init__(self) -> None:
        self.rules: list[Rule] = []
        self.provenance: list[str] = []

    def add(self, rule: Rule, provenance: str = PROV_PLUMBING) -> None:
        self.rules.append(rule)
        self.provenance.append(provenance)

    def extend(self, other, provenance: Optional[str] = None) -> None:
        """Append a Program (keeping its provenance unless overridden) or
        any iterable of rules (tagged with ``provenance``)."""
        if isinstance(other, Program):
            self.rules.extend(other.rules)
            if provenance is None:
                self.provenance.extend(other.provenance)
            else:
                self.provenance.extend([provenance] * len(other.rules))
            return
        for rule in other:
            self.add(rule, provenance if provenance is not None else PROV_PLUMBING)

    def add_unique(self, rule: Rule, provenance: str = PROV_PLUMBING) -> bool:
        """Add unless an identical rule is already present."""
        if rule in self._seen():
            return False
        self.add(rule, provenance)
        return True

    def _seen(self) -> set[Rule]:
        cached = getattr(self, "_seen_cache", None)
        if cached is None or len(cached) != len(self.rules):
            cached = set(self.rules)
            self._seen_cache = cached
        return cached

    def facts(self) -> Iterator[Rule]:
        return (r for r in self.rules if r.is_fact())

    def constants(self) -> list[Term]:
        """Ground terms appearing in fact arguments, in first-seen order."""
        seen: dict[Term, None] = {}
        for r in self.facts():
            for a in r.head.args:
                if not isinstance(a, Var):
                    seen.setdefault(a, None)
        return list(seen)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.rules == other.rules

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return print_program(self)


def check_safety(program: Program) -> None:
    errors = []
    for rule in program.rules:
        errors.extend(rule_safety_errors(rule))
    if errors:
        raise SafetyError("; ".join(errors))


def check_consistency(program: Program) -> None:
    """Reject ground fact pairs p(t) / -p(t)."""
    pos = set()
    neg = set()
    for r in program.facts():
        (neg if r.head.neg else pos).add((r.head.pred, r.head.args))
    clash = pos & neg
    if clash:
        pred, args = sorted(clash)[0]
        shown = Atom(pred, args)
        raise ConsistencyError("contradictory facts %s and -%s" % (shown, shown))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<arrow>:-)
      | (?P<qmark>\?-)
      | (?P<int>\d+)
      | (?P<ident>[_a-zA-Z][A-Za-z0-9_]*)
      | (?P<quoted>'[^'\n]*')
      | (?P<punct>[(),.\-])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            out.append(_Tok(kind, tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    out.append(_Tok("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError("expected %s, found %r" % (want, tok.text or "end of input"),
                             tok.line, tok.col)
        return tok

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == ch

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return Num(int(tok.text))
        if tok.kind == "quoted":
            return Const(tok.text[1:-1], quoted=True)
        if tok.kind == "ident":
            if tok.text == ANON_NAME:
                return Var(ANON_NAME)
            if tok.text[0].isupper():
                return Var(tok.text)
            return Const(tok.text)
        raise ParseError("expected term, found %r" % tok.text, tok.line, tok.col)

    def atom(self) -> Atom:
        neg = False
        if self.at_punct("-"):
            self.next()
            neg = True
        tok = self.expect("ident")
        if not _IDENT.match(tok.text) or tok.text[0].isupper():
            raise ParseError("expected predicate, found %r" % tok.text, tok.line, tok.col)
        args: list[Term] = []
        if self.at_punct("("):
            self.next()
            args.append(self.term())
            while self.at_punct(","):
                self.next()
                args.append(self.term())
            self.expect("punct", ")")
        return Atom(tok.text, tuple(args), neg)

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "not":
            self.next()
            return Literal(self.atom(), naf=True)
        return Literal(self.atom())

    def body(self) -> tuple[Literal, ...]:
        lits = [self.literal()]
        while self.at_punct(","):
            self.next()
            lits.append(self.literal())
        return tuple(lits)

    def rule(self) -> Rule:
        head: Optional[Atom] = None
        body: tuple[Literal, ...] = ()
        if self.peek().kind == "arrow":
            self.next()
            body = self.body()
        else:
            head = self.atom()
            if self.peek().kind == "arrow":
                self.next()
                body = self.body()
        self.expect("punct", ".")
        return Rule(head, body)


def parse_program(text: str, provenance: str = PROV_MANUAL) -> Program:
    """Parse ``.lp`` text.  Malformed input raises ParseError with line/col."""
    parser = _Parser(text)
    program = Program()
    while parser.peek().kind != "eof":
        program.add(parser.rule(), provenance)
    return program


def parse_query(text: str) -> tuple[Literal, ...]:
    """Parse a query conjunction, with optional ``?-`` prefix and final dot."""
    parser = _Parser(text)
    if parser.peek().kind == "qmark":
        parser.next()
    body = parser.body()
    if parser.at_punct("."):
        parser.next()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input %r" % tok.text, tok.line, tok.col)
    return body


def print_program(program: Program, annotate: bool = False) -> str:
    """One rule per line.  With ``annotate`` a provenance comment trails
    each rule; comments are skipped on reparse so the round trip holds."""
    lines = []
    for rule, prov in zip(program.rules, program.provenance):
        if annotate:
            lines.append("%s  %% %s" % (rule, prov))
        else:
            lines.append(str(rule))
    return "\n".join(lines) + ("\n" if lines else "")


def print_query(body: Iterable[Literal]) -> str:
    return "?- %s." % ", ".join(str(l) for l in body)


# ---------------------------------------------------------------------------
# stratification
# ---------------------------------------------------------------------------
#
# Dependency nodes are predicate patterns (name, arity, sign, constant
# argument mask), not bare predicates.  Preference ladders put NAF edges
# between instances of one predicate that differ in a constant argument
# (tree(X, plant) vs tree(X, diagram)); the refined graph keeps those
# apart so the ladder checks as stratified.


def _pattern(atom: Atom) -> tuple:
    mask = tuple(a if not isinstance(a, Var) else None for a in atom.args)
    return (atom.neg, atom.pred, len(atom.args), mask)


def _pattern_str(pat: tuple) -> str:
    neg, pred, arity, mask = pat
    sign = "-" if neg else ""
    if arity == 0:
        return sign + pred
    args = ", ".join("_" if a is None else str(a) for a in mask)
    return "%s%s(%s)" % (sign, pred, args)


def _patterns_overlap(a: tuple, b: tuple) -> bool:
    if a[:3] != b[:3]:
        return False
    for x, y in zip(a[3], b[3]):
        if x is not None and y is not None and x != y:
            return False
    return True


@dataclass
class DepGraph:
    """Refined dependency graph over head patterns, plus strata."""

    nodes: list[tuple]
    rules_of: list[list[Rule]]          # non-fact rules whose head is the node
    fact_node: list[bool]
    edges: dict[int, list[tuple[int, bool]]]
    sccs: list[list[int]]
    scc_of: dict[int, int]
    naf_cycle: Optional[list[str]]
    strata: list[int]                   # per node; 0 when unstratified

    def matching(self, atom: Atom) -> list[int]:
        pat = _pattern(atom)
        return [i for i, other in enumerate(self.nodes) if _patterns_overlap(pat, other)]


def dependency_graph(program: Program) -> DepGraph:
    rule_nodes: dict[tuple, list[Rule]] = {}
    fact_masks: dict[tuple, list[tuple]] = {}
    for r in program.rules:
        if r.head is None:
            continue
        if r.is_fact():
            fact_masks.setdefault(r.head.key(), []).append(_pattern(r.head)[3])
        else:
            rule_nodes.setdefault(_pattern(r.head), []).append(r)

    # Collapse each predicate's facts to one generalized pattern.
    nodes: dict[tuple, list[Rule]] = dict(rule_nodes)
    fact_pats = set()
    for (neg, pred, arity), masks in fact_masks.items():
        merged = list(masks[0])
        for m in masks[1:]:
            for i, v in enumerate(m):
                if merged[i] != v:
                    merged[i] = None
        pat = (neg, pred, arity, tuple(merged))
        fact_pats.add(pat)
        nodes.setdefault(pat, [])

    node_list = list(nodes)
    index = {pat: i for i, pat in enumerate(node_list)}
    edges: dict[int, list[tuple[int, bool]]] = {i: [] for i in range(len(node_list))}
    for pat, rules in nodes.items():
        src = index[pat]
        for r in rules:
            for lit in r.body:
                bpat = _pattern(lit.atom)
                for other in node_list:
                    if _patterns_overlap(bpat, other):
                        edges[src].append((index[other], lit.naf))

    # Tarjan SCC over the dependency graph.
    low = [0] * len(node_list)
    num = [-1] * len(node_list)
    on_stack = [False] * len(node_list)
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = [0]

    def strongconnect(v: int) -> None:
        work = [(v, 0)]
        while work:
            node, ei = work.pop()
            if ei == 0:
                num[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for j in range(ei, len(edges[node])):
                w = edges[node][j][0]
                if num[w] == -1:
                    work.append((node, j + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[node] = min(low[node], num[w])
            if advanced:
                continue
            if low[node] == num[node]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    scc.append(w)
                    if w == node:
                        break
                sccs.append(scc)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    for v in range(len(node_list)):
        if num[v] == -1:
            strongconnect(v)

    scc_of = {}
    for sid, members in enumerate(sccs):
        for v in members:
            scc_of[v] = sid

    naf_cycle = None
    for members in sccs:
        group = set(members)
        for v in members:
            for w, naf in edges[v]:
                if naf and w in group:
                    naf_cycle = [_pattern_str(node_list[u]) for u in members]
                    break
            if naf_cycle:
                break
        if naf_cycle:
            break

    # Tarjan emits SCCs in reverse topological order: dependencies first.
    stratum = [0] * len(sccs)
    if naf_cycle is None:
        for sid, members in enumerate(sccs):
            best = 0
            for v in members:
                for w, naf in edges[v]:
                    target = scc_of[w]
                    if target == sid:
                        continue
                    best = max(best, stratum[target] + (1 if naf else 0))
            stratum[sid] = best

    return DepGraph(
        nodes=node_list,
        rules_of=[nodes[pat] for pat in node_list],
        fact_node=[pat in fact_pats for pat in node_list],
        edges=edges,
        sccs=sccs,
        scc_of=scc_of,
        naf_cycle=naf_cycle,
        strata=[stratum[scc_of[i]] for i in range(len(node_list))],
    )


def stratification_check(program: Program) -> dict[str, int]:
    """Stratum per head pattern; NAF inside a recursive component raises.

    Returns a mapping like ``{"q": 0, "p": 1}`` for ``{p :- not q. q.}``;
    patterns with constant arguments render as e.g. ``tree(_, plant)``.
    """
    graph = dependency_graph(program)
    if graph.naf_cycle is not None:
        raise StratificationError(
            "negation cycle through %s" % " -> ".join(graph.naf_cycle),
            graph.naf_cycle)
    return {_pattern_str(pat): graph.strata[i] for i, pat in enumerate(graph.nodes)}


# ---------------------------------------------------------------------------
# substitution helpers (shared by the query generator and the engine)
# ---------------------------------------------------------------------------

Subst = dict[str, Term]


def subst_term(term: Term, env: Subst) -> Term:
    while isinstance(term, Var) and term.name in env:
        term = env[term.name]
    return term


def subst_atom(atom: Atom, env: Subst) -> Atom:
    return Atom(atom.pred, tuple(subst_term(a, env) for a in atom.args), atom.neg)


def unify(args: tuple[Term, ...], ground: tuple[Term, ...], env: Subst) -> Optional[Subst]:
    """Match an argument tuple against ground terms, extending env.

    Anonymous variables match anything without binding.  Returns the
    extended substitution or None.
    """
    out = env
    for a, g in zip(args, ground):
        a = subst_term(a, out)
        if isinstance(a, Var):
            if a.name == ANON_NAME:
                continue
            if out is env:
                out = dict(env)
            out[a.name] = g
        elif a != g:
            return None
    return out


class _Renamer:
    """Fresh-variable renaming; each anonymous occurrence gets its own."""

    def __init__(self, counter: Iterator[int]):
        self.counter = counter
        self.env: dict[str, Var] = {}

    def term(self, t: Term) -> Term:
        if not isinstance(t, Var):
            return t
        if t.name == ANON_NAME:
            return Var("_G%d" % next(self.counter))
        if t.name not in self.env:
            self.env[t.name] = Var("_R%d" % next(self.counter))
        return self.env[t.name]

    def atom(self, a: Atom) -> Atom:
        return Atom(a.pred, tuple(self.term(t) for t in a.args), a.neg)
