"""Query evaluation over stratified programs, and a brute-force oracle.

The evaluator is goal-directed: a query demands predicates, and only the
demanded slice of the dependency graph is ever materialized.  Tables are
kept per head pattern and filled to fixpoint a strongly-connected
component at a time, so positive recursion terminates and negation as
failure only ever consults finished tables.  Results are deterministic:
facts and rules fire in program order.

``brute_force_models`` is an independent check, not a fast path: small
ground programs are solved by enumerating every interpretation and
testing stability under the reduct; larger stratified ones by a plain
bottom-up fixpoint per stratum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .logic import (
    Atom,
    CasprError,
    ConsistencyError,
    Const,
    Literal,
    Program,
    Rule,
    StratificationError,
    Subst,
    Term,
    Var,
    _pattern,
    _patterns_overlap,
    check_safety,
    dependency_graph,
    is_anon,
    subst_atom,
    subst_term,
    unify,
)


class FlounderError(CasprError):
    """A NAF literal was selected before its arguments were ground."""


CONFIDENCE_WORDS = {
    "classI": "certain",
    "classII": "likely",
    "classIII": "possible",
    "classIV": "guess",
}


def reorder_body(body: Sequence[Literal]) -> tuple[Literal, ...]:
    """Stable partition: positive literals keep their order, NAF trails."""
    pos = [l for l in body if not l.naf]
    naf = [l for l in body if l.naf]
    return tuple(pos + naf)


# ---------------------------------------------------------------------------
# justification trees
# ---------------------------------------------------------------------------


@dataclass
class JustNode:
    atom: Atom
    naf: bool = False
    provenance: Optional[str] = None      # None for NAF failure markers
    children: list["JustNode"] = field(default_factory=list)

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.naf:
            line = "%snot %s   %% fails (no derivation)" % (pad, self.atom)
        elif not self.children and self.provenance is not None:
            line = "%s%s   %% fact (%s)" % (pad, self.atom, self.provenance)
        else:
            line = "%s%s   %% rule (%s)" % (pad, self.atom, self.provenance)
        parts = [line]
        parts.extend(c.render(indent + 1) for c in self.children)
        return "\n".join(parts)


@dataclass
class Answer:
    bindings: dict[str, Term]
    tree: list[JustNode]

    def value(self, var: str) -> Optional[Term]:
        return self.bindings.get(var)

    def render_tree(self) -> str:
        return "\n".join(n.render() for n in self.tree)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


class _Table:
    __slots__ = ("atoms", "index", "first_arg")

    def __init__(self) -> None:
        self.atoms: list[Atom] = []
        self.index: set[Atom] = set()
        self.first_arg: dict[Term, list[Atom]] = {}

    def add(self, atom: Atom) -> bool:
        if atom in self.index:
            return False
        self.atoms.append(atom)
        self.index.add(atom)
        if atom.args:
            self.first_arg.setdefault(atom.args[0], []).append(atom)
        return True

    def candidates(self, atom: Atom) -> list[Atom]:
        if atom.args:
            first = atom.args[0]
            if not isinstance(first, Var):
                return self.first_arg.get(first, [])
        return self.atoms


class Engine:
    """Materializes predicate extensions on demand and answers queries."""

    def __init__(self, program: Program, check: bool = True):
        if check:
            check_safety(program)
        self.program = program
        self.graph = dependency_graph(program)
        if self.graph.naf_cycle is not None:
            raise StratificationError(
                "program is not stratified: cycle through %s"
                % " -> ".join(self.graph.naf_cycle), self.graph.naf_cycle)

        n = len(self.graph.nodes)
        self.tables = [_Table() for _ in range(n)]
        self.done = [False] * n
        self.in_progress: set[int] = set()
        self.rules_by_node: list[list[tuple[tuple[Literal, ...], Rule, str]]] = [
            [] for _ in range(n)
        ]
        self.deriv: dict[Atom, tuple[Rule, str, tuple]] = {}
        self.nodes_by_key: dict[tuple, list[int]] = {}
        for i, pat in enumerate(self.graph.nodes):
            self.nodes_by_key.setdefault(pat[:3], []).append(i)
        self.match_cache: dict[tuple, list[int]] = {}

        node_of_pattern = {pat: i for i, pat in enumerate(self.graph.nodes)}
        for rule, prov in zip(program.rules, program.provenance):
            if rule.head is None:
                continue  # constraints are not used for derivation
            if rule.is_fact():
                for node in self.graph.matching(rule.head):
                    if self.graph.fact_node[node]:
                        if self.tables[node].add(rule.head):
                            self._record(rule.head, rule, prov, ())
                        break
            else:
                node = node_of_pattern[_pattern(rule.head)]
                self.rules_by_node[node].append((reorder_body(rule.body), rule, prov))

    # -- materialization ----------------------------------------------------

    def _record(self, atom: Atom, rule: Rule, prov: str, used: tuple) -> None:
        if atom not in self.deriv:
            self.deriv[atom] = (rule, prov, used)
            if not atom.neg:
                other = Atom(atom.pred, atom.args, neg=True)
            else:
                other = Atom(atom.pred, atom.args, neg=False)
            if other in self.deriv:
                raise ConsistencyError(
                    "derived both %s and %s" % (atom, other))

    def _matching(self, atom: Atom) -> list[int]:
        pat = _pattern(atom)
        hit = self.match_cache.get(pat)
        if hit is None:
            hit = [i for i in self.nodes_by_key.get(pat[:3], ())
                   if _patterns_overlap(pat, self.graph.nodes[i])]
            self.match_cache[pat] = hit
        return hit

    def _ensure(self, atom: Atom) -> list[int]:
        nodes = self._matching(atom)
        for node in nodes:
            self._materialize(node)
        return nodes

    def _materialize(self, node: int) -> None:
        if self.done[node] or node in self.in_progress:
            return
        scc = self.graph.scc_of[node]
        members = self.graph.sccs[scc]
        self.in_progress.update(members)
        try:
            for v in members:
                for w, _naf in self.graph.edges[v]:
                    if self.graph.scc_of[w] != scc:
                        self._materialize(w)
            changed = True
            while changed:
                changed = False
                for v in members:
                    for body, rule, prov in self.rules_by_node[v]:
                        for env, used in self._match(body, 0, {}):
                            head = subst_atom(rule.head, env)
                            if self.tables[v].add(head):
                                self._record(head, rule, prov, used)
                                changed = True
        finally:
            self.in_progress.difference_update(members)
        for v in members:
            self.done[v] = True

    def _holds(self, atom: Atom) -> bool:
        for node in self._ensure(atom):
            if atom in self.tables[node].index:
                return True
        return False

    def _match(self, body: tuple[Literal, ...], i: int, env: Subst
               ) -> Iterator[tuple[Subst, tuple]]:
        if i == len(body):
            yield env, ()
            return
        lit = body[i]
        atom = subst_atom(lit.atom, env)
        if lit.naf:
            if not atom.is_ground():
                raise FlounderError(
                    "non-ground NAF literal selected: not %s" % atom)
            if not self._holds(atom):
                for env2, used in self._match(body, i + 1, env):
                    yield env2, ((atom, True),) + used
            return
        for node in self._ensure(atom):
            table = self.tables[node]
            snapshot = table.candidates(atom)
            for k in range(len(snapshot)):
                ground = snapshot[k]
                env2 = unify(atom.args, ground.args, env)
                if env2 is None:
                    continue
                for env3, used in self._match(body, i + 1, env2):
                    yield env3, ((ground, False),) + used

    # -- queries ------------------------------------------------------------

    def query(self, literals: Sequence[Literal], limit: Optional[int] = None
              ) -> list[Answer]:
        body = reorder_body(literals)
        names: list[str] = []
        for lit in literals:
            for v in lit.atom.variables():
                if not is_anon(v) and v.name not in names:
                    names.append(v.name)
        answers: list[Answer] = []
        seen: set[tuple] = set()
        for env, used in self._match(body, 0, {}):
            bindings = {n: subst_term(Var(n), env) for n in names}
            key = tuple(bindings.get(n) for n in names)
            if key in seen:
                continue
            seen.add(key)
            tree = [self._justify(atom, naf) for atom, naf in used]
            answers.append(Answer(bindings, tree))
            if limit is not None and len(answers) >= limit:
                break
        return answers

    def _justify(self, atom: Atom, naf: bool, depth: int = 0) -> JustNode:
        if naf:
            return JustNode(atom, naf=True)
        rule, prov, used = self.deriv[atom]
        node = JustNode(atom, provenance=prov)
        if depth < 50:
            node.children = [self._justify(a, n, depth + 1) for a, n in used]
        return node


def solve(program: Program, query: Sequence[Literal],
          limit: Optional[int] = None) -> list[Answer]:
    """Evaluate a conjunctive query; deterministic answer order."""
    return Engine(program).query(query, limit)


# ---------------------------------------------------------------------------
# confidence ladder
# ---------------------------------------------------------------------------


@dataclass
class LadderResult:
    confidence_class: str       # classI .. classIV
    confidence: str             # certain .. guess
    variant: int                # index of the query that answered
    query: object               # the Query that answered
    answer: Answer
    value: Optional[Term]

    def render(self) -> str:
        # answers print as plain text, not program syntax, so constants
        # that would need quoting in a rule appear unquoted here
        if self.value is None:
            shown = "yes"
        elif isinstance(self.value, Const):
            shown = self.value.text
        else:
            shown = str(self.value)
        return "%s\t%s" % (shown, self.confidence)


def solve_ladder(program_or_engine, ladder) -> Optional[LadderResult]:
    """Try ladder classes in order; the first answer wins.  Ties inside a
    class are broken by variant order."""
    engine = (program_or_engine if isinstance(program_or_engine, Engine)
              else Engine(program_or_engine))
    for label, queries in ladder.classes():
        for vi, q in enumerate(queries):
            found = engine.query(q.literals, limit=1)
            if found:
                answer = found[0]
                return LadderResult(
                    confidence_class=label,
                    confidence=CONFIDENCE_WORDS[label],
                    variant=vi,
                    query=q,
                    answer=answer,
                    value=answer.bindings.get(q.answer_var),
                )
    return None


# ---------------------------------------------------------------------------
# brute-force stable models
# ---------------------------------------------------------------------------


def _ground_rules(program: Program) -> list[Rule]:
    constants: dict[Term, None] = {}
    for rule in program.rules:
        atoms = ([rule.head] if rule.head else []) + [l.atom for l in rule.body]
        for atom in atoms:
            for arg in atom.args:
                if not isinstance(arg, Var):
                    constants.setdefault(arg, None)
    consts = list(constants)

    out: list[Rule] = []
    counter = itertools.count()
    for rule in program.rules:
        names: list[str] = []
        seen = set()
        renamed_body = []
        renamed_head = rule.head

        def patch(atom: Atom) -> Atom:
            args = []
            for a in atom.args:
                if isinstance(a, Var):
                    name = a.name if not is_anon(a) else "_A%d" % next(counter)
                    if name not in seen:
                        seen.add(name)
                        names.append(name)
                    args.append(Var(name))
                else:
                    args.append(a)
            return Atom(atom.pred, tuple(args), atom.neg)

        if rule.head is not None:
            renamed_head = patch(rule.head)
        for lit in rule.body:
            renamed_body.append(Literal(patch(lit.atom), lit.naf))

        if not names:
            out.append(Rule(renamed_head, tuple(renamed_body)))
            continue
        for combo in itertools.product(consts, repeat=len(names)):
            env = dict(zip(names, combo))
            head = subst_atom(renamed_head, env) if renamed_head else None
            body = tuple(Literal(subst_atom(l.atom, env), l.naf) for l in renamed_body)
            out.append(Rule(head, body))
    return out


def _minimal_model(facts: list[Atom], rules: list[Rule]) -> set[Atom]:
    model = set(facts)
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.head is None or rule.head in model:
                continue
            if all(l.atom in model for l in rule.body):
                model.add(rule.head)
                changed = True
    return model


def _consistent(model: set[Atom]) -> bool:
    return not any(
        Atom(a.pred, a.args, neg=not a.neg) in model for a in model)


def _possible_atoms(ground: list[Rule]) -> tuple[dict[Atom, None], list[Rule]]:
    """Overapproximate the derivable atoms (NAF treated as always true)
    and drop ground rules that can never fire.  Atoms outside the result
    are false in every stable model, so enumeration can skip them."""
    possible: dict[Atom, None] = {}
    changed = True
    while changed:
        changed = False
        for rule in ground:
            if rule.head is None or rule.head in possible:
                continue
            if all(l.naf or l.atom in possible for l in rule.body):
                possible[rule.head] = None
                changed = True
    kept: list[Rule] = []
    for rule in ground:
        if any(not l.naf and l.atom not in possible for l in rule.body):
            continue
        body = tuple(l for l in rule.body if not (l.naf and l.atom not in possible))
        kept.append(Rule(rule.head, body))
    return possible, kept


def brute_force_models(program: Program, atom_budget: int = 16
                       ) -> list[frozenset[Atom]]:
    """All stable models of a groundable program.

    Up to ``atom_budget`` candidate atoms: full enumeration with a
    reduct-based stability test (handles non-stratified input).  Beyond
    that, stratified programs fall back to a stratum-wise fixpoint.
    """
    universe, ground = _possible_atoms(_ground_rules(program))
    atoms = list(universe)

    if len(atoms) <= atom_budget:
        models = []
        for bits in itertools.product((False, True), repeat=len(atoms)):
            candidate = {a for a, b in zip(atoms, bits) if b}
            if not _consistent(candidate):
                continue
            kept = []
            for rule in ground:
                if any(l.naf and l.atom in candidate for l in rule.body):
                    continue
                kept.append(Rule(rule.head,
                                 tuple(l for l in rule.body if not l.naf)))
            violated = False
            for rule in kept:
                if rule.head is None and all(l.atom in candidate for l in rule.body):
                    violated = True
                    break
            if violated:
                continue
            definite = [r for r in kept if r.head is not None]
            facts = [r.head for r in definite if not r.body]
            minimal = _minimal_model(facts, [r for r in definite if r.body])
            if minimal == candidate:
                models.append(frozenset(candidate))
        models.sort(key=lambda m: tuple(sorted(str(a) for a in m)))
        return models

    # stratified fixpoint on the ground program
    gp = Program()
    for rule in ground:
        gp.add(rule)
    graph = dependency_graph(gp)
    if graph.naf_cycle is not None:
        raise CasprError(
            "program exceeds the enumeration budget (%d atoms) and is not "
            "stratified" % len(atoms))
    height = max(graph.strata, default=0)
    stratum_of_atom: dict[Atom, int] = {}
    for i, pat in enumerate(graph.nodes):
        neg, pred, arity, mask = pat
        if all(m is not None for m in mask):
            stratum_of_atom[Atom(pred, mask, neg)] = graph.strata[i]

    model: set[Atom] = set()
    for level in range(height + 1):
        changed = True
        while changed:
            changed = False
            for rule in ground:
                if rule.head is None or rule.head in model:
                    continue
                if stratum_of_atom.get(rule.head, 0) != level:
                    continue
                ok = True
                for lit in rule.body:
                    if lit.naf:
                        if lit.atom in model:
                            ok = False
                            break
                    elif lit.atom not in model:
                        ok = False
                        break
                if ok:
                    model.add(rule.head)
                    changed = True
    for rule in ground:
        if rule.head is None:
            sat = all(
                (l.atom in model) != l.naf for l in rule.body)
            if sat:
                return []
    if not _consistent(model):
        return []
    return [frozenset(model)]
