"""Acceptance checks, one test per shipped guarantee.  Each prints a
single PASS/FAIL line with its runtime so the suite output doubles as a
release checklist.  The bodies lean on the fixture parses, the oracle
program corpus, and the article mini-corpus under tests/fixtures."""

import json
import os
import time

from caspr.cli import answer_matches
from caspr.engine import Engine, brute_force_models, solve_ladder
from caspr.kb import compile_document
from caspr.logic import Const, Program, parse_program, parse_query
from caspr.ontology import (
    assemble_program,
    import_manual_knowledge,
    load_lexicon,
    sense_rule_set,
)
from caspr.questions import compile_question

import test_kb as kbt
import test_questions as qt
from programs import corpus
from test_engine import assert_engine_matches_oracle
from test_kb import facts_of

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fix(*parts):
    return os.path.join(FIXTURES, *parts)


def _criterion(name, budget_s, body):
    """Run one acceptance body, print its verdict line, enforce budget."""
    start = time.perf_counter()
    try:
        body()
    except BaseException:
        print("FAIL  %s" % name)
        raise
    elapsed = time.perf_counter() - start
    verdict = "PASS" if budget_s is None or elapsed < budget_s else "FAIL"
    print("%s  %s (%.3fs)" % (verdict, name, elapsed))
    assert verdict == "PASS", \
        "%s took %.3fs, budget %.1fs" % (name, elapsed, budget_s)


# ---------------------------------------------------------------------------
# article mini-corpus plumbing
# ---------------------------------------------------------------------------

ARTICLE_MANUALS = {"tesla": "tesla.lp", "super_bowl": "super_bowl.lp"}

ARTICLE_QUESTIONS = {
    "abc": ["abc_q1", "abc_q2", "abc_q3", "abc_q4"],
    "tesla": ["tesla_q1", "tesla_q2", "tesla_q3", "tesla_q4"],
    "super_bowl": ["super_bowl_q1", "super_bowl_q2",
                   "super_bowl_q3", "super_bowl_q4"],
}

EXPECTED_CLASS_I = {
    "abc_q1": "television_network",
    "abc_q2": "manhattan",
    "abc_q3": "manhattan",
    "abc_q4": "19_april_1948",
    "tesla_q1": "10_july_1856",
    "tesla_q2": "smiljan",
    "tesla_q3": "induction_motor",
    "tesla_q4": "1887",
    "super_bowl_q1": "denver_broncos",
    "super_bowl_q2": "san_francisco_bay_area",
    "super_bowl_q3": "february_7_2016",
    "super_bowl_q4": "carolina_panthers",
}


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _article_program(name, drop_preds=()):
    kb = compile_document(_load_json(fix("articles", name + ".json")))
    if drop_preds:
        kept = Program()
        for rule, prov in zip(kb.rules, kb.provenance):
            if rule.head.pred not in drop_preds:
                kept.add(rule, prov)
        kb = kept
    manual = []
    manual_file = ARTICLE_MANUALS.get(name)
    if manual_file:
        with open(fix("manual", manual_file), "r", encoding="utf-8") as fh:
            manual = import_manual_knowledge(fh.read())
    return assemble_program(kb, lexicon=load_lexicon(fix("lexicon.json")),
                            manual=manual)


def _question_doc(qid):
    return _load_json(fix("questions", qid + ".json"))


def _binding_text(value):
    return value.text if isinstance(value, Const) else str(value)


# ---------------------------------------------------------------------------
# 1. text compilation reproduces the golden fact sets
# ---------------------------------------------------------------------------

def test_accept_kb_goldens():
    def body():
        prog = compile_document(kbt.MIITOMO)
        assert facts_of(prog, "event") == {
            "event(1, introduce, nintendo, mittomo)",
            "event(2, feature, mittomo, avatar_system)",
            "event(3, let, mittomo, null)",
            "event(4, communicate, users, null)",
            "event(5, exchange, null, information)",
            "event(5, exchange, null, personal_information)",
        }
        assert facts_of(prog, "_relation") == {
            "_relation(mittomo, 1, _clause)",
            "_relation(2, 3, _conj)",
            "_relation(3, 4, _clcomplement)",
            "_relation(4, 5, _clause)",
        }
        prog = compile_document(kbt.GAME)
        assert facts_of(prog, "_property") == {
            "_property(2, play, on, 'february_7_2016')",
            "_property(2, play, at, levis_stadium)",
            "_property(2, play, in, san_francisco_bay_area)",
            "_property(2, play, at, santa_clara)",
            "_property(2, santa_clara, in, california)",
        }
        assert facts_of(prog, "day") == {"day('february_7_2016', 7)"}
        assert facts_of(prog, "month") == {"month('february_7_2016', february)"}
        assert facts_of(prog, "year") == {"year('february_7_2016', 2016)"}
        assert facts_of(prog, "location") == {
            "location(levis_stadium)",
            "location(san_francisco_bay_area)",
            "location(santa_clara)",
            "location(california)",
        }
        prog = compile_document(kbt.AMAZON)
        assert facts_of(prog, "_mod") == {
            "_mod(forest, moist)",
            "_mod(forest, broadleafed)",
            "_mod(know, also)",
        }
        prog = compile_document(kbt.SUPERBOWL)
        assert facts_of(prog, "_possess") == {
            "_possess(american_football_conference, team)",
            "_possess(american_football_conference, denver_broncos)",
            "_possess(national_football_conference, team)",
            "_possess(national_football_conference, carolina_panthers)",
        }
        assert facts_of(prog, "_abbreviation") == {
            "_abbreviation(afc, american_football_conference)",
            "_abbreviation(nfc, national_football_conference)",
        }
        assert facts_of(prog, "team") == {
            "team(denver_broncos)",
            "team(carolina_panthers)",
        }
        prog = compile_document(kbt.TESLA)
        assert facts_of(prog, "_is") == {
            "_is(nikola_tesla, inventor)",
            "_is(nikola_tesla, serbian_american_inventor)",
            "_is(nikola_tesla, engineer)",
            "_is(nikola_tesla, electrical_engineer)",
            "_is(nikola_tesla, mechanical_engineer)",
            "_is(nikola_tesla, physicist)",
            "_is(nikola_tesla, futurist)",
        }
        prog = compile_document(kbt.GEMINI)
        assert facts_of(prog, "_start_date") == \
            {"_start_date(project_gemini, 1962)"}
        assert facts_of(prog, "_end_date") == \
            {"_end_date(project_gemini, 1966)"}
        prog = compile_document(kbt.KENYA)
        assert facts_of(prog, "number") == {
            "number('581,309')",
            "number(45)",
            "number(million)",
        }
        prog = compile_document(kbt.LUTHER)
        assert facts_of(prog, "day") == {"day('10_november_1483', 10)"}
        assert facts_of(prog, "month") == \
            {"month('10_november_1483', november)"}
        assert facts_of(prog, "year") == {"year('10_november_1483', 1483)"}
        # every compiled statement is a ground, positive fact
        for doc in kbt.ALL_FIXTURES:
            for rule in compile_document(doc).rules:
                assert rule.is_fact()
                assert not rule.head.neg

    _criterion("kb-compilation-goldens", 1.0, body)


# ---------------------------------------------------------------------------
# 2. question compilation reproduces the golden query ladders
# ---------------------------------------------------------------------------

def test_accept_question_goldens():
    def body():
        ladder = compile_question(qt.OWNSQ)
        assert qt.bodies(ladder.class_i) == [
            "event(E, own, X, O), _similar(walt_disney, O), "
            "organization(walt_disney), company(X, _)",
            "event(E, own, _, O), _property(E, own, _by, X), "
            "_similar(walt_disney, O), organization(walt_disney), "
            "company(X, _)",
            "event(E, own, _, _), _relation(X, E, _clause), "
            "_similar(walt_disney, O), organization(walt_disney), "
            "company(X, _)",
        ]
        ladder = compile_question(qt.BORNQ)
        assert qt.bodies(ladder.class_i) == [
            "event(E, bear, S, O), _similar(nikola_tesla, S), "
            "_property(E, bear, on, X), time(X)",
            "event(E, bear, _, O), _property(E, bear, _by, S), "
            "_similar(nikola_tesla, S), _property(E, bear, on, X), time(X)",
            "event(E, bear, _, _), _relation(S, E, _clause), "
            "_similar(nikola_tesla, S), _property(E, bear, on, X), time(X)",
            "_start_date(S, X), _similar(nikola_tesla, S), time(X)",
        ]
        assert qt.bodies(ladder.class_ii) == qt.bodies(ladder.class_i)
        assert qt.bodies(ladder.class_iii) == [
            "_property(E, bear, on, X), time(X)",
            "_start_date(S, X), time(X)",
        ]
        assert qt.bodies(ladder.class_iv) == ["time(X)"]
        ladder = compile_question(qt.BOROUGHQ)
        shared = {
            "_property(E, headquarter, in, X)",
            "_property(E, borough, of, new_york_city)",
            "_similar(abc, S)",
            "organization(abc)",
            "borough(X, _)",
        }
        assert qt.body_sets(ladder.class_i) == {
            frozenset(shared | {"event(E, headquarter, S, O)"}),
            frozenset(shared | {"event(E, headquarter, _, O)",
                                "_property(E, headquarter, _by, S)"}),
            frozenset(shared | {"event(E, headquarter, _, _)",
                                "_relation(S, E, _clause)"}),
        }
        assert qt.bodies(ladder.class_iii) == \
            ["_property(E, headquarter, in, X), borough(X, _)"]
        assert qt.bodies(ladder.class_iv) == ["borough(X, _)"]
        ladder = compile_question(qt.COPULAQ)
        assert qt.canon(", ".join(str(l) for l in ladder.class_i[0].literals)
                        ).startswith("_is(S, X)")
        # every weaker query stays a subset of a stronger one
        for doc in qt.ALL_QUESTIONS + [qt.LUTHERQ]:
            ladder = compile_question(doc)
            if ladder.class_i:
                qt._assert_ladder_shape(ladder)

    _criterion("question-ladder-goldens", 1.0, body)


# ---------------------------------------------------------------------------
# 3. word senses resolve by preference and move down under denial
# ---------------------------------------------------------------------------

def test_accept_word_sense_selection():
    def body():
        lex = load_lexicon(fix("lexicon.json"))
        rules = sense_rule_set(lex, "tree").all_rules()
        cases = [
            ("", "plant"),
            ("-tree(t1, plant).", "diagram"),
            ("-tree(t1, plant). -tree(t1, diagram).", "person"),
        ]
        for denials, winner in cases:
            program = parse_program("tree(t1). " + denials)
            program.extend(rules)
            models = brute_force_models(program)
            assert len(models) == 1, winner
            chosen = {a.args[1].text for a in models[0]
                      if a.pred == "tree" and len(a.args) == 2 and not a.neg}
            assert chosen == {winner}
            engine = Engine(program)
            for sense in ("plant", "diagram", "person"):
                holds = bool(engine.query(parse_query("tree(t1, %s)" % sense)))
                assert holds == (sense == winner), (winner, sense)

    _criterion("word-sense-selection", 1.0, body)


# ---------------------------------------------------------------------------
# 4. the goal-directed solver agrees with the brute-force oracle
# ---------------------------------------------------------------------------

def test_accept_solver_matches_oracle():
    def body():
        programs = corpus()
        assert len(programs) >= 20
        for name, program in programs:
            assert_engine_matches_oracle(program, name)

    _criterion("solver-matches-oracle", 30.0, body)


# ---------------------------------------------------------------------------
# 5. confidence degrades monotonically down the ladder
# ---------------------------------------------------------------------------

def test_accept_confidence_ladder():
    def body():
        for article, qids in ARTICLE_QUESTIONS.items():
            engine = Engine(_article_program(article))
            for qid in qids:
                ladder = compile_question(_question_doc(qid))
                per_class = []
                for label, queries in ladder.classes():
                    if not queries:
                        continue
                    found = set()
                    for q in queries:
                        for answer in engine.query(q.literals):
                            value = answer.bindings.get(q.answer_var)
                            if value is not None:
                                found.add(_binding_text(value))
                    per_class.append(found)
                assert per_class and per_class[0], qid
                assert EXPECTED_CLASS_I[qid] in per_class[0], qid
                for stronger, weaker in zip(per_class, per_class[1:]):
                    assert stronger <= weaker, qid
        # ablating knowledge walks the same answer down the ladder
        stages = [
            ((), "certain"),
            (("organization",), "likely"),
            (("organization", "event"), "possible"),
            (("organization", "event", "_property"), "guess"),
        ]
        question = compile_question(_question_doc("abc_q3"))
        for drop, expected in stages:
            program = _article_program("abc", drop_preds=drop)
            result = solve_ladder(program, question)
            assert result is not None, expected
            assert result.render() == "manhattan\t" + expected

    _criterion("confidence-ladder-degradation", None, body)


# ---------------------------------------------------------------------------
# 6. the article mini-corpus answers at high confidence
# ---------------------------------------------------------------------------

def test_accept_corpus_accuracy():
    def body():
        data = _load_json(fix("dataset.json"))["data"]
        total = 0
        strong = 0
        for art in data:
            engine = Engine(_article_program(art["title"]))
            for para in art["paragraphs"]:
                for qa in para["qas"]:
                    total += 1
                    qdoc = _load_json(fix(qa["parse_file"]))
                    result = solve_ladder(engine, compile_question(qdoc))
                    if result is None:
                        continue
                    if result.confidence_class not in ("classI", "classII"):
                        continue
                    text = result.render().split("\t")[0]
                    golds = [a["text"] for a in qa["answers"]]
                    if any(answer_matches(text, g) for g in golds):
                        strong += 1
        assert total == 12
        assert strong >= 9, "only %d of %d matched" % (strong, total)

    _criterion("mini-corpus-accuracy", 10.0, body)


# ---------------------------------------------------------------------------
# 7. answering stays fast, even on a padded knowledge base
# ---------------------------------------------------------------------------

def _timed_solve(engine, ladder):
    start = time.perf_counter()
    result = solve_ladder(engine, ladder)
    elapsed = time.perf_counter() - start
    assert result is not None
    return elapsed


def test_accept_query_latency():
    def body():
        budget = 0.1
        for article, qids in ARTICLE_QUESTIONS.items():
            engine = Engine(_article_program(article))
            for qid in qids:
                ladder = compile_question(_question_doc(qid))
                best = min(_timed_solve(engine, ladder) for _ in range(2))
                assert best < budget, "%s took %.3fs" % (qid, best)
        # pad an article out to a few hundred facts and stay under budget
        kb = compile_document(_load_json(fix("articles", "super_bowl.json")))
        padded = Program()
        padded.extend(kb)
        filler = "\n".join("filler(item_%d, bin_%d)." % (i, i % 7)
                           for i in range(500))
        padded.extend(parse_program(filler))
        with open(fix("manual", "super_bowl.lp"), "r",
                  encoding="utf-8") as fh:
            manual = import_manual_knowledge(fh.read())
        program = assemble_program(padded,
                                   lexicon=load_lexicon(fix("lexicon.json")),
                                   manual=manual)
        assert len(program.rules) > 500
        engine = Engine(program)
        for qid in ARTICLE_QUESTIONS["super_bowl"]:
            ladder = compile_question(_question_doc(qid))
            best = min(_timed_solve(engine, ladder) for _ in range(2))
            assert best < budget, "padded %s took %.3fs" % (qid, best)

    _criterion("query-latency", None, body)
