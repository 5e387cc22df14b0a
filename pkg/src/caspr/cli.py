"""Command-line surface.

Subcommands cover the full pipeline: ``compile`` turns a parsed document
into a solving program on disk, ``ask`` answers one question (or loops
over many), ``explain`` shows the justification behind an answer, and
``eval`` scores a whole dataset and renders the accuracy report.

Exit codes: 0 when an answer or report was produced, 1 when a question
ends in no-answer, 2 on malformed input.
"""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import click

from .engine import Engine, solve_ladder
from .kb import compile_document
from .logic import CasprError, parse_program, print_program
from .ontology import (
    assemble_program,
    default_lexicon_path,
    import_manual_knowledge,
    load_lexicon,
)
from .questions import compile_question
from .report import (
    QuestionRecord,
    build_report,
    render_json,
    render_text,
    render_tsv,
    save_figure,
)

EXIT_OK = 0
EXIT_NO_ANSWER = 1
EXIT_INPUT = 2


def _fail(message: str) -> None:
    click.echo("error: %s" % message, err=True)
    sys.exit(EXIT_INPUT)


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        _fail(str(err))
    except json.JSONDecodeError as err:
        _fail("%s: %s" % (path, err))


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        _fail(str(err))
        raise AssertionError("unreachable")


def _build_program(parse_file: str, lexicon_file: Optional[str],
                   manual_files):
    kb = compile_document(_load_json_file(parse_file))
    lexicon = None
    lexicon_file = lexicon_file or default_lexicon_path()
    if lexicon_file:
        lexicon = load_lexicon(lexicon_file)
    manual = []
    for path in manual_files:
        manual.extend(import_manual_knowledge(_read_text(path)))
    return assemble_program(kb, lexicon=lexicon, manual=manual)


def _load_program(kb_file: str):
    return parse_program(_read_text(kb_file))


@click.group()
def main() -> None:
    """Compile parsed text into a reasoning program and question it."""


# ---------------------------------------------------------------------------
# compile
# ---------------------------------------------------------------------------


@main.command("compile")
@click.option("--parse", "parse_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="parsed document JSON")
@click.option("--lexicon", "lexicon_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="concept lexicon JSON (default: CASPR_LEXICON)")
@click.option("--manual", "manual_files", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="curated rule file; repeatable")
@click.option("-o", "--out", "out_file", required=True,
              type=click.Path(dir_okay=False), help="program file to write")
def cmd_compile(parse_file, lexicon_file, manual_files, out_file) -> None:
    """Compile one parsed document into a solving program."""
    try:
        program = _build_program(parse_file, lexicon_file, manual_files)
    except CasprError as err:
        _fail(str(err))
        return
    with open(out_file, "w", encoding="utf-8") as handle:
        handle.write(print_program(program, annotate=True))
    facts = sum(1 for r in program.rules if r.is_fact())
    click.echo("%d facts, %d rules -> %s"
               % (facts, len(program.rules) - facts, out_file))


# ---------------------------------------------------------------------------
# ask / explain
# ---------------------------------------------------------------------------


def _annotate_raw(text: str, question: bool):
    exe = shutil.which("caspr-annotate")
    if exe is None:
        _fail("--raw needs the caspr-annotate tool on PATH")
    cmd = [exe, "--in", "-", "--out", "-"]
    if question:
        cmd.append("--question")
    run = subprocess.run(cmd, input=text, capture_output=True, text=True)
    if run.returncode != 0:
        _fail("caspr-annotate failed: %s" % run.stderr.strip())
    try:
        return json.loads(run.stdout)
    except json.JSONDecodeError as err:
        _fail("caspr-annotate output: %s" % err)


def _answer_once(engine: Engine, question_source, explain: bool,
                 emit_lp: Optional[str]) -> bool:
    """Compile, solve, and print one answer line.  True when answered."""
    ladder = compile_question(question_source)
    if emit_lp:
        with open(emit_lp, "w", encoding="utf-8") as handle:
            handle.write(ladder.render())
    start = time.perf_counter()
    result = solve_ladder(engine, ladder)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if result is None:
        click.echo("no-answer")
        return False
    click.echo("%s\t%.1f" % (result.render(), elapsed_ms))
    if explain:
        click.echo(result.answer.render_tree())
    return True


@main.command("ask")
@click.option("--kb", "kb_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="compiled program file")
@click.option("--question", "question_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="parsed question JSON")
@click.option("--interactive", is_flag=True,
              help="read question parse paths from stdin, one per line")
@click.option("--raw", "raw_text", default=None,
              help="plain-text question, annotated via caspr-annotate")
@click.option("--explain", is_flag=True, help="print the justification tree")
@click.option("--emit-lp", "emit_lp", default=None,
              type=click.Path(dir_okay=False),
              help="also write the compiled query ladder here")
def cmd_ask(kb_file, question_file, interactive, raw_text, explain,
            emit_lp) -> None:
    """Answer a question against a compiled program.

    Output: answer, confidence, and latency in ms, tab separated."""
    chosen = [x is not None and x is not False
              for x in (question_file, raw_text)] + [interactive]
    if sum(chosen) != 1:
        _fail("choose exactly one of --question, --interactive, --raw")
    try:
        engine = Engine(_load_program(kb_file))
    except CasprError as err:
        _fail(str(err))
        return

    try:
        if question_file:
            answered = _answer_once(engine, _load_json_file(question_file),
                                    explain, emit_lp)
            sys.exit(EXIT_OK if answered else EXIT_NO_ANSWER)
        if raw_text is not None:
            doc = _annotate_raw(raw_text, question=True)
            answered = _answer_once(engine, doc, explain, emit_lp)
            sys.exit(EXIT_OK if answered else EXIT_NO_ANSWER)
        for line in sys.stdin:
            path = line.strip()
            if not path:
                break
            _answer_once(engine, _load_json_file(path), explain, None)
        sys.exit(EXIT_OK)
    except CasprError as err:
        _fail(str(err))


@main.command("explain")
@click.option("--kb", "kb_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--question", "question_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
def cmd_explain(kb_file, question_file) -> None:
    """Answer one question and print its justification tree."""
    try:
        engine = Engine(_load_program(kb_file))
        answered = _answer_once(engine, _load_json_file(question_file),
                                explain=True, emit_lp=None)
    except CasprError as err:
        _fail(str(err))
        return
    sys.exit(EXIT_OK if answered else EXIT_NO_ANSWER)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _evaluate_article(title: str, kb_path: str, questions: list,
                      dataset_dir: str) -> list[QuestionRecord]:
    engine = Engine(parse_program(_read_text(kb_path)))
    records = []
    for qa in questions:
        gold = tuple(a.get("text", "") for a in qa.get("answers", []))
        if "parse" in qa:
            source = qa["parse"]
        else:
            source = _load_json_file(
                os.path.join(dataset_dir, qa["parse_file"]))
        start = time.perf_counter()
        try:
            result = solve_ladder(engine, compile_question(source))
        except CasprError:
            result = None
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        answer = None
        confidence_class = None
        if result is not None:
            answer = result.render().split("\t")[0]
            confidence_class = result.confidence_class
        records.append(QuestionRecord(
            article=title,
            question=qa.get("question", ""),
            answer=answer,
            confidence_class=confidence_class,
            gold=gold,
            matched=answer is not None and answer_matches(answer, gold),
            latency_ms=elapsed_ms))
    return records


_STOP_WORDS = {"a", "an", "the"}


def normalize_answer(text: str) -> str:
    """Lowercase, underscores to spaces, punctuation stripped, articles
    dropped."""
    cleaned = []
    for ch in text.lower().replace("_", " "):
        cleaned.append(ch if ch.isalnum() or ch.isspace() else " ")
    words = [w for w in "".join(cleaned).split() if w not in _STOP_WORDS]
    return " ".join(words)


def answer_matches(answer: str, gold: tuple) -> bool:
    """Bidirectional substring match after normalization."""
    norm = normalize_answer(answer)
    if not norm:
        return False
    for g in gold:
        gn = normalize_answer(g)
        if gn and (norm in gn or gn in norm):
            return True
    return False


@main.command("eval")
@click.option("--dataset", "dataset_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="question dataset JSON")
@click.option("--kb-dir", "kb_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="directory of compiled per-article programs")
@click.option("--json", "json_out", default=None,
              type=click.Path(dir_okay=False), help="write JSON report here")
@click.option("--tsv", "tsv_out", default=None,
              type=click.Path(dir_okay=False), help="write TSV report here")
@click.option("--figure", "figure_out", default=None,
              type=click.Path(dir_okay=False),
              help="write a per-article accuracy chart here (PNG)")
def cmd_eval(dataset_file, kb_dir, json_out, tsv_out, figure_out) -> None:
    """Score every dataset question against its article's program."""
    dataset = _load_json_file(dataset_file)
    dataset_dir = os.path.dirname(os.path.abspath(dataset_file))
    warnings = []
    jobs = []
    for article in dataset.get("data", []):
        title = article.get("title", "untitled")
        kb_path = os.path.join(kb_dir, title + ".lp")
        if not os.path.exists(kb_path):
            warnings.append("no program for article '%s', skipped" % title)
            continue
        questions = [qa for para in article.get("paragraphs", [])
                     for qa in para.get("qas", [])]
        jobs.append((title, kb_path, questions))

    # one worker per article keeps each engine on a single thread while
    # articles run concurrently; output order stays input order
    records = []
    if jobs:
        with ThreadPoolExecutor(max_workers=min(4, len(jobs))) as pool:
            futures = [pool.submit(_evaluate_article, title, kb_path,
                                   questions, dataset_dir)
                       for title, kb_path, questions in jobs]
            for future in futures:
                records.extend(future.result())

    report = build_report(records, warnings)
    click.echo(render_text(report), nl=False)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as handle:
            handle.write(render_json(report))
    if tsv_out:
        with open(tsv_out, "w", encoding="utf-8") as handle:
            handle.write(render_tsv(report))
    if figure_out:
        save_figure(report, figure_out)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
