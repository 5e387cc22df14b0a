#!/usr/bin/env python3
"""Author the frozen evaluation fixtures under tests/fixtures/.

Everything here is hand-written parse data in a compact spec syntax
(word/lemma/pos[/NER] tokens, rel(gov,dep) edges) expanded into the
document JSON the package consumes.  Run from the repository root:

    python3 scripts/build_fixtures.py

The script overwrites the fixture tree deterministically, so diffs show
exactly what changed.
"""

from __future__ import annotations

import json
import os
import re

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "tests", "fixtures")

_DEP = re.compile(r"([\w:]+)\((\d+),(\d+)\)\Z")


def toks(spec: str) -> list:
    out = []
    for i, item in enumerate(spec.split(), start=1):
        parts = item.split("/")
        if len(parts) == 3:
            word, lemma, pos = parts
            ner = "O"
        else:
            word, lemma, pos, ner = parts
        out.append({"index": i, "word": word, "lemma": lemma,
                    "pos": pos, "ner": ner})
    return out


def deps(spec: str) -> list:
    out = []
    for item in spec.split():
        m = _DEP.match(item)
        if not m:
            raise ValueError("bad dep spec %r" % item)
        out.append({"gov": int(m.group(2)), "dep": int(m.group(3)),
                    "rel": m.group(1)})
    return out


def sentence(token_spec: str, dep_spec: str) -> dict:
    return {"tokens": toks(token_spec), "deps": deps(dep_spec)}


def document(*sentences: dict) -> dict:
    return {"sentences": list(sentences)}


def write_json(relpath: str, payload) -> None:
    path = os.path.join(FIXTURES, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=False)
        handle.write("\n")
    print("wrote", os.path.relpath(path, ROOT))


def write_text(relpath: str, text: str) -> None:
    path = os.path.join(FIXTURES, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    print("wrote", os.path.relpath(path, ROOT))


# ---------------------------------------------------------------------------
# articles
# ---------------------------------------------------------------------------

ABC_ARTICLE = document(
    sentence(
        "ABC/abc/NNP/ORGANIZATION is/be/VBZ an/a/DT American/american/JJ "
        "television_network/television_network/NN ././.",
        "root(0,5) nsubj(5,1) cop(5,2) det(5,3) amod(5,4) punct(5,6)"),
    sentence(
        "ABC/abc/NNP/ORGANIZATION is/be/VBZ headquartered/headquarter/VBN "
        "in/in/IN Manhattan/manhattan/NNP/LOCATION ,/,/, a/a/DT "
        "borough/borough/NN of/of/IN "
        "New_York_City/new_york_city/NNP/LOCATION ././.",
        "root(0,3) nsubjpass(3,1) auxpass(3,2) nmod:in(3,5) case(5,4) "
        "punct(3,6) appos(5,8) det(8,7) nmod:of(8,10) case(10,9) punct(3,11)"),
    sentence(
        "The/the/DT American_Broadcasting_Company/american_broadcasting_company"
        "/NNP/ORGANIZATION (/(/-LRB- ABC/abc/NNP/ORGANIZATION )/)/-RRB- "
        "launched/launch/VBD its/its/PRP$ network/network/NN on/on/IN "
        "19/19/CD/DATE April/april/NNP/DATE 1948/1948/CD/DATE ././.",
        "root(0,6) det(2,1) nsubj(6,2) appos(2,4) punct(2,3) punct(2,5) "
        "dobj(6,8) nmod:poss(8,7) nmod:on(6,10) case(10,9) punct(6,13)"),
)

TESLA_ARTICLE = document(
    sentence(
        "Nikola_Tesla/nikola_tesla/NNP/PERSON (/(/-LRB- 10/10/CD/DATE "
        "July/july/NNP/DATE 1856/1856/CD/DATE –/–/: 7/7/CD/DATE "
        "January/january/NNP/DATE 1943/1943/CD/DATE )/)/-RRB- was/be/VBD "
        "a/a/DT Serbian-American/serbian-american/JJ inventor/inventor/NN "
        "././.",
        "root(0,14) nsubj(14,1) cop(14,11) det(14,12) amod(14,13) "
        "punct(14,15) punct(1,2) dep(1,3) punct(1,10) dep(3,7) punct(3,6)"),
    sentence(
        "Tesla/tesla/NNP/PERSON was/be/VBD born/bear/VBN on/on/IN "
        "10/10/CD/DATE July/july/NNP/DATE 1856/1856/CD/DATE in/in/IN "
        "Smiljan/smiljan/NNP/LOCATION ././.",
        "root(0,3) nsubjpass(3,1) auxpass(3,2) nmod:on(3,5) case(5,4) "
        "nmod:in(3,9) case(9,8) punct(3,10)"),
    sentence(
        "Tesla/tesla/NNP/PERSON invented/invent/VBD the/the/DT "
        "induction_motor/induction_motor/NN in/in/IN 1887/1887/CD/DATE ././.",
        "root(0,2) nsubj(2,1) dobj(2,4) det(4,3) nmod:in(2,6) case(6,5) "
        "punct(2,7)"),
    sentence(
        "Tesla/tesla/NNP/PERSON died/die/VBD in/in/IN "
        "New_York_City/new_york_city/NNP/LOCATION on/on/IN 7/7/CD/DATE "
        "January/january/NNP/DATE 1943/1943/CD/DATE ././.",
        "root(0,2) nsubj(2,1) nmod:in(2,4) case(4,3) nmod:on(2,6) case(6,5) "
        "punct(2,9)"),
)

SUPER_BOWL_ARTICLE = document(
    sentence(
        "The/the/DT Denver_Broncos/denver_broncos/NNP/ORGANIZATION "
        "defeated/defeat/VBD the/the/DT "
        "Carolina_Panthers/carolina_panthers/NNP/ORGANIZATION in/in/IN "
        "Super_Bowl_50/super_bowl_50/NNP/MISC ././.",
        "root(0,3) det(2,1) nsubj(3,2) det(5,4) dobj(3,5) nmod:in(3,7) "
        "case(7,6) punct(3,8)"),
    sentence(
        "The/the/DT game/game/NN was/be/VBD played/play/VBN on/on/IN "
        "February/february/NNP/DATE 7/7/CD/DATE ,/,/,/DATE 2016/2016/CD/DATE "
        "at/at/IN Levi_Stadium/levi_stadium/NNP/LOCATION in/in/IN the/the/DT "
        "San_Francisco_Bay_Area/san_francisco_bay_area/NNP/LOCATION ././.",
        "root(0,4) det(2,1) nsubjpass(4,2) auxpass(4,3) nmod:on(4,6) "
        "case(6,5) nmod:at(4,11) case(11,10) nmod:in(4,14) case(14,12) "
        "det(14,13) punct(4,15)"),
    sentence(
        "The/the/DT Denver_Broncos/denver_broncos/NNP/ORGANIZATION "
        "earned/earn/VBD their/their/PRP$ third/third/JJ "
        "Super_Bowl/super_bowl/NNP/MISC title/title/NN ././.",
        "root(0,3) det(2,1) nsubj(3,2) dobj(3,7) nmod:poss(7,4) amod(7,5) "
        "compound(7,6) punct(3,8)"),
)

# ---------------------------------------------------------------------------
# questions
# ---------------------------------------------------------------------------

QUESTIONS = {
    "abc_q1": (
        "What is ABC?",
        ["television network", "an American television network"],
        document(sentence(
            "What/what/WP is/be/VBZ ABC/abc/NNP/ORGANIZATION ?/?/.",
            "root(0,1) cop(1,2) nsubj(1,3) punct(1,4)"))),
    "abc_q2": (
        "Where is ABC headquartered?",
        ["Manhattan"],
        document(sentence(
            "Where/where/WRB is/be/VBZ ABC/abc/NNP/ORGANIZATION "
            "headquartered/headquarter/VBN ?/?/.",
            "root(0,4) advmod(4,1) auxpass(4,2) nsubjpass(4,3) punct(4,5)"))),
    "abc_q3": (
        "In what borough of New York City is ABC headquartered?",
        ["Manhattan"],
        document(sentence(
            "In/in/IN what/what/WDT borough/borough/NN of/of/IN "
            "New_York_City/new_york_city/NNP/LOCATION is/be/VBZ "
            "ABC/abc/NNP/ORGANIZATION headquartered/headquarter/VBN ?/?/.",
            "root(0,8) nmod:in(8,3) case(3,1) det(3,2) nmod:of(3,5) "
            "case(5,4) auxpass(8,6) nsubjpass(8,7) punct(8,9)"))),
    "abc_q4": (
        "When did ABC launch its network?",
        ["19 April 1948", "April 19, 1948"],
        document(sentence(
            "When/when/WRB did/do/VBD ABC/abc/NNP/ORGANIZATION "
            "launch/launch/VB its/its/PRP$ network/network/NN ?/?/.",
            "root(0,4) advmod(4,1) aux(4,2) nsubj(4,3) dobj(4,6) "
            "nmod:poss(6,5) punct(4,7)"))),
    "tesla_q1": (
        "When was Nikola Tesla born?",
        ["10 July 1856"],
        document(sentence(
            "When/when/WRB was/be/VBD Nikola_Tesla/nikola_tesla/NNP/PERSON "
            "born/bear/VBN ?/?/.",
            "root(0,4) advmod(4,1) auxpass(4,2) nsubjpass(4,3) punct(4,5)"))),
    "tesla_q2": (
        "Where was Tesla born?",
        ["Smiljan"],
        document(sentence(
            "Where/where/WRB was/be/VBD Tesla/tesla/NNP/PERSON "
            "born/bear/VBN ?/?/.",
            "root(0,4) advmod(4,1) auxpass(4,2) nsubjpass(4,3) punct(4,5)"))),
    "tesla_q3": (
        "What did Tesla invent?",
        ["the induction motor", "induction motor"],
        document(sentence(
            "What/what/WP did/do/VBD Tesla/tesla/NNP/PERSON "
            "invent/invent/VB ?/?/.",
            "root(0,4) dobj(4,1) aux(4,2) nsubj(4,3) punct(4,5)"))),
    "tesla_q4": (
        "In what year did Tesla invent the induction motor?",
        ["1887"],
        document(sentence(
            "In/in/IN what/what/WDT year/year/NN did/do/VBD "
            "Tesla/tesla/NNP/PERSON invent/invent/VB the/the/DT "
            "induction_motor/induction_motor/NN ?/?/.",
            "root(0,6) nmod:in(6,3) case(3,1) det(3,2) aux(6,4) nsubj(6,5) "
            "dobj(6,8) det(8,7) punct(6,9)"))),
    "super_bowl_q1": (
        "Which team won Super Bowl 50?",
        ["Denver Broncos", "The Denver Broncos"],
        document(sentence(
            "Which/which/WDT team/team/NN won/win/VBD "
            "Super_Bowl_50/super_bowl_50/NNP/MISC ?/?/.",
            "root(0,3) det(2,1) nsubj(3,2) dobj(3,4) punct(3,5)"))),
    "super_bowl_q2": (
        "Where was the game played?",
        ["San Francisco Bay Area", "Levi's Stadium"],
        document(sentence(
            "Where/where/WRB was/be/VBD the/the/DT game/game/NN "
            "played/play/VBN ?/?/.",
            "root(0,5) advmod(5,1) auxpass(5,2) nsubjpass(5,4) det(4,3) "
            "punct(5,6)"))),
    "super_bowl_q3": (
        "When was the game played?",
        ["February 7, 2016"],
        document(sentence(
            "When/when/WRB was/be/VBD the/the/DT game/game/NN "
            "played/play/VBN ?/?/.",
            "root(0,5) advmod(5,1) auxpass(5,2) nsubjpass(5,4) det(4,3) "
            "punct(5,6)"))),
    "super_bowl_q4": (
        "Which team did the Denver Broncos defeat?",
        ["Carolina Panthers", "The Carolina Panthers"],
        document(sentence(
            "Which/which/WDT team/team/NN did/do/VBD the/the/DT "
            "Denver_Broncos/denver_broncos/NNP/ORGANIZATION "
            "defeat/defeat/VB ?/?/.",
            "root(0,6) det(2,1) dobj(6,2) aux(6,3) det(5,4) nsubj(6,5) "
            "punct(6,7)"))),
}

# ---------------------------------------------------------------------------
# lexicon and curated rules
# ---------------------------------------------------------------------------

LEXICON = {
    "tree": [
        {"sense": "plant",
         "hypernyms": ["organism"],
         "gloss_keywords": ["leaf", "branch", "trunk", "forest"]},
        {"sense": "diagram",
         "hypernyms": ["representation"],
         "gloss_keywords": ["node", "graph", "hierarchy"]},
        {"sense": "person",
         "hypernyms": ["entity"],
         "gloss_keywords": ["family", "ancestor"]},
    ],
    "lion": [
        {"sense": "noun_animal",
         "hypernyms": ["cat", "animal"],
         "gloss_keywords": ["mane", "pride", "predator"]},
        {"sense": "noun_celebrity",
         "hypernyms": ["person"],
         "gloss_keywords": ["fame", "social"]},
    ],
    "team": [
        {"sense": "noun_team",
         "hypernyms": ["organization"],
         "gloss_keywords": ["player", "game", "league"]},
    ],
    "borough": [
        {"sense": "noun_borough",
         "hypernyms": ["district", "region"],
         "gloss_keywords": ["town", "city"]},
    ],
    "network": [
        {"sense": "noun_broadcaster",
         "hypernyms": ["organization"],
         "gloss_keywords": ["television", "station"]},
    ],
    "company": [
        {"sense": "noun_company",
         "hypernyms": ["organization"],
         "gloss_keywords": ["business", "firm"]},
    ],
}

TESLA_MANUAL = """\
% curated entity links the text does not state
_similar(tesla, nikola_tesla).
_similar(nikola_tesla, tesla).
"""

SUPER_BOWL_MANUAL = """\
% curated domain knowledge: defeating an opponent in a game wins it,
% and the named sides are teams
event(E, win, A, G) :- event(E, defeat, A, B), _property(E, defeat, in, G).
team(denver_broncos).
team(carolina_panthers).
"""

# ---------------------------------------------------------------------------
# dataset
# ---------------------------------------------------------------------------


def dataset() -> dict:
    articles = [
        ("abc", ["abc_q1", "abc_q2", "abc_q3", "abc_q4"]),
        ("tesla", ["tesla_q1", "tesla_q2", "tesla_q3", "tesla_q4"]),
        ("super_bowl", ["super_bowl_q1", "super_bowl_q2", "super_bowl_q3",
                        "super_bowl_q4"]),
    ]
    data = []
    for title, names in articles:
        qas = []
        for name in names:
            text, gold, _ = QUESTIONS[name]
            qas.append({
                "id": name,
                "question": text,
                "answers": [{"text": g} for g in gold],
                "parse_file": "questions/%s.json" % name,
            })
        data.append({"title": title, "paragraphs": [{"qas": qas}]})
    return {"version": "fixture-1", "data": data}


def main() -> None:
    write_json("articles/abc.json", ABC_ARTICLE)
    write_json("articles/tesla.json", TESLA_ARTICLE)
    write_json("articles/super_bowl.json", SUPER_BOWL_ARTICLE)
    for name, (_, _, parse) in sorted(QUESTIONS.items()):
        write_json("questions/%s.json" % name, parse)
    write_json("lexicon.json", LEXICON)
    write_text("manual/tesla.lp", TESLA_MANUAL)
    write_text("manual/super_bowl.lp", SUPER_BOWL_MANUAL)
    write_json("dataset.json", dataset())


if __name__ == "__main__":
    main()
