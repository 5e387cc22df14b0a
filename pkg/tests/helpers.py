"""Compact builders for annotated-document dicts used across tests.

Token specs are ``word/lemma/pos`` or ``word/lemma/pos/NER`` separated by
whitespace; dependency specs are ``rel(gov,dep)`` with gov 0 for root.
"""

from __future__ import annotations

import re

_DEP = re.compile(r"([\w:]+)\((\d+),(\d+)\)\Z")


def toks(spec: str) -> list[dict]:
    out = []
    for i, item in enumerate(spec.split(), start=1):
        parts = item.split("/")
        if len(parts) == 3:
            word, lemma, pos = parts
            ner = "O"
        elif len(parts) == 4:
            word, lemma, pos, ner = parts
        else:
            raise ValueError("bad token spec %r" % item)
        out.append({"index": i, "word": word, "lemma": lemma, "pos": pos, "ner": ner})
    return out


def deps(spec: str) -> list[dict]:
    out = []
    for item in spec.split():
        m = _DEP.match(item)
        if not m:
            raise ValueError("bad dep spec %r" % item)
        out.append({"gov": int(m.group(2)), "dep": int(m.group(3)), "rel": m.group(1)})
    return out


def sentence(token_spec: str, dep_spec: str) -> dict:
    return {"tokens": toks(token_spec), "deps": deps(dep_spec)}


def document(*sentences: dict) -> dict:
    return {"sentences": list(sentences)}
