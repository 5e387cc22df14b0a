"""Evaluation reporting: per-article accuracy over a question dataset.

Each answered question becomes a record; records roll up into article
rows with correct/total counts and a percentage to one decimal, plus a
totals row that sums the articles exactly and an average row over the
article percentages.  Renderers cover plain text, JSON, TSV, and a
per-article bar chart written as PNG.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

# shown under the text report so desk-scale numbers have a yardstick
CONTEXT_FOOTER = "published benchmark average: 77.76%"


@dataclass(frozen=True)
class QuestionRecord:
    """One evaluated question."""

    article: str
    question: str
    answer: Optional[str]
    confidence_class: Optional[str]
    gold: tuple[str, ...]
    matched: bool
    latency_ms: float


@dataclass(frozen=True)
class ArticleRow:
    name: str
    correct: int
    total: int

    @property
    def percent(self) -> float:
        if self.total == 0:
            return 0.0
        return round(100.0 * self.correct / self.total, 1)


@dataclass
class EvalReport:
    rows: list[ArticleRow] = field(default_factory=list)
    records: list[QuestionRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def totals(self) -> ArticleRow:
        return ArticleRow("Total",
                          sum(r.correct for r in self.rows),
                          sum(r.total for r in self.rows))

    def average_percent(self) -> float:
        if not self.rows:
            return 0.0
        return round(sum(r.percent for r in self.rows) / len(self.rows), 1)


def build_report(records: Sequence[QuestionRecord],
                 warnings: Iterable[str] = ()) -> EvalReport:
    """Roll question records up into article rows, keeping first-seen
    article order."""
    order: list[str] = []
    correct: dict[str, int] = {}
    total: dict[str, int] = {}
    for rec in records:
        if rec.article not in total:
            order.append(rec.article)
            correct[rec.article] = 0
            total[rec.article] = 0
        total[rec.article] += 1
        if rec.matched:
            correct[rec.article] += 1
    rows = [ArticleRow(name, correct[name], total[name]) for name in order]
    return EvalReport(rows=rows, records=list(records),
                      warnings=list(warnings))


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------

_ROW = "%-24s %8s %8s %8s"


def render_text(report: EvalReport) -> str:
    lines = [_ROW % ("article", "correct", "total", "percent")]
    for row in report.rows:
        lines.append(_ROW % (row.name, row.correct, row.total,
                             "%.1f" % row.percent))
    totals = report.totals()
    lines.append(_ROW % ("Total", totals.correct, totals.total,
                         "%.1f" % totals.percent))
    lines.append(_ROW % ("Average", "", "",
                         "%.1f" % report.average_percent()))
    for warning in report.warnings:
        lines.append("warning: %s" % warning)
    lines.append(CONTEXT_FOOTER)
    return "\n".join(lines) + "\n"


def render_json(report: EvalReport) -> str:
    totals = report.totals()
    payload = {
        "articles": [
            {"name": r.name, "correct": r.correct, "total": r.total,
             "percent": r.percent}
            for r in report.rows
        ],
        "total": {"correct": totals.correct, "total": totals.total,
                  "percent": totals.percent},
        "average_percent": report.average_percent(),
        "questions": [
            {"article": rec.article, "question": rec.question,
             "answer": rec.answer,
             "confidence_class": rec.confidence_class,
             "gold": list(rec.gold), "matched": rec.matched,
             "latency_ms": round(rec.latency_ms, 1)}
            for rec in report.records
        ],
        "warnings": list(report.warnings),
        "context": CONTEXT_FOOTER,
    }
    return json.dumps(payload, indent=2) + "\n"


def render_tsv(report: EvalReport) -> str:
    lines = ["article\tcorrect\ttotal\tpercent"]
    for row in report.rows:
        lines.append("%s\t%d\t%d\t%.1f"
                     % (row.name, row.correct, row.total, row.percent))
    totals = report.totals()
    lines.append("Total\t%d\t%d\t%.1f"
                 % (totals.correct, totals.total, totals.percent))
    lines.append("Average\t\t\t%.1f" % report.average_percent())
    return "\n".join(lines) + "\n"


def save_figure(report: EvalReport, path: str) -> None:
    """Write a per-article accuracy bar chart with the average drawn as
    a horizontal line."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.name for r in report.rows]
    percents = [r.percent for r in report.rows]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(names) + 2.0), 4.0))
    ax.bar(names, percents, color="#4878a8")
    if report.rows:
        ax.axhline(report.average_percent(), color="#a84848",
                   linestyle="--", linewidth=1.0,
                   label="average %.1f%%" % report.average_percent())
        ax.legend(loc="lower right")
    ax.set_ylim(0, 100)
    ax.set_ylabel("questions answered correctly (%)")
    ax.set_title("accuracy by article")
    for tick in ax.get_xticklabels():
        tick.set_rotation(20)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
