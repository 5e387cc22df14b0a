"""caspr: compile dependency-parsed text into a logic-program knowledge
base, compile questions into confidence-laddered queries, and answer them
with a goal-directed solver."""

from .document import DocumentError, load_document
from .engine import (
    Answer,
    Engine,
    LadderResult,
    brute_force_models,
    solve,
    solve_ladder,
)
from .kb import compile_document
from .logic import (
    Atom,
    CasprError,
    Const,
    Literal,
    Program,
    Rule,
    Var,
    parse_program,
    parse_query,
    print_program,
    print_query,
)
from .ontology import (
    Lexicon,
    assemble_program,
    build_ontology,
    import_manual_knowledge,
    load_lexicon,
)
from .questions import (
    QueryLadder,
    QuestionAnalysis,
    analyze_question,
    compile_question,
    parse_ladder,
)
from .report import EvalReport, QuestionRecord, build_report

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "Atom",
    "CasprError",
    "Const",
    "DocumentError",
    "Engine",
    "EvalReport",
    "LadderResult",
    "Lexicon",
    "Literal",
    "Program",
    "QueryLadder",
    "QuestionAnalysis",
    "QuestionRecord",
    "Rule",
    "Var",
    "analyze_question",
    "assemble_program",
    "brute_force_models",
    "build_ontology",
    "build_report",
    "compile_document",
    "compile_question",
    "import_manual_knowledge",
    "load_document",
    "load_lexicon",
    "parse_ladder",
    "parse_program",
    "parse_query",
    "print_program",
    "print_query",
    "solve",
    "solve_ladder",
]
