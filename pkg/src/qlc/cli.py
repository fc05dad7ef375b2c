"""Command-line access to every pipeline stage.

stdout carries exactly one machine-readable JSON document; diagnostics go
to stderr. Exit codes: 0 success, 1 grading failures, 2 usage or input
errors, 3 generation unavailable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import analyze
from .engine import (
    ConfigError,
    GenerationUnavailable,
    TeacherConfig,
    generate,
)
from .errors import AnalysisError, ParseFailure
from .grading import LearnerAnswer, LearnerHistory, grade
from .interp import execute
from .parser import parse_entry_expression, parse_program
from .templates import OPEN_ENDED, QuestionInstance, build_catalog

EXIT_OK = 0
EXIT_GRADING_FAILURES = 1
EXIT_USAGE = 2
EXIT_GENERATION_UNAVAILABLE = 3


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _fail(message: str, code: int = EXIT_USAGE) -> int:
    sys.stderr.write(message.rstrip() + "\n")
    return code


def _load_program(path: str):
    """Returns (program, None) or (None, exit_code) after printing diagnostics."""
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return None, _fail(f"cannot read {path}: {exc.strerror or exc}")
    try:
        program = parse_program(source)
    except ParseFailure as exc:
        for error in exc.errors:
            sys.stderr.write(
                f"{path}:{error.span.start_line}:{error.span.start_col}: "
                f"{error.kind} error: {error.message}\n"
            )
        return None, EXIT_USAGE
    return program, None


def cmd_analyze(args: argparse.Namespace) -> int:
    program, code = _load_program(args.file)
    if program is None:
        return code
    try:
        static = analyze(program)
    except AnalysisError as exc:
        return _fail(f"{args.file}:{exc.line}: {exc}")
    doc = {"staticFacts": static.to_json()}
    if args.entry:
        dynamic_docs = []
        for entry_text in args.entry:
            try:
                entry = parse_entry_expression(entry_text)
            except ParseFailure as exc:
                return _fail(f"bad --entry {entry_text!r}: {exc}")
            dynamic_docs.append(execute(program, entry).to_json())
        doc["dynamicFacts"] = dynamic_docs
    _emit(doc)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    program, code = _load_program(args.file)
    if program is None:
        return code

    entries = []
    history = LearnerHistory(args.history) if args.history else LearnerHistory()
    if args.exercise:
        from .service import ExerciseLoadError, ExerciseSpec

        try:
            data = json.loads(Path(args.exercise).read_text(encoding="utf-8"))
            spec = ExerciseSpec.from_json(data, args.exercise)
        except (OSError, json.JSONDecodeError, ExerciseLoadError) as exc:
            return _fail(f"cannot load exercise config: {exc}")
        config = spec.qlc_config
        entries = [parse_entry_expression(e) for e in spec.entries_for_dynamic_facts]
    else:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
            config = TeacherConfig.from_json(data)
        except (OSError, json.JSONDecodeError, ConfigError) as exc:
            return _fail(f"cannot load teacher config: {exc}")

    if args.seed is not None:
        seed = args.seed
    elif config.seed_policy.kind == "fixed":
        seed = config.seed_policy.seed
    else:
        seed = 0  # no submission context on the command line

    try:
        questions = generate(program, entries, config, history, args.learner, seed)
    except GenerationUnavailable as exc:
        for diagnostic in exc.diagnostics:
            sys.stderr.write(diagnostic + "\n")
        return EXIT_GENERATION_UNAVAILABLE
    _emit([q.to_json(include_key=args.with_keys) for q in questions])
    return EXIT_OK


def cmd_grade(args: argparse.Namespace) -> int:
    try:
        question_docs = json.loads(Path(args.questions).read_text(encoding="utf-8"))
        answer_docs = json.loads(Path(args.answers).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot load input: {exc}")
    try:
        questions = {q["questionId"]: QuestionInstance.from_json(q) for q in question_docs}
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(f"malformed questions file: {exc}")

    answered: set[str] = set()
    results = []
    all_correct = True
    for doc in answer_docs:
        question_id = doc.get("questionId")
        question = questions.get(question_id)
        if question is None:
            return _fail(f"answer references unknown question {question_id!r}")
        try:
            answer = LearnerAnswer.from_json(question_id, doc.get("payload", {}))
            # Teacher-side grading: always include the canonical answer.
            result = grade(question, answer, attempt=2)
        except ValueError as exc:
            return _fail(f"bad answer for {question_id}: {exc}")
        answered.add(question_id)
        if question.answer_type != OPEN_ENDED and result.verdict != "correct":
            all_correct = False
        results.append({"questionId": question_id, **result.to_json()})

    for question_id, question in questions.items():
        if question_id not in answered:
            results.append(
                {
                    "questionId": question_id,
                    "verdict": "unanswered",
                    "feedback": "No answer was provided.",
                    "canonicalAnswer": None,
                }
            )
            if question.answer_type != OPEN_ENDED:
                all_correct = False

    _emit({"results": results, "allCorrect": all_correct})
    return EXIT_OK if all_correct else EXIT_GRADING_FAILURES


def cmd_templates(args: argparse.Namespace) -> int:
    _emit([t.to_json() for t in build_catalog()])
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ExerciseLoadError, create_app

    try:
        app = create_app(exercises_dir=args.exercises, data_dir=args.data)
    except ExerciseLoadError as exc:
        return _fail(str(exc))
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlc",
        description="Ask students questions about the code they wrote themselves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="dump static (and dynamic) facts as JSON")
    p_analyze.add_argument("file", help="source file to analyze")
    p_analyze.add_argument(
        "--entry", action="append", default=[], metavar="EXPR",
        help="entry call for dynamic facts, e.g. 'main(3)' (repeatable)",
    )
    p_analyze.set_defaults(fn=cmd_analyze)

    p_generate = sub.add_parser("generate", help="generate questions for a source file")
    p_generate.add_argument("file", help="source file to question")
    source = p_generate.add_mutually_exclusive_group(required=True)
    source.add_argument("--exercise", metavar="CFG.JSON", help="exercise spec with checks and config")
    source.add_argument("--config", metavar="CFG.JSON", help="teacher config (static facts only)")
    p_generate.add_argument("--seed", type=int, default=None, help="selection seed override")
    p_generate.add_argument("--learner", default=None, metavar="ID", help="learner for mastery filtering")
    p_generate.add_argument("--history", default=None, metavar="FILE", help="history JSONL file")
    p_generate.add_argument("--with-keys", action="store_true", help="include answer keys")
    p_generate.set_defaults(fn=cmd_generate)

    p_grade = sub.add_parser("grade", help="grade answers against generated questions")
    p_grade.add_argument("--questions", required=True, metavar="Q.JSON")
    p_grade.add_argument("--answers", required=True, metavar="A.JSON")
    p_grade.set_defaults(fn=cmd_grade)

    p_templates = sub.add_parser("templates", help="export the template catalog")
    p_templates.add_argument("--format", choices=["json"], default="json")
    p_templates.set_defaults(fn=cmd_templates)

    p_serve = sub.add_parser("serve", help="run the submission service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--exercises", default=None, metavar="DIR")
    p_serve.add_argument("--data", default=None, metavar="DIR")
    p_serve.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
