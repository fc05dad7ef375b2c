"""HTTP facade for the submit-test-question-answer loop.

A submission runs the exercise's functional checks first; only when every
check passes are questions generated and attached. Answers are graded
immediately, recorded into the learner history (first attempts only), and
the canonical answer is revealed after the second incorrect attempt.

State lives in flat files under a data directory: one JSON document per
submission and an append-only JSONL stream for the history, so a process
restart loses nothing.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import (
    ConfigError,
    GenerationUnavailable,
    TeacherConfig,
    generate,
)
from .errors import AnalysisError, ParseFailure
from .grading import (
    GradeResult,
    LearnerAnswer,
    LearnerHistory,
    VERDICT_CORRECT,
    VERDICT_INCORRECT,
    grade,
)
from .interp import canonical_text, execute
from .nodes import Call, Program
from .parser import parse_entry_expression, parse_program
from .templates import (
    MULTI_SELECT,
    MULTIPLE_CHOICE,
    OPEN_ENDED,
    QuestionInstance,
    SELECT_IN_CODE,
    SINGLE_VALUE,
)

MAX_CODE_BYTES = 64 * 1024

STATE_FAILED_CHECKS = "failedChecks"
STATE_AWAITING_ANSWERS = "awaitingAnswers"
STATE_COMPLETE = "complete"


class NotFoundError(Exception):
    pass


class ConflictError(Exception):
    pass


class OversizeError(Exception):
    pass


class ExerciseLoadError(Exception):
    pass


# ---------------------------------------------------------------------------
# Exercise specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    entry_text: str
    expected: str  # canonical value text

    def parse_entry(self) -> Call:
        return parse_entry_expression(self.entry_text)


@dataclass(frozen=True)
class ExerciseSpec:
    exercise_id: str
    title: str
    statement: str
    starter_code: str | None
    checks: tuple[Check, ...]
    qlc_config: TeacherConfig
    entries_for_dynamic_facts: tuple[str, ...]

    @staticmethod
    def from_json(data: dict, where: str) -> "ExerciseSpec":
        try:
            checks = tuple(
                Check(str(c["entry"]), str(c["expected"])) for c in data["checks"]
            )
            if not checks:
                raise ValueError("an exercise needs at least one check")
            entries = tuple(
                str(e) for e in data.get("entriesForDynamicFacts", [c["entry"] for c in data["checks"]])
            )
            spec = ExerciseSpec(
                exercise_id=str(data["exerciseId"]),
                title=str(data["title"]),
                statement=str(data["statement"]),
                starter_code=data.get("starterCode"),
                checks=checks,
                qlc_config=TeacherConfig.from_json(data.get("qlcConfig", {})),
                entries_for_dynamic_facts=entries,
            )
        except (KeyError, TypeError, ValueError, ConfigError) as exc:
            raise ExerciseLoadError(f"malformed exercise spec {where}: {exc}") from exc
        for check in spec.checks:
            try:
                check.parse_entry()
            except ParseFailure as exc:
                raise ExerciseLoadError(
                    f"malformed exercise spec {where}: bad check entry {check.entry_text!r}: {exc}"
                ) from exc
        for entry in spec.entries_for_dynamic_facts:
            try:
                parse_entry_expression(entry)
            except ParseFailure as exc:
                raise ExerciseLoadError(
                    f"malformed exercise spec {where}: bad entry {entry!r}: {exc}"
                ) from exc
        return spec

    def public_json(self) -> dict:
        return {
            "exerciseId": self.exercise_id,
            "title": self.title,
            "statement": self.statement,
            "starterCode": self.starter_code,
        }


def load_exercises(directory: str | Path) -> dict[str, ExerciseSpec]:
    directory = Path(directory)
    if not directory.is_dir():
        raise ExerciseLoadError(f"exercise directory {directory} does not exist")
    exercises: dict[str, ExerciseSpec] = {}
    for path in sorted(directory.glob("*.json")):
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ExerciseLoadError(f"malformed exercise spec {path}: {exc}") from exc
        spec = ExerciseSpec.from_json(data, str(path))
        if spec.exercise_id in exercises:
            raise ExerciseLoadError(f"duplicate exerciseId {spec.exercise_id!r} in {path}")
        exercises[spec.exercise_id] = spec
    return exercises


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def run_checks(program: Program, checks: tuple[Check, ...]) -> list[dict]:
    """Execute every check; pass iff the canonical result equals the
    expectation and the run raised no runtime error."""
    results = []
    for check in checks:
        facts = execute(program, check.parse_entry())
        if facts.failed:
            actual = f"error: {facts.result.kind} at line {facts.result.line}"
            passed = False
        else:
            actual = canonical_text(facts.result)
            passed = actual == check.expected
        results.append(
            {
                "entry": check.entry_text,
                "expected": check.expected,
                "actual": actual,
                "pass": passed,
            }
        )
    return results


# ---------------------------------------------------------------------------
# Submissions
# ---------------------------------------------------------------------------


@dataclass
class QuestionState:
    question: QuestionInstance
    attempts: int = 0
    finalized: bool = False
    skipped: bool = False
    responses: list[dict] = field(default_factory=list)  # audit & open-ended review

    def public_json(self) -> dict:
        doc = self.question.to_json(include_key=False)
        doc["attempts"] = self.attempts
        doc["finalized"] = self.finalized
        doc["skipped"] = self.skipped
        return doc


@dataclass
class SubmissionRecord:
    submission_id: str
    exercise_id: str
    learner_id: str
    code: str
    received_at: str
    state: str
    check_results: list[dict]
    diagnostics: list[str]
    questions: dict[str, QuestionState]

    def public_json(self) -> dict:
        return {
            "submissionId": self.submission_id,
            "exerciseId": self.exercise_id,
            "learnerId": self.learner_id,
            "receivedAt": self.received_at,
            "state": self.state,
            "checkResults": self.check_results,
            "diagnostics": self.diagnostics,
            "questions": [q.public_json() for q in self.questions.values()],
        }


def _payload_kind_allowed(answer_type: str, kind: str) -> bool:
    if answer_type in (SINGLE_VALUE, OPEN_ENDED):
        return kind == "text"
    if answer_type in (MULTIPLE_CHOICE, MULTI_SELECT):
        return kind == "options"
    if answer_type == SELECT_IN_CODE:
        return kind == "region"
    return False


def _submission_seed(submission_id: str) -> int:
    digest = hashlib.sha256(submission_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class QlcService:
    """Owns exercises, submissions, and the learner history."""

    def __init__(self, exercises_dir: str | Path, data_dir: str | Path):
        self.exercises = load_exercises(exercises_dir)
        self.data_dir = Path(data_dir)
        self.submissions_dir = self.data_dir / "submissions"
        self.submissions_dir.mkdir(parents=True, exist_ok=True)
        self.history = LearnerHistory(self.data_dir / "history.jsonl")
        self.lock = threading.RLock()
        self.submissions: dict[str, SubmissionRecord] = {}
        for path in sorted(self.submissions_dir.glob("*.json")):
            record = _record_from_json(json.loads(path.read_text(encoding="utf-8")))
            self.submissions[record.submission_id] = record

    # -- operations -----------------------------------------------------------

    def list_exercises(self) -> list[dict]:
        return [spec.public_json() for spec in self.exercises.values()]

    def handle_submission(self, exercise_id: str, learner_id: str, code: str) -> SubmissionRecord:
        spec = self.exercises.get(exercise_id)
        if spec is None:
            raise NotFoundError(f"no exercise {exercise_id!r}")
        if len(code.encode("utf-8")) > MAX_CODE_BYTES:
            raise OversizeError(f"code exceeds {MAX_CODE_BYTES} bytes")

        submission_id = uuid.uuid4().hex
        received_at = datetime.now(timezone.utc).isoformat()
        diagnostics: list[str] = []
        check_results: list[dict] = []
        questions: dict[str, QuestionState] = {}

        program: Program | None = None
        try:
            program = parse_program(code)
        except ParseFailure as exc:
            diagnostics = [
                f"line {e.span.start_line}, column {e.span.start_col}: {e.message}"
                for e in exc.errors
            ]

        if program is not None:
            try:
                from .analysis import analyze

                analyze(program)
            except AnalysisError as exc:
                diagnostics = [f"line {exc.line}: {exc}"]
                program = None

        if program is not None:
            check_results = run_checks(program, spec.checks)

        if program is None or not all(r["pass"] for r in check_results):
            state = STATE_FAILED_CHECKS
        else:
            seed = (
                spec.qlc_config.seed_policy.seed
                if spec.qlc_config.seed_policy.kind == "fixed"
                else _submission_seed(submission_id)
            )
            entries = [parse_entry_expression(e) for e in spec.entries_for_dynamic_facts]
            try:
                instances = generate(
                    program, entries, spec.qlc_config, self.history, learner_id, seed
                )
            except GenerationUnavailable as exc:
                instances = []
                diagnostics = list(exc.diagnostics)
            questions = {q.question_id: QuestionState(q) for q in instances}
            state = STATE_AWAITING_ANSWERS if questions else STATE_COMPLETE

        record = SubmissionRecord(
            submission_id=submission_id,
            exercise_id=exercise_id,
            learner_id=learner_id,
            code=code,
            received_at=received_at,
            state=state,
            check_results=check_results,
            diagnostics=diagnostics,
            questions=questions,
        )
        with self.lock:
            self.submissions[submission_id] = record
            self._persist(record)
        return record

    def handle_answer(self, submission_id: str, question_id: str, payload: dict) -> dict:
        with self.lock:
            record = self.submissions.get(submission_id)
            if record is None:
                raise NotFoundError(f"no submission {submission_id!r}")
            if record.state != STATE_AWAITING_ANSWERS:
                raise ConflictError(f"submission is {record.state}, not awaiting answers")
            qstate = record.questions.get(question_id)
            if qstate is None:
                raise NotFoundError(f"no question {question_id!r} in this submission")
            if qstate.finalized:
                raise ConflictError("this question has already been resolved")

            if payload.get("kind") == "skip":
                qstate.skipped = True
                qstate.finalized = True
                qstate.responses.append({"kind": "skip"})
                self._maybe_complete(record)
                self._persist(record)
                return {
                    "verdict": "skipped",
                    "feedback": "Question skipped; it does not affect your submission.",
                    "canonicalAnswer": None,
                }

            question = qstate.question
            if not _payload_kind_allowed(question.answer_type, payload.get("kind", "")):
                raise ValueError(
                    f"a {question.answer_type} question cannot take a "
                    f"{payload.get('kind')!r} answer"
                )
            answer = LearnerAnswer.from_json(question_id, payload)
            attempt = qstate.attempts + 1
            result = grade(question, answer, attempt=attempt)
            qstate.attempts = attempt
            qstate.responses.append({"payload": payload, "verdict": result.verdict})

            if attempt == 1 and result.verdict in (VERDICT_CORRECT, VERDICT_INCORRECT):
                self.history.record(record.learner_id, question.template_id, result.verdict)

            if result.verdict == VERDICT_CORRECT or attempt >= 2:
                qstate.finalized = True
            if question.answer_type == OPEN_ENDED:
                qstate.finalized = True

            self._maybe_complete(record)
            self._persist(record)
            return result.to_json()

    def mastery_summary(self, learner_id: str, threshold: int | None = None) -> list[dict]:
        summary = self.history.summary(learner_id)
        out = []
        for template_id in sorted(summary):
            entry = {
                "templateId": template_id,
                "correct": summary[template_id]["correct"],
                "incorrect": summary[template_id]["incorrect"],
            }
            if threshold is not None:
                entry["mastered"] = summary[template_id]["correct"] >= threshold
            out.append(entry)
        return out

    # -- persistence ----------------------------------------------------------

    def _maybe_complete(self, record: SubmissionRecord) -> None:
        if record.state == STATE_AWAITING_ANSWERS and all(
            q.finalized for q in record.questions.values()
        ):
            record.state = STATE_COMPLETE

    def _persist(self, record: SubmissionRecord) -> None:
        path = self.submissions_dir / f"{record.submission_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(_record_to_json(record), indent=2), encoding="utf-8")
        os.replace(tmp, path)


def _record_to_json(record: SubmissionRecord) -> dict:
    return {
        "submissionId": record.submission_id,
        "exerciseId": record.exercise_id,
        "learnerId": record.learner_id,
        "code": record.code,
        "receivedAt": record.received_at,
        "state": record.state,
        "checkResults": record.check_results,
        "diagnostics": record.diagnostics,
        "questions": [
            {
                "question": state.question.to_json(include_key=True),
                "attempts": state.attempts,
                "finalized": state.finalized,
                "skipped": state.skipped,
                "responses": state.responses,
            }
            for state in record.questions.values()
        ],
    }


def _record_from_json(data: dict) -> SubmissionRecord:
    questions: dict[str, QuestionState] = {}
    for item in data.get("questions", []):
        question = QuestionInstance.from_json(item["question"])
        questions[question.question_id] = QuestionState(
            question=question,
            attempts=item.get("attempts", 0),
            finalized=item.get("finalized", False),
            skipped=item.get("skipped", False),
            responses=item.get("responses", []),
        )
    return SubmissionRecord(
        submission_id=data["submissionId"],
        exercise_id=data["exerciseId"],
        learner_id=data["learnerId"],
        code=data["code"],
        received_at=data["receivedAt"],
        state=data["state"],
        check_results=data["checkResults"],
        diagnostics=data.get("diagnostics", []),
        questions=questions,
    )


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------


class SubmissionBody(BaseModel):
    learnerId: str
    code: str


class AnswerBody(BaseModel):
    questionId: str
    payload: dict


def create_app(
    exercises_dir: str | Path | None = None, data_dir: str | Path | None = None
) -> FastAPI:
    exercises_dir = exercises_dir or os.environ.get("QLC_EXERCISES_DIR", "./exercises")
    data_dir = data_dir or os.environ.get("QLC_DATA_DIR", "./data")
    service = QlcService(exercises_dir, data_dir)

    app = FastAPI(title="qlc", version="0.1.0")
    app.state.service = service
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(ConflictError)
    async def _conflict(request: Request, exc: ConflictError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(OversizeError)
    async def _oversize(request: Request, exc: OversizeError):
        return JSONResponse(status_code=413, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_request(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.get("/api/exercises")
    def list_exercises():
        return service.list_exercises()

    @app.post("/api/exercises/{exercise_id}/submissions")
    def submit(exercise_id: str, body: SubmissionBody):
        record = service.handle_submission(exercise_id, body.learnerId, body.code)
        return record.public_json()

    @app.post("/api/submissions/{submission_id}/answers")
    def answer(submission_id: str, body: AnswerBody):
        return service.handle_answer(submission_id, body.questionId, body.payload)

    @app.get("/api/learners/{learner_id}/history")
    def learner_history(learner_id: str, threshold: int | None = None):
        return service.mastery_summary(learner_id, threshold)

    ui_dir = os.environ.get("QLC_UI_DIR")
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
