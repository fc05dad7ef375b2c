"""Grade learner answers against answer keys and keep the mastery history.

Grading is pure and idempotent; history is an append-only event stream
persisted as one JSON object per line. Answers to open-ended questions are
never auto-graded and never count toward mastery.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .span import SourceSpan, char_range
from .templates import (
    CodeRegionKey,
    ExactValue,
    NoKey,
    OptionSetKey,
    QuestionInstance,
    ValueSet,
)

REGION_OVERLAP_THRESHOLD = 0.8  # fraction of the accepted span a selection must cover

VERDICT_CORRECT = "correct"
VERDICT_INCORRECT = "incorrect"
VERDICT_NOT_AUTO_GRADABLE = "notAutoGradable"


@dataclass(frozen=True)
class LearnerAnswer:
    question_id: str
    kind: str  # "text" | "options" | "region"
    text: str | None = None
    option_ids: frozenset[str] | None = None
    region: SourceSpan | None = None
    self_assessed: bool | None = None  # open-ended self-check; informational only

    @staticmethod
    def from_json(question_id: str, payload: dict) -> "LearnerAnswer":
        kind = payload.get("kind")
        if kind == "text":
            return LearnerAnswer(
                question_id,
                "text",
                text=str(payload.get("value", "")),
                self_assessed=payload.get("selfAssessed"),
            )
        if kind == "options":
            ids = payload.get("optionIds")
            if not isinstance(ids, list):
                raise ValueError("options payload needs an optionIds list")
            return LearnerAnswer(question_id, "options", option_ids=frozenset(map(str, ids)))
        if kind == "region":
            return LearnerAnswer(
                question_id, "region", region=SourceSpan.from_json(payload["span"])
            )
        raise ValueError(f"unknown answer payload kind {kind!r}")


@dataclass(frozen=True)
class GradeResult:
    verdict: str
    feedback: str
    canonical_answer: str | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "feedback": self.feedback,
            "canonicalAnswer": self.canonical_answer,
        }


def normalize_single_value(raw: str, expected_kind: str) -> str | None:
    """Canonicalize a free-text answer; None means unparseable.

    int/line: decimal, leading zeros tolerated. char: C, 'C' or "C" all
    mean C. string: one layer of matching quotes is stripped. boolean:
    case-insensitive true/false.
    """
    text = raw.strip()
    if expected_kind in ("int", "line"):
        candidate = text
        if candidate.startswith(("-", "+")):
            sign, digits = candidate[0], candidate[1:]
        else:
            sign, digits = "", candidate
        if not digits.isdigit():
            return None
        return str(int(sign + digits))
    if expected_kind == "char":
        if len(text) == 3 and text[0] == text[2] and text[0] in ("'", '"'):
            text = text[1]
        if len(text) != 1:
            return None
        return text
    if expected_kind == "string":
        if len(text) >= 2 and text[0] == text[-1] and text[0] in ("'", '"'):
            text = text[1:-1]
        return text
    if expected_kind == "boolean":
        lowered = text.lower()
        return lowered if lowered in ("true", "false") else None
    raise ValueError(f"unknown value kind {expected_kind!r}")


_UNPARSEABLE_HINT = {
    "int": "a whole number",
    "line": "a line number",
    "char": "a single character",
    "string": "a text value",
    "boolean": "true or false",
}


def _hint(question: QuestionInstance) -> str:
    facts = question.facts_used or {}
    if "entry" in facts:
        return f"trace step by step what happens when {facts['entry']} runs"
    if question.source_refs:
        lines = sorted({ref.start_line for ref in question.source_refs})
        if len(lines) == 1:
            return f"look again at line {lines[0]} of your code"
        return f"look again at lines {lines[0]}-{lines[-1]} of your code"
    if "function" in facts:
        return f"look again at your function {facts['function']}"
    return "have another look at your code"


def _canonical_answer_text(question: QuestionInstance) -> str | None:
    key = question.answer_key
    if isinstance(key, ExactValue):
        return key.value
    if isinstance(key, ValueSet):
        return " or ".join(key.values)
    if isinstance(key, OptionSetKey):
        by_id = {o.id: o.text for o in question.options}
        return ", ".join(by_id[i] for i in key.option_ids)
    if isinstance(key, CodeRegionKey):
        first = key.spans[0]
        return f"lines {first.start_line}-{first.end_line}"
    return None


def grade(question: QuestionInstance, answer: LearnerAnswer, attempt: int = 1) -> GradeResult:
    """Grade one answer. Pure: never touches history.

    `attempt` drives the reveal policy: from the second incorrect attempt
    on, the canonical answer is included in the result.
    """
    if answer.question_id != question.question_id:
        raise ValueError(
            f"answer is for {answer.question_id!r}, not {question.question_id!r}"
        )
    key = question.answer_key

    if isinstance(key, NoKey):
        if answer.kind != "text":
            raise ValueError("open-ended questions take a text answer")
        return GradeResult(
            VERDICT_NOT_AUTO_GRADABLE,
            "Thanks - your explanation was recorded for review.",
        )

    reveal = attempt >= 2
    canonical = _canonical_answer_text(question)

    if isinstance(key, (ExactValue, ValueSet)):
        if answer.kind != "text":
            raise ValueError("this question takes a single text value")
        normalized = normalize_single_value(answer.text or "", key.kind)
        if normalized is None:
            feedback = f"Could not read your answer as {_UNPARSEABLE_HINT[key.kind]}."
            return GradeResult(
                VERDICT_INCORRECT, feedback, canonical if reveal else None
            )
        accepted = (
            {normalize_single_value(key.value, key.kind)}
            if isinstance(key, ExactValue)
            else {normalize_single_value(v, key.kind) for v in key.values}
        )
        if normalized in accepted:
            return GradeResult(VERDICT_CORRECT, "Correct.", canonical)
        return GradeResult(
            VERDICT_INCORRECT,
            f"Not quite - {_hint(question)}.",
            canonical if reveal else None,
        )

    if isinstance(key, OptionSetKey):
        if answer.kind != "options":
            raise ValueError("this question takes a set of selected options")
        chosen = answer.option_ids or frozenset()
        if chosen == frozenset(key.option_ids):
            return GradeResult(VERDICT_CORRECT, "Correct.", canonical)
        valid_ids = {o.id for o in question.options}
        if not chosen <= valid_ids:
            raise ValueError("answer selects options this question does not have")
        return GradeResult(
            VERDICT_INCORRECT,
            f"The selection must match exactly - {_hint(question)}.",
            canonical if reveal else None,
        )

    if isinstance(key, CodeRegionKey):
        if answer.kind != "region":
            raise ValueError("this question takes a selected code region")
        begin, end = char_range(key.source, answer.region)
        for accepted_span in key.spans:
            a_begin, a_end = char_range(key.source, accepted_span)
            overlap = max(0, min(end, a_end) - max(begin, a_begin))
            if a_end > a_begin and overlap / (a_end - a_begin) >= REGION_OVERLAP_THRESHOLD:
                return GradeResult(VERDICT_CORRECT, "Correct.", canonical)
        return GradeResult(
            VERDICT_INCORRECT,
            f"That part of the code is not the one - {_hint(question)}.",
            canonical if reveal else None,
        )

    raise TypeError(f"unknown answer key {key!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Mastery history
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HistoryEvent:
    learner_id: str
    template_id: str
    timestamp: str  # RFC 3339
    verdict: str  # "correct" | "incorrect"

    def to_json(self) -> dict:
        return {
            "learnerId": self.learner_id,
            "templateId": self.template_id,
            "timestamp": self.timestamp,
            "verdict": self.verdict,
        }


class LearnerHistory:
    """Append-only record of graded first attempts, optionally file-backed."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.events: list[HistoryEvent] = []
        if self.path is not None and self.path.exists():
            with self.path.open("r", encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    data = json.loads(line)
                    self.events.append(
                        HistoryEvent(
                            data["learnerId"],
                            data["templateId"],
                            data["timestamp"],
                            data["verdict"],
                        )
                    )

    def record(
        self,
        learner_id: str,
        template_id: str,
        verdict: str,
        timestamp: str | None = None,
    ) -> HistoryEvent:
        if verdict not in (VERDICT_CORRECT, VERDICT_INCORRECT):
            raise ValueError(f"history records correct/incorrect only, not {verdict!r}")
        event = HistoryEvent(
            learner_id,
            template_id,
            timestamp or datetime.now(timezone.utc).isoformat(),
            verdict,
        )
        self.events.append(event)
        if self.path is not None:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(event.to_json()) + "\n")
        return event

    def correct_count(self, learner_id: str, template_id: str) -> int:
        return sum(
            1
            for e in self.events
            if e.learner_id == learner_id
            and e.template_id == template_id
            and e.verdict == VERDICT_CORRECT
        )

    def is_mastered(self, learner_id: str, template_id: str, threshold: int) -> bool:
        if threshold < 1:
            raise ValueError("mastery threshold must be at least 1")
        return self.correct_count(learner_id, template_id) >= threshold

    def summary(self, learner_id: str) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for event in self.events:
            if event.learner_id != learner_id:
                continue
            bucket = out.setdefault(event.template_id, {"correct": 0, "incorrect": 0})
            bucket[event.verdict] += 1
        return out


def record(history: LearnerHistory, learner_id: str, template_id: str, verdict: str) -> HistoryEvent:
    return history.record(learner_id, template_id, verdict)


def is_mastered(history: LearnerHistory, learner_id: str, template_id: str, threshold: int) -> bool:
    return history.is_mastered(learner_id, template_id, threshold)
