"""Question engine: decide which templates apply to a program, pick among
them under teacher settings and seeded randomness, and instantiate them.

Selection draws templates by weighted sampling (weight = the teacher's
weight for the template's comprehension dimension) without replacement,
never repeating a template within one question set, and skipping templates
the learner has already mastered. Each drawn template is instantiated with
its highest-preference binding, so the chosen facts are a deterministic
function of the program; randomness varies which questions are asked and
how options are arranged. All randomness flows from one caller-provided
seed through named child streams, making output byte-stable across runs
and processes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .analysis import StaticFacts, analyze
from .errors import AnalysisError, ParseFailure
from .grading import LearnerHistory
from .interp import DynamicFacts, Fuel, execute
from .nodes import Call, Program
from .templates import (
    FactsBundle,
    QlcTemplate,
    QuestionInstance,
    build_catalog,
)

DIMENSION_DEFAULT_WEIGHTS = {"text": 1.0, "execution": 1.0, "function": 1.0}


class ConfigError(ValueError):
    """A teacher configuration document is malformed."""


@dataclass(frozen=True)
class SeedPolicy:
    kind: str  # "fixed" | "perSubmission"
    seed: int | None = None

    @staticmethod
    def from_json(data) -> "SeedPolicy":
        if data == "perSubmission":
            return SeedPolicy("perSubmission")
        if isinstance(data, dict) and set(data) == {"fixed"} and isinstance(data["fixed"], int):
            return SeedPolicy("fixed", data["fixed"])
        raise ConfigError(
            'seedPolicy must be "perSubmission" or {"fixed": <integer>}'
        )

    def to_json(self):
        if self.kind == "fixed":
            return {"fixed": self.seed}
        return "perSubmission"


@dataclass(frozen=True)
class TeacherConfig:
    enabled_templates: frozenset[str]
    max_questions: int = 3
    level_weights: dict[str, float] = field(
        default_factory=lambda: dict(DIMENSION_DEFAULT_WEIGHTS)
    )
    mastery_threshold: int = 3
    seed_policy: SeedPolicy = SeedPolicy("perSubmission")

    def __post_init__(self) -> None:
        if not self.enabled_templates:
            raise ConfigError("at least one template must be enabled")
        if self.max_questions < 1:
            raise ConfigError("maxQuestions must be at least 1")
        if self.mastery_threshold < 1:
            raise ConfigError("masteryThreshold must be at least 1")
        for dimension, weight in self.level_weights.items():
            if dimension not in DIMENSION_DEFAULT_WEIGHTS:
                raise ConfigError(f"unknown dimension {dimension!r} in levelWeights")
            if weight < 0:
                raise ConfigError("levelWeights must be non-negative")

    @staticmethod
    def default() -> "TeacherConfig":
        enabled = frozenset(t.template_id for t in build_catalog() if t.enabled_by_default)
        return TeacherConfig(enabled_templates=enabled)

    @staticmethod
    def from_json(data: dict) -> "TeacherConfig":
        if not isinstance(data, dict):
            raise ConfigError("teacher config must be a JSON object")
        known = {"enabledTemplates", "maxQuestions", "levelWeights", "masteryThreshold", "seedPolicy"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        catalog_ids = {t.template_id for t in build_catalog()}
        if "enabledTemplates" in data:
            requested = data["enabledTemplates"]
            if not isinstance(requested, list) or not all(isinstance(t, str) for t in requested):
                raise ConfigError("enabledTemplates must be a list of template ids")
            bogus = set(requested) - catalog_ids
            if bogus:
                raise ConfigError(f"unknown template ids: {', '.join(sorted(bogus))}")
            enabled = frozenset(requested)
        else:
            enabled = frozenset(t.template_id for t in build_catalog() if t.enabled_by_default)
        weights = dict(DIMENSION_DEFAULT_WEIGHTS)
        if "levelWeights" in data:
            if not isinstance(data["levelWeights"], dict):
                raise ConfigError("levelWeights must be an object")
            # A partial map means "everything else is off".
            weights = {dim: 0.0 for dim in DIMENSION_DEFAULT_WEIGHTS}
            for dim, weight in data["levelWeights"].items():
                if not isinstance(weight, (int, float)):
                    raise ConfigError("levelWeights values must be numbers")
                weights[str(dim)] = float(weight)
        try:
            max_questions = int(data.get("maxQuestions", 3))
            mastery_threshold = int(data.get("masteryThreshold", 3))
        except (TypeError, ValueError):
            raise ConfigError("maxQuestions and masteryThreshold must be integers") from None
        seed_policy = (
            SeedPolicy.from_json(data["seedPolicy"]) if "seedPolicy" in data
            else SeedPolicy("perSubmission")
        )
        return TeacherConfig(
            enabled_templates=enabled,
            max_questions=max_questions,
            level_weights=weights,
            mastery_threshold=mastery_threshold,
            seed_policy=seed_policy,
        )

    def to_json(self) -> dict:
        return {
            "enabledTemplates": sorted(self.enabled_templates),
            "maxQuestions": self.max_questions,
            "levelWeights": {k: self.level_weights.get(k, 0.0) for k in sorted(DIMENSION_DEFAULT_WEIGHTS)},
            "masteryThreshold": self.mastery_threshold,
            "seedPolicy": self.seed_policy.to_json(),
        }


class GenerationUnavailable(Exception):
    """The program failed the static checks, so no questions can be produced."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(diagnostics))


def applicable_templates(
    static: StaticFacts,
    dynamics: tuple[DynamicFacts, ...] | list[DynamicFacts] = (),
    db: list[QlcTemplate] | None = None,
    enabled: frozenset[str] | None = None,
) -> list[tuple[QlcTemplate, list[dict]]]:
    """Templates whose requirements hold, each with its candidate bindings,
    best candidate first. Executions that ended in a runtime error never
    contribute bindings."""
    db = db if db is not None else build_catalog()
    facts = FactsBundle(static=static, dynamics=tuple(dynamics))
    out = []
    for template in db:
        if enabled is not None and template.template_id not in enabled:
            continue
        bindings = template.bind(facts)
        if bindings:
            out.append((template, bindings))
    return out


def select_templates(
    applicable: list[tuple[QlcTemplate, list[dict]]],
    config: TeacherConfig,
    history: LearnerHistory | None,
    learner_id: str | None,
    seed: int,
) -> list[tuple[QlcTemplate, dict]]:
    """Draw up to maxQuestions templates, each paired with its preferred binding."""
    candidates: list[tuple[QlcTemplate, dict, float]] = []
    for template, bindings in applicable:
        if template.template_id not in config.enabled_templates:
            continue
        if history is not None and learner_id is not None:
            if history.is_mastered(learner_id, template.template_id, config.mastery_threshold):
                continue
        weight = config.level_weights.get(template.tag.dimension, 0.0)
        if weight <= 0:
            continue
        candidates.append((template, bindings[0], weight))

    rng = random.Random(f"select|{seed}")
    chosen: list[tuple[QlcTemplate, dict]] = []
    while candidates and len(chosen) < config.max_questions:
        total = sum(weight for _, _, weight in candidates)
        point = rng.random() * total
        cumulative = 0.0
        index = len(candidates) - 1
        for i, (_, _, weight) in enumerate(candidates):
            cumulative += weight
            if point < cumulative:
                index = i
                break
        template, binding, _ = candidates.pop(index)
        chosen.append((template, binding))
    return chosen


def instantiate(
    template: QlcTemplate,
    binding: dict,
    static: StaticFacts,
    dynamics: tuple[DynamicFacts, ...] | list[DynamicFacts] = (),
    seed: int = 0,
    question_id: str | None = None,
) -> QuestionInstance:
    """Fill the template's placeholders from the bound facts.

    A binding that cannot be rendered is a bug in the template's
    requirements and raises ValueError rather than being skipped."""
    facts = FactsBundle(static=static, dynamics=tuple(dynamics))
    rng = random.Random(f"{seed}|{template.template_id}")
    rendered = template.render(facts, binding, rng)
    if "[" in rendered.text and "]" in rendered.text:
        raise ValueError(
            f"{template.template_id} rendered with an unfilled placeholder: {rendered.text!r}"
        )
    return QuestionInstance(
        question_id=question_id or f"q-{template.template_id}",
        template_id=template.template_id,
        tag=template.tag,
        answer_type=template.answer_type,
        text=rendered.text,
        options=rendered.options,
        answer_key=rendered.key,
        source_refs=rendered.source_refs,
        facts_used=rendered.facts_used,
    )


def generate(
    program: Program,
    entries: list[Call],
    config: TeacherConfig,
    history: LearnerHistory | None = None,
    learner_id: str | None = None,
    seed: int = 0,
    fuel: Fuel | None = None,
    db: list[QlcTemplate] | None = None,
) -> list[QuestionInstance]:
    """The whole pipeline: analyze, execute each entry, pick and fill templates.

    Raises GenerationUnavailable when static analysis rejects the program;
    callers may still accept the submission itself."""
    try:
        static = analyze(program)
    except (AnalysisError, ParseFailure) as exc:
        raise GenerationUnavailable([str(exc)]) from exc
    dynamics = tuple(execute(program, entry, fuel) for entry in entries)
    applicable = applicable_templates(static, dynamics, db, enabled=config.enabled_templates)
    chosen = select_templates(applicable, config, history, learner_id, seed)
    return [
        instantiate(template, binding, static, dynamics, seed)
        for template, binding in chosen
    ]
