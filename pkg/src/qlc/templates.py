"""The built-in question template database.

Each template knows three things: its catalog metadata (id, comprehension
tag, answer type, text pattern), how to enumerate the concrete bindings a
program offers for it (best candidate first), and how to render a chosen
binding into question text, options, and an answer key.

Binding enumeration is deterministic; randomness only picks distractors
and shuffles options, driven by a seeded generator handed in per question.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .analysis import Role, StaticFacts
from .interp import AssignEvent, CallEnter, DynamicFacts, Value, canonical_text
from .span import SourceSpan

SCALES = ("atom", "block", "relational", "macro")
DIMENSIONS = ("text", "execution", "function")

MULTIPLE_CHOICE = "multipleChoice"
MULTI_SELECT = "multiSelect"
SINGLE_VALUE = "singleValue"
SELECT_IN_CODE = "selectInCode"
OPEN_ENDED = "openEnded"


@dataclass(frozen=True)
class BlockModelTag:
    scale: str
    dimension: str

    def __post_init__(self) -> None:
        if self.scale not in SCALES or self.dimension not in DIMENSIONS:
            raise ValueError(f"invalid comprehension tag {self.scale}-{self.dimension}")

    def to_json(self) -> dict:
        return {"scale": self.scale, "dimension": self.dimension}


@dataclass(frozen=True)
class Option:
    id: str
    text: str

    def to_json(self) -> dict:
        return {"id": self.id, "text": self.text}


# ---------------------------------------------------------------------------
# Answer keys
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactValue:
    value: str  # canonical text
    kind: str  # "int" | "char" | "string" | "boolean" | "line"

    def to_json(self) -> dict:
        return {"type": "exactValue", "value": self.value, "kind": self.kind}


@dataclass(frozen=True)
class ValueSet:
    values: tuple[str, ...]
    kind: str

    def to_json(self) -> dict:
        return {"type": "valueSet", "values": list(self.values), "kind": self.kind}


@dataclass(frozen=True)
class OptionSetKey:
    option_ids: tuple[str, ...]  # sorted

    def to_json(self) -> dict:
        return {"type": "optionSet", "optionIds": list(self.option_ids)}


@dataclass(frozen=True)
class CodeRegionKey:
    spans: tuple[SourceSpan, ...]
    source: str  # the submission text, for overlap measurement

    def to_json(self) -> dict:
        return {"type": "codeRegion", "spans": [s.to_json() for s in self.spans]}


@dataclass(frozen=True)
class NoKey:
    def to_json(self) -> dict:
        return {"type": "none"}


AnswerKey = ExactValue | ValueSet | OptionSetKey | CodeRegionKey | NoKey


def answer_key_from_json(doc: dict) -> "AnswerKey":
    kind = doc.get("type")
    if kind == "exactValue":
        return ExactValue(doc["value"], doc["kind"])
    if kind == "valueSet":
        return ValueSet(tuple(doc["values"]), doc["kind"])
    if kind == "optionSet":
        return OptionSetKey(tuple(doc["optionIds"]))
    if kind == "codeRegion":
        return CodeRegionKey(
            tuple(SourceSpan.from_json(s) for s in doc["spans"]), doc.get("source", "")
        )
    if kind == "none":
        return NoKey()
    raise ValueError(f"unknown answer key type {kind!r}")


@dataclass(frozen=True)
class QuestionInstance:
    question_id: str
    template_id: str
    tag: BlockModelTag
    answer_type: str
    text: str
    options: tuple[Option, ...]
    answer_key: AnswerKey
    source_refs: tuple[SourceSpan, ...]
    facts_used: dict

    def to_json(self, include_key: bool = False) -> dict:
        doc = {
            "questionId": self.question_id,
            "templateId": self.template_id,
            "tag": self.tag.to_json(),
            "answerType": self.answer_type,
            "text": self.text,
            "options": [o.to_json() for o in self.options],
            "sourceRefs": [s.to_json() for s in self.source_refs],
        }
        if include_key:
            doc["answerKey"] = self.answer_key.to_json()
            doc["factsUsed"] = dict(self.facts_used)
        return doc

    @staticmethod
    def from_json(doc: dict) -> "QuestionInstance":
        return QuestionInstance(
            question_id=doc["questionId"],
            template_id=doc["templateId"],
            tag=BlockModelTag(**doc["tag"]),
            answer_type=doc["answerType"],
            text=doc["text"],
            options=tuple(Option(o["id"], o["text"]) for o in doc["options"]),
            answer_key=answer_key_from_json(doc.get("answerKey", {"type": "none"})),
            source_refs=tuple(SourceSpan.from_json(s) for s in doc["sourceRefs"]),
            facts_used=doc.get("factsUsed", {}),
        )


@dataclass(frozen=True)
class Rendered:
    text: str
    options: tuple[Option, ...]
    key: AnswerKey
    source_refs: tuple[SourceSpan, ...]
    facts_used: dict


@dataclass
class FactsBundle:
    """Everything a template may interrogate: static facts plus the dynamic
    facts of each teacher entry that ran to completion."""

    static: StaticFacts
    dynamics: tuple[DynamicFacts, ...] = ()

    def ok_dynamics(self) -> list[DynamicFacts]:
        return [d for d in self.dynamics if not d.failed]


Binder = Callable[[FactsBundle], list[dict]]
Renderer = Callable[[FactsBundle, dict, random.Random], Rendered]


@dataclass(frozen=True)
class QlcTemplate:
    template_id: str
    tag: BlockModelTag
    answer_type: str
    text_pattern: str
    bind: Binder = field(compare=False)
    render: Renderer = field(compare=False)
    enabled_by_default: bool = True

    @property
    def auto_gradable(self) -> bool:
        return self.answer_type != OPEN_ENDED

    def to_json(self) -> dict:
        return {
            "templateId": self.template_id,
            "tag": self.tag.to_json(),
            "answerType": self.answer_type,
            "textPattern": self.text_pattern,
            "autoGradable": self.auto_gradable,
            "enabledByDefault": self.enabled_by_default,
        }


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

_ORDINALS = (
    "first", "second", "third", "fourth", "fifth", "sixth",
    "seventh", "eighth", "ninth", "tenth", "eleventh", "twelfth",
)


def _ordinal(n: int) -> str:
    if 1 <= n <= len(_ORDINALS):
        return _ORDINALS[n - 1]
    if n % 100 in (11, 12, 13):
        return f"{n}th"
    return f"{n}{ {1: 'st', 2: 'nd', 3: 'rd'}.get(n % 10, 'th') }"


_VALUE_NOUN = {"char": "character", "int": "number", "string": "string", "boolean": "value"}


def _line_ref(line: int) -> SourceSpan:
    # Line-level reference; the column is not meaningful for these.
    return SourceSpan(line, 1, line, 1)


def _shuffle(items: list, rng: random.Random) -> list:
    # Fisher-Yates on rng.random() only, so the shuffle algorithm is pinned
    # by this code rather than by the standard library's implementation.
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def _sample(pool: list, count: int, rng: random.Random) -> list:
    pool = list(pool)
    picked = []
    for _ in range(min(count, len(pool))):
        index = int(rng.random() * len(pool))
        picked.append(pool.pop(index))
    return picked


def _labeled_options(
    texts: list[str], correct: set[str], rng: random.Random
) -> tuple[tuple[Option, ...], OptionSetKey]:
    shuffled = _shuffle(texts, rng)
    options = tuple(Option(_label(i), text) for i, text in enumerate(shuffled))
    correct_ids = tuple(sorted(o.id for o in options if o.text in correct))
    return options, OptionSetKey(correct_ids)


def _label(index: int) -> str:
    # a..z, then aa, ab, ... (option pools stay tiny in practice)
    label = ""
    index += 1
    while index > 0:
        index, rem = divmod(index - 1, 26)
        label = chr(ord("a") + rem) + label
    return label


def _identifier_pool(static: StaticFacts) -> list[str]:
    names: list[str] = []
    for fn in static.functions:
        names.append(fn.name)
        for var in fn.variables:
            names.append(var.name)
    seen: set[str] = set()
    out = []
    for name in names:
        if name not in seen:
            seen.add(name)
            out.append(name)
    return out


def _distractors(pool: list[str], exclude: set[str], rng: random.Random, count: int = 3) -> list[str]:
    candidates = [name for name in pool if name not in exclude]
    return _sample(candidates, count, rng)


# ---------------------------------------------------------------------------
# Template definitions
# ---------------------------------------------------------------------------


def _bind_varnames(facts: FactsBundle) -> list[dict]:
    ranked = sorted(
        (fn for fn in facts.static.functions if fn.variables),
        key=lambda fn: (-len(fn.variables), fn.span.start_line),
    )
    return [{"function": fn.name} for fn in ranked]


def _render_varnames(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    fn = facts.static.function(binding["function"])
    key_names = sorted({v.name for v in fn.variables})
    pool = _identifier_pool(facts.static) + [
        text for text in facts.static.literals if text not in key_names
    ]
    distractors = _distractors(pool, set(key_names), rng)
    options, key = _labeled_options(key_names + distractors, set(key_names), rng)
    return Rendered(
        text=f"Which of the following are variable names in your function {fn.name}?",
        options=options,
        key=key,
        source_refs=(fn.span,),
        facts_used={"function": fn.name, "variableNames": key_names},
    )


def _bind_recursive(facts: FactsBundle) -> list[dict]:
    if len(facts.static.functions) >= 2 and facts.static.recursive_functions:
        return [{}]
    return []


def _render_recursive(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    names = [fn.name for fn in facts.static.functions]
    recursive = sorted(facts.static.recursive_functions)
    options, key = _labeled_options(list(names), set(recursive), rng)
    return Rendered(
        text=f"You wrote {len(names)} functions. Which of those are recursive?",
        options=options,
        key=key,
        source_refs=tuple(fn.span for fn in facts.static.functions),
        facts_used={"functionCount": len(names), "recursiveFunctions": recursive},
    )


def _bind_paramnames(facts: FactsBundle) -> list[dict]:
    ranked = sorted(
        (fn for fn in facts.static.functions if fn.param_names),
        key=lambda fn: (-len(fn.param_names), fn.span.start_line),
    )
    return [{"function": fn.name} for fn in ranked]


def _render_paramnames(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    fn = facts.static.function(binding["function"])
    params = list(fn.param_names)
    distractors = _distractors(_identifier_pool(facts.static), set(params), rng)
    options, key = _labeled_options(params + distractors, set(params), rng)
    return Rendered(
        text=f"What are the parameter names of your function {fn.name}?",
        options=options,
        key=key,
        source_refs=(fn.span,),
        facts_used={"function": fn.name, "paramNames": params},
    )


def _bind_loopend(facts: FactsBundle) -> list[dict]:
    ranked = sorted(
        facts.static.loops,
        key=lambda l: (-(l.closing_brace_line - l.start_line), l.loop_id),
    )
    return [{"loopId": l.loop_id} for l in ranked]


def _loop_by_id(static: StaticFacts, loop_id: int):
    for loop in static.loops:
        if loop.loop_id == loop_id:
            return loop
    raise ValueError(f"unknown loop id {loop_id}")


def _render_loopend(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    loop = _loop_by_id(facts.static, binding["loopId"])
    accepted = sorted({str(loop.closing_brace_line), str(loop.last_body_stmt_line)})
    return Rendered(
        text=(
            f"A loop starts on line {loop.start_line}. "
            "Enter the number of the last line inside this loop."
        ),
        options=(),
        key=ValueSet(tuple(accepted), "line"),
        source_refs=(_line_ref(loop.start_line), _line_ref(loop.closing_brace_line)),
        facts_used={
            "loopId": loop.loop_id,
            "startLine": loop.start_line,
            "lastBodyStmtLine": loop.last_body_stmt_line,
            "closingBraceLine": loop.closing_brace_line,
        },
    )


def _bind_declline(facts: FactsBundle) -> list[dict]:
    decl_lines: set[int] = set()
    for fn in facts.static.functions:
        for var in fn.variables:
            decl_lines.add(var.decl_line)
    by_line: dict[int, set[int]] = {}
    for use in facts.static.use_sites:
        by_line.setdefault(use.line, set()).add(use.decl_line)
    candidates = []
    for line, decls in by_line.items():
        if len(decls) != 1:
            continue  # several variables with different declarations: ambiguous
        decl_line = next(iter(decls))
        if decl_line == line or line in decl_lines:
            continue  # same line, or a line that also declares something
        candidates.append({"useLine": line, "declLine": decl_line})
    candidates.sort(key=lambda c: (-abs(c["useLine"] - c["declLine"]), c["useLine"]))
    return candidates


def _render_declline(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    use_line = binding["useLine"]
    decl_line = binding["declLine"]
    names = sorted(
        {use.name for use in facts.static.use_sites if use.line == use_line}
    )
    return Rendered(
        text=(
            f"Line {use_line} uses a variable. "
            "Enter the line number where that variable is declared."
        ),
        options=(),
        key=ExactValue(str(decl_line), "line"),
        source_refs=(_line_ref(use_line),),
        facts_used={"useLine": use_line, "declLine": decl_line, "variables": names},
    )


def _bind_assignval(facts: FactsBundle) -> list[dict]:
    recursive = facts.static.recursive_functions
    candidates = []
    for entry_index, dyn in enumerate(facts.dynamics):
        if dyn.failed:
            continue
        per_site: dict[tuple[str, str, int, int], list[tuple[int, Value]]] = {}
        occurrence_counter: dict[tuple[str, str, int], int] = {}
        invocation_totals: dict[str, int] = {}
        for event in dyn.trace:
            if isinstance(event, AssignEvent):
                var_key = (event.var_name, event.fn_name, event.invocation_index)
                occurrence_counter[var_key] = occurrence_counter.get(var_key, 0) + 1
                site = var_key + (event.line,)
                per_site.setdefault(site, []).append(
                    (occurrence_counter[var_key], event.value)
                )
            elif isinstance(event, CallEnter):
                invocation_totals[event.fn_name] = max(
                    invocation_totals.get(event.fn_name, 0), event.invocation_index
                )
        for (var, fn, inv, line), hits in per_site.items():
            if len(hits) != 1:
                continue  # the line ran more than once in this invocation: ambiguous
            occurrence, value = hits[0]
            candidates.append(
                {
                    "entryIndex": entry_index,
                    "entry": dyn.entry_text,
                    "entryFunction": dyn.entry.fn_name,
                    "var": var,
                    "function": fn,
                    "invocation": inv,
                    "occurrence": occurrence,
                    "line": line,
                    "value": value,
                    "invocationTotal": invocation_totals.get(fn, 1),
                }
            )
    candidates.sort(
        key=lambda c: (
            0 if c["function"] == c["entryFunction"] else 1,
            0 if (c["function"] in recursive and c["invocation"] >= 2) else 1,
            c["invocation"],
            -c["line"],
            c["var"],
            c["entryIndex"],
        )
    )
    return candidates


def _render_assignval(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    value: Value = binding["value"]
    noun = _VALUE_NOUN.get(value.kind, "value")
    if binding["invocationTotal"] > 1:
        text = (
            f"When executing {binding['entry']}, which {noun} is assigned to "
            f"{binding['var']} during the {_ordinal(binding['invocation'])} invocation "
            f"of {binding['function']}?"
        )
    else:
        text = (
            f"What is assigned to variable {binding['var']} on line {binding['line']} "
            f"when executing {binding['entry']}?"
        )
    kind = {"int": "int", "char": "char", "string": "string", "boolean": "boolean"}[value.kind]
    return Rendered(
        text=text,
        options=(),
        key=ExactValue(canonical_text(value), kind),
        source_refs=(_line_ref(binding["line"]),),
        facts_used={
            "entry": binding["entry"],
            "variable": binding["var"],
            "function": binding["function"],
            "invocationIndex": binding["invocation"],
            "occurrence": binding["occurrence"],
            "line": binding["line"],
            "value": canonical_text(value),
        },
    )


def _bind_loopiter(facts: FactsBundle) -> list[dict]:
    candidates = []
    for entry_index, dyn in enumerate(facts.dynamics):
        if dyn.failed:
            continue
        for loop in facts.static.loops:
            count = dyn.loop_iterations.get(loop.loop_id, 0)
            if count >= 1:
                candidates.append(
                    {
                        "entryIndex": entry_index,
                        "entry": dyn.entry_text,
                        "loopId": loop.loop_id,
                        "startLine": loop.start_line,
                        "count": count,
                    }
                )
    candidates.sort(key=lambda c: (-c["count"], c["loopId"], c["entryIndex"]))
    return candidates


def _render_loopiter(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    several = len(facts.ok_dynamics()) > 1
    if several:
        text = (
            f"When executing {binding['entry']}, how many iterations are performed "
            f"by the loop starting in line {binding['startLine']}?"
        )
    else:
        text = (
            "During the program execution, how many iterations are performed "
            f"by the loop starting in line {binding['startLine']}?"
        )
    return Rendered(
        text=text,
        options=(),
        key=ExactValue(str(binding["count"]), "int"),
        source_refs=(_line_ref(binding["startLine"]),),
        facts_used={
            "entry": binding["entry"],
            "loopId": binding["loopId"],
            "startLine": binding["startLine"],
            "iterations": binding["count"],
        },
    )


_ROLE_DESCRIPTIONS = {
    Role.FIXED_VALUE: "fixed value: it is set once and never changed afterwards",
    Role.STEPPER: "stepper: it moves through a sequence of values in predictable steps",
    Role.MOST_WANTED_HOLDER: "most-wanted holder: it keeps the best value found so far",
    Role.GATHERER: "gatherer: it accumulates a result from the values it combines",
    Role.OTHER: "other: none of the listed patterns fits",
}
_SPECIAL_ROLES = (Role.STEPPER, Role.GATHERER, Role.MOST_WANTED_HOLDER)


def _make_bind_varrole(include_parameters: bool) -> Binder:
    def bind_varrole(facts: FactsBundle) -> list[dict]:
        candidates = []
        for fn in facts.static.functions:
            for var in fn.variables:
                if var.is_parameter and not include_parameters:
                    continue
                candidates.append(
                    {
                        "function": fn.name,
                        "var": var.name,
                        "declLine": var.decl_line,
                        "role": var.role.value,
                    }
                )
        candidates.sort(
            key=lambda c: (
                0 if Role(c["role"]) in _SPECIAL_ROLES else 1,
                -c["declLine"],
                c["var"],
            )
        )
        return candidates

    return bind_varrole


def _render_varrole(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    role = Role(binding["role"])
    correct_text = _ROLE_DESCRIPTIONS[role]
    others = [_ROLE_DESCRIPTIONS[r] for r in Role if r is not role]
    distractors = _sample(others, 3, rng)
    options, key = _labeled_options([correct_text] + distractors, {correct_text}, rng)
    return Rendered(
        text=f"Which of the following best describes the role of your variable {binding['var']}?",
        options=options,
        key=key,
        source_refs=(_line_ref(binding["declLine"]),),
        facts_used={
            "variable": binding["var"],
            "function": binding["function"],
            "declLine": binding["declLine"],
            "role": binding["role"],
        },
    )


def _bind_stackdepth(facts: FactsBundle) -> list[dict]:
    candidates = []
    for entry_index, dyn in enumerate(facts.dynamics):
        if dyn.failed or dyn.max_stack_depth < 2:
            continue
        candidates.append(
            {"entryIndex": entry_index, "entry": dyn.entry_text, "depth": dyn.max_stack_depth}
        )
    candidates.sort(key=lambda c: (-c["depth"], c["entryIndex"]))
    return candidates


def _render_stackdepth(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    return Rendered(
        text=f"How deep does the call stack grow when executing {binding['entry']}?",
        options=(),
        key=ExactValue(str(binding["depth"]), "int"),
        source_refs=(),
        facts_used={"entry": binding["entry"], "maxStackDepth": binding["depth"]},
    )


def _bind_condpurpose(facts: FactsBundle) -> list[dict]:
    return [
        {"line": line, "function": fn}
        for line, fn in sorted(facts.static.conditional_lines)
    ]


def _render_condpurpose(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    return Rendered(
        text=f"Describe the purpose of the condition on line {binding['line']}.",
        options=(),
        key=NoKey(),
        source_refs=(_line_ref(binding["line"]),),
        facts_used={"line": binding["line"], "function": binding["function"]},
    )


def _bind_namejustify(facts: FactsBundle) -> list[dict]:
    candidates = []
    for fn in facts.static.functions:
        for var in fn.variables:
            if var.is_parameter:
                continue
            candidates.append(
                {
                    "var": var.name,
                    "declLine": var.decl_line,
                    "function": fn.name,
                    "uses": len(var.use_lines),
                }
            )
    candidates.sort(key=lambda c: (-c["uses"], c["declLine"], c["var"]))
    return candidates


def _render_namejustify(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    return Rendered(
        text=(
            f"Justify your choice of name {binding['var']} for the variable declared "
            f"on line {binding['declLine']} - do you have a better suggestion?"
        ),
        options=(),
        key=NoKey(),
        source_refs=(_line_ref(binding["declLine"]),),
        facts_used={"variable": binding["var"], "declLine": binding["declLine"]},
    )


def _bind_looppurpose(facts: FactsBundle) -> list[dict]:
    ranked = sorted(
        facts.static.loops,
        key=lambda l: (-(l.closing_brace_line - l.start_line), l.loop_id),
    )
    return [
        {"loopId": l.loop_id, "startLine": l.start_line, "function": l.enclosing_function}
        for l in ranked
    ]


def _render_looppurpose(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    return Rendered(
        text=(
            f"Explain, in your own words, the purpose of the loop that begins on line "
            f"{binding['startLine']}, and how that loop helps method {binding['function']} "
            "accomplish its task."
        ),
        options=(),
        key=NoKey(),
        source_refs=(_line_ref(binding["startLine"]),),
        facts_used={
            "loopId": binding["loopId"],
            "startLine": binding["startLine"],
            "function": binding["function"],
        },
    )


def _bind_never(facts: FactsBundle) -> list[dict]:
    # Requires teacher-provided inputs (subgoal annotations or a second
    # program) that are not part of this system's inputs.
    return []


def _render_never(facts: FactsBundle, binding: dict, rng: random.Random) -> Rendered:
    raise ValueError("this template cannot be instantiated from program facts alone")


def build_catalog(role_questions_include_parameters: bool = False) -> list[QlcTemplate]:
    """All built-in templates, in catalog order.

    Parameters are left out of role questions by default (they are rarely
    reassigned, so their role is almost always the same); pass True to
    include them.
    """
    return [
        QlcTemplate(
            "T-VARNAMES", BlockModelTag("atom", "text"), MULTI_SELECT,
            "Which of the following are variable names in your function [F]?",
            _bind_varnames, _render_varnames,
        ),
        QlcTemplate(
            "T-RECURSIVE", BlockModelTag("relational", "text"), MULTI_SELECT,
            "You wrote [X] functions. Which of those are recursive?",
            _bind_recursive, _render_recursive,
        ),
        QlcTemplate(
            "T-PARAMNAMES", BlockModelTag("atom", "text"), MULTI_SELECT,
            "What are the parameter names of your function [F]?",
            _bind_paramnames, _render_paramnames,
        ),
        QlcTemplate(
            "T-LOOPEND", BlockModelTag("block", "text"), SINGLE_VALUE,
            "A loop starts on line [N]. Enter the number of the last line inside this loop.",
            _bind_loopend, _render_loopend,
        ),
        QlcTemplate(
            "T-DECLLINE", BlockModelTag("relational", "text"), SINGLE_VALUE,
            "Line [N] uses a variable. Enter the line number where that variable is declared.",
            _bind_declline, _render_declline,
        ),
        QlcTemplate(
            "T-ASSIGNVAL", BlockModelTag("atom", "execution"), SINGLE_VALUE,
            "What is assigned to variable [V] on line [N] when executing [E]?",
            _bind_assignval, _render_assignval,
        ),
        QlcTemplate(
            "T-LOOPITER", BlockModelTag("block", "execution"), SINGLE_VALUE,
            "During the program execution, how many iterations are performed by the loop "
            "starting in line [N]?",
            _bind_loopiter, _render_loopiter,
        ),
        QlcTemplate(
            "T-VARROLE", BlockModelTag("relational", "execution"), MULTIPLE_CHOICE,
            "Which of the following best describes the role of your variable [V]?",
            _make_bind_varrole(role_questions_include_parameters), _render_varrole,
        ),
        QlcTemplate(
            "T-STACKDEPTH", BlockModelTag("relational", "execution"), SINGLE_VALUE,
            "How deep does the call stack grow when executing [F]?",
            _bind_stackdepth, _render_stackdepth,
        ),
        QlcTemplate(
            "T-CONDPURPOSE", BlockModelTag("atom", "function"), OPEN_ENDED,
            "Describe the purpose of the condition on line [N].",
            _bind_condpurpose, _render_condpurpose,
        ),
        QlcTemplate(
            "T-NAMEJUSTIFY", BlockModelTag("block", "function"), OPEN_ENDED,
            "Justify your choice of name [V] for the variable declared on line [N] - "
            "do you have a better suggestion?",
            _bind_namejustify, _render_namejustify,
        ),
        QlcTemplate(
            "T-SUBGOALSELECT", BlockModelTag("block", "function"), SELECT_IN_CODE,
            "Select the part of your program that is responsible for [X].",
            _bind_never, _render_never, enabled_by_default=False,
        ),
        QlcTemplate(
            "T-LOOPPURPOSE", BlockModelTag("relational", "function"), OPEN_ENDED,
            "Explain, in your own words, the purpose of the loop that begins on line [N], "
            "and how that loop helps method [M] accomplish its task.",
            _bind_looppurpose, _render_looppurpose,
        ),
        QlcTemplate(
            "T-CROSSPROGRAM", BlockModelTag("relational", "function"), SELECT_IN_CODE,
            "Here is a little example program that has some similarities with yours. "
            "Select the part of your program that serves a similar purpose as the "
            "highlighted code in the example.",
            _bind_never, _render_never, enabled_by_default=False,
        ),
    ]


def catalog_by_id() -> dict[str, QlcTemplate]:
    return {t.template_id: t for t in build_catalog()}
