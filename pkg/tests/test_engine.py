import json
import random

import pytest

from helpers import GOLDEN_SOURCE

from qlc.analysis import analyze, classify_variable_role, detect_recursion, find_declaration
from qlc.engine import (
    ConfigError,
    GenerationUnavailable,
    SeedPolicy,
    TeacherConfig,
    applicable_templates,
    generate,
    instantiate,
    select_templates,
)
from qlc.grading import LearnerHistory
from qlc.interp import assignment_value, execute, loop_iterations, max_call_depth
from qlc.parser import parse_entry_expression, parse_program
from qlc.span import split_lines
from qlc.templates import (
    ExactValue,
    MULTI_SELECT,
    MULTIPLE_CHOICE,
    OPEN_ENDED,
    OptionSetKey,
    ValueSet,
    build_catalog,
    catalog_by_id,
)

LOOPY_SOURCE = (
    "static char maxc(String w) {\n"          # 1
    "  char best = w.charAt(0);\n"            # 2
    "  for (int i = 1; i < w.length(); i = i + 1) {\n"  # 3
    "    char c = w.charAt(i);\n"             # 4
    "    if (c > best) {\n"                   # 5
    "      best = c;\n"                       # 6
    "    }\n"                                 # 7
    "  }\n"                                   # 8
    "  return best;\n"                        # 9
    "}\n"
)


def _bundle(source: str, entries: list[str]):
    program = parse_program(source)
    static = analyze(program)
    dynamics = tuple(
        execute(program, parse_entry_expression(e)) for e in entries
    )
    return program, static, dynamics


# -- applicability --------------------------------------------------------------


def test_golden_applicability(golden_program, golden_static, golden_entries):
    dynamics = tuple(execute(golden_program, e) for e in golden_entries)
    ids = {t.template_id for t, _ in applicable_templates(golden_static, dynamics)}
    assert "T-RECURSIVE" in ids
    assert "T-STACKDEPTH" in ids
    assert "T-LOOPEND" not in ids  # no loops in the program
    assert "T-LOOPITER" not in ids
    assert "T-SUBGOALSELECT" not in ids  # needs inputs this system does not take


def test_loop_program_applicability():
    _, static, dynamics = _bundle(LOOPY_SOURCE, ['maxc("banana")'])
    ids = {t.template_id for t, _ in applicable_templates(static, dynamics)}
    assert {"T-LOOPEND", "T-LOOPITER", "T-LOOPPURPOSE"} <= ids
    assert "T-STACKDEPTH" not in ids  # single frame only
    assert "T-RECURSIVE" not in ids  # one function, none recursive


def test_empty_program_has_no_applicable_templates():
    static = analyze(parse_program(""))
    assert applicable_templates(static, ()) == []


def test_dynamic_templates_need_a_clean_execution(golden_program, golden_static):
    crash = execute(golden_program, parse_entry_expression('smallestFrom("", 0)'))
    assert crash.failed
    ids = {t.template_id for t, _ in applicable_templates(golden_static, (crash,))}
    assert "T-STACKDEPTH" not in ids
    assert "T-ASSIGNVAL" not in ids
    assert "T-RECURSIVE" in ids  # static templates unaffected


# -- selection -------------------------------------------------------------------


def _golden_applicable(golden_program, golden_static, golden_entries):
    dynamics = tuple(execute(golden_program, e) for e in golden_entries)
    return applicable_templates(golden_static, dynamics)


def test_selection_is_deterministic(golden_program, golden_static, golden_entries):
    applicable = _golden_applicable(golden_program, golden_static, golden_entries)
    config = TeacherConfig.default()
    first = select_templates(applicable, config, LearnerHistory(), "a", seed=42)
    second = select_templates(applicable, config, LearnerHistory(), "a", seed=42)
    assert [(t.template_id, b) for t, b in first] == [(t.template_id, b) for t, b in second]


def test_selection_respects_max_questions_and_uniqueness(
    golden_program, golden_static, golden_entries
):
    applicable = _golden_applicable(golden_program, golden_static, golden_entries)
    for seed in range(30):
        config = TeacherConfig.default()
        chosen = select_templates(applicable, config, None, None, seed=seed)
        ids = [t.template_id for t, _ in chosen]
        assert len(ids) <= config.max_questions
        assert len(set(ids)) == len(ids)


def test_selection_filters_mastered_templates(golden_program, golden_static, golden_entries):
    applicable = _golden_applicable(golden_program, golden_static, golden_entries)
    config = TeacherConfig(
        enabled_templates=frozenset({"T-RECURSIVE", "T-STACKDEPTH"}),
        max_questions=5,
        mastery_threshold=2,
    )
    history = LearnerHistory()
    history.record("amy", "T-RECURSIVE", "correct")
    history.record("amy", "T-RECURSIVE", "correct")
    chosen = select_templates(applicable, config, history, "amy", seed=1)
    assert [t.template_id for t, _ in chosen] == ["T-STACKDEPTH"]
    # Another learner is unaffected.
    other = select_templates(applicable, config, history, "ben", seed=1)
    assert {t.template_id for t, _ in other} == {"T-RECURSIVE", "T-STACKDEPTH"}


def test_zero_weight_dimension_is_never_selected(golden_program, golden_static, golden_entries):
    applicable = _golden_applicable(golden_program, golden_static, golden_entries)
    config = TeacherConfig(
        enabled_templates=frozenset(t.template_id for t in build_catalog()),
        max_questions=10,
        level_weights={"text": 0.0, "execution": 1.0, "function": 1.0},
    )
    for seed in range(20):
        chosen = select_templates(applicable, config, None, None, seed=seed)
        assert all(t.tag.dimension != "text" for t, _ in chosen)


# -- instantiation: golden texts and keys -----------------------------------------


def _instantiate_golden(template_id: str, golden_program, golden_static, golden_entries, seed=7):
    dynamics = tuple(execute(golden_program, e) for e in golden_entries)
    applicable = applicable_templates(golden_static, dynamics)
    template, bindings = next(
        (t, b) for t, b in applicable if t.template_id == template_id
    )
    return instantiate(template, bindings[0], golden_static, dynamics, seed=seed)


def test_recursive_question_matches_expected_text(golden_program, golden_static, golden_entries):
    q = _instantiate_golden("T-RECURSIVE", golden_program, golden_static, golden_entries)
    assert q.text == "You wrote 2 functions. Which of those are recursive?"
    assert {o.text for o in q.options} == {"smallest", "smallestFrom"}
    correct = {o.text for o in q.options if o.id in q.answer_key.option_ids}
    assert correct == {"smallestFrom"}


def test_paramnames_question_prefers_richer_function(golden_program, golden_static, golden_entries):
    q = _instantiate_golden("T-PARAMNAMES", golden_program, golden_static, golden_entries)
    assert q.text == "What are the parameter names of your function smallestFrom?"
    correct = {o.text for o in q.options if o.id in q.answer_key.option_ids}
    assert correct == {"word", "index"}
    assert len(q.options) == 5  # two keys plus three distractors


def test_stackdepth_question_uses_deepest_entry(golden_program, golden_static, golden_entries):
    q = _instantiate_golden("T-STACKDEPTH", golden_program, golden_static, golden_entries)
    assert q.text == 'How deep does the call stack grow when executing smallest("ABBA")?'
    assert q.answer_key == ExactValue("5", "int")


def test_assignval_question_reproduces_second_invocation_flavor(
    golden_program, golden_static, golden_entries
):
    q = _instantiate_golden("T-ASSIGNVAL", golden_program, golden_static, golden_entries)
    assert q.text == (
        'When executing smallestFrom("ACDC", 0), which character is assigned to '
        "rest during the second invocation of smallestFrom?"
    )
    assert q.answer_key == ExactValue("C", "char")


def test_varrole_question_targets_rest(golden_program, golden_static, golden_entries):
    q = _instantiate_golden("T-VARROLE", golden_program, golden_static, golden_entries)
    assert q.text == "Which of the following best describes the role of your variable rest?"
    assert q.answer_type == MULTIPLE_CHOICE
    assert len(q.options) == 4
    assert len(q.answer_key.option_ids) == 1
    correct = next(o for o in q.options if o.id in q.answer_key.option_ids)
    assert correct.text.startswith("fixed value")


def test_loopend_key_accepts_both_line_readings():
    _, static, dynamics = _bundle(LOOPY_SOURCE, ['maxc("banana")'])
    applicable = applicable_templates(static, dynamics)
    template, bindings = next((t, b) for t, b in applicable if t.template_id == "T-LOOPEND")
    q = instantiate(template, bindings[0], static, dynamics, seed=1)
    assert "A loop starts on line 3." in q.text
    assert isinstance(q.answer_key, ValueSet)
    assert set(q.answer_key.values) == {"7", "8"}  # last body statement and closing brace


def test_declline_prefers_farthest_use(golden_program, golden_static, golden_entries):
    q = _instantiate_golden("T-DECLLINE", golden_program, golden_static, golden_entries)
    # Lines 10 and 11 declare variables, line 12 mixes declarations, so the
    # farthest unambiguous use line is 7 (word/index, declared on line 5).
    assert "Line 7 uses a variable." in q.text
    assert q.answer_key == ExactValue("5", "line")


def test_loopiter_counts_across_whole_execution():
    _, static, dynamics = _bundle(LOOPY_SOURCE, ['maxc("banana")'])
    applicable = applicable_templates(static, dynamics)
    template, bindings = next((t, b) for t, b in applicable if t.template_id == "T-LOOPITER")
    q = instantiate(template, bindings[0], static, dynamics, seed=1)
    assert q.answer_key == ExactValue("5", "int")


# -- question well-formedness over a corpus ---------------------------------------


CORPUS = [
    (GOLDEN_SOURCE, ['smallest("ABBA")', 'smallestFrom("ACDC", 0)']),
    (LOOPY_SOURCE, ['maxc("banana")']),
    (
        "int sum(int n) {\n"
        "  int s = 0;\n"
        "  for (int i = 1; i <= n; i = i + 1) {\n"
        "    s = s + i;\n"
        "  }\n"
        "  return s;\n"
        "}\n",
        ["sum(5)"],
    ),
]


def _all_instances():
    for source, entries in CORPUS:
        program, static, dynamics = _bundle(source, entries)
        for template, bindings in applicable_templates(static, dynamics):
            for seed in (0, 1, 99):
                yield source, program, static, dynamics, instantiate(
                    template, bindings[0], static, dynamics, seed=seed
                )


def test_no_unfilled_placeholders_and_option_invariants():
    for source, program, static, dynamics, q in _all_instances():
        assert "[" not in q.text and "]" not in q.text
        if q.answer_type == MULTIPLE_CHOICE:
            assert len(q.answer_key.option_ids) == 1
            assert len(q.options) == 4 or len(q.options) == len(set(q.options))
        if q.answer_type == MULTI_SELECT:
            ids = {o.id for o in q.options}
            correct = set(q.answer_key.option_ids)
            assert correct and correct <= ids
            if len(ids) > len(correct):
                assert correct != ids
        texts = [o.text for o in q.options]
        assert len(texts) == len(set(texts))  # no duplicate options


def test_no_hallucinated_references():
    for source, program, static, dynamics, q in _all_instances():
        line_count = len(split_lines(source))
        for ref in q.source_refs:
            assert 1 <= ref.start_line <= line_count
        # Any identifier-like fact mentioned must occur in the source.
        for key in ("variable", "function"):
            if key in q.facts_used:
                assert q.facts_used[key] in source


def test_coverage_every_enabled_template_instantiable_on_corpus():
    seen: set[str] = set()
    for source, entries in CORPUS:
        _, static, dynamics = _bundle(source, entries)
        for template, _ in applicable_templates(static, dynamics):
            seen.add(template.template_id)
    expected = {t.template_id for t in build_catalog() if t.enabled_by_default}
    assert expected <= seen


def test_key_soundness_rederivation(golden_program, golden_static, golden_entries):
    """Every generated key must be re-derivable through the analysis operations."""
    for source, entries in CORPUS:
        program, static, dynamics = _bundle(source, entries)
        by_entry = {d.entry_text: d for d in dynamics}
        for template, bindings in applicable_templates(static, dynamics):
            q = instantiate(template, bindings[0], static, dynamics, seed=3)
            facts = q.facts_used
            tid = template.template_id
            if tid == "T-STACKDEPTH":
                assert q.answer_key.value == str(max_call_depth(by_entry[facts["entry"]]))
            elif tid == "T-LOOPITER":
                assert q.answer_key.value == str(
                    loop_iterations(by_entry[facts["entry"]], facts["loopId"])
                )
            elif tid == "T-ASSIGNVAL":
                from qlc.interp import canonical_text

                value = assignment_value(
                    by_entry[facts["entry"]],
                    facts["variable"],
                    facts["function"],
                    facts["invocationIndex"],
                    occurrence=facts["occurrence"],
                )
                assert q.answer_key.value == canonical_text(value)
            elif tid == "T-DECLLINE":
                for name in facts["variables"]:
                    assert (
                        find_declaration(program, facts["useLine"], name)
                        == int(q.answer_key.value)
                    )
            elif tid == "T-RECURSIVE":
                correct = {o.text for o in q.options if o.id in q.answer_key.option_ids}
                assert correct == detect_recursion(static.call_graph)
            elif tid == "T-PARAMNAMES":
                correct = {o.text for o in q.options if o.id in q.answer_key.option_ids}
                assert correct == set(static.function(facts["function"]).param_names)
            elif tid == "T-VARNAMES":
                correct = {o.text for o in q.options if o.id in q.answer_key.option_ids}
                assert correct == {
                    v.name for v in static.function(facts["function"]).variables
                }
            elif tid == "T-VARROLE":
                fn = static.function(facts["function"])
                var = next(
                    v for v in fn.variables
                    if v.name == facts["variable"] and v.decl_line == facts["declLine"]
                )
                assert classify_variable_role(var, program).value == facts["role"]
            elif tid == "T-LOOPEND":
                loop = next(l for l in static.loops if l.loop_id == facts["loopId"])
                assert set(q.answer_key.values) == {
                    str(loop.closing_brace_line), str(loop.last_body_stmt_line)
                }


# -- generate ---------------------------------------------------------------------


def test_generate_is_deterministic_and_respects_limits(golden_program, golden_entries):
    config = TeacherConfig.default()
    first = generate(golden_program, golden_entries, config, LearnerHistory(), "x", seed=11)
    second = generate(golden_program, golden_entries, config, LearnerHistory(), "x", seed=11)
    assert json.dumps([q.to_json(True) for q in first]) == json.dumps(
        [q.to_json(True) for q in second]
    )
    assert 1 <= len(first) <= config.max_questions


def test_generate_unavailable_on_static_failure():
    program = parse_program("int f() { return g(); }")
    with pytest.raises(GenerationUnavailable):
        generate(program, [], TeacherConfig.default(), seed=0)


def test_generate_with_exact_template_set_covers_expected_questions(
    golden_program, golden_entries
):
    config = TeacherConfig(
        enabled_templates=frozenset(
            {"T-RECURSIVE", "T-PARAMNAMES", "T-STACKDEPTH", "T-ASSIGNVAL", "T-VARROLE"}
        ),
        max_questions=5,
    )
    questions = generate(golden_program, golden_entries, config, seed=123)
    assert {q.template_id for q in questions} == set(config.enabled_templates)


# -- teacher config ---------------------------------------------------------------


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        TeacherConfig.from_json({"maxQuestion": 3})


def test_config_rejects_unknown_template_ids():
    with pytest.raises(ConfigError):
        TeacherConfig.from_json({"enabledTemplates": ["T-BOGUS"]})


def test_config_rejects_empty_template_set():
    with pytest.raises(ConfigError):
        TeacherConfig.from_json({"enabledTemplates": []})


def test_config_rejects_negative_weight():
    with pytest.raises(ConfigError):
        TeacherConfig.from_json({"levelWeights": {"text": -1}})


def test_config_seed_policy_forms():
    fixed = TeacherConfig.from_json({"seedPolicy": {"fixed": 9}})
    assert fixed.seed_policy == SeedPolicy("fixed", 9)
    per = TeacherConfig.from_json({"seedPolicy": "perSubmission"})
    assert per.seed_policy == SeedPolicy("perSubmission")
    with pytest.raises(ConfigError):
        TeacherConfig.from_json({"seedPolicy": {"fixed": "nine"}})


def test_config_defaults_enable_default_templates():
    config = TeacherConfig.from_json({})
    assert "T-RECURSIVE" in config.enabled_templates
    assert "T-CROSSPROGRAM" not in config.enabled_templates


def test_role_questions_can_opt_in_to_parameters():
    program = parse_program("int f(int a) { int b = a; return b; }")
    static = analyze(program)
    from qlc.templates import FactsBundle

    facts = FactsBundle(static)

    def varrole_candidates(catalog):
        template = next(t for t in catalog if t.template_id == "T-VARROLE")
        return [b["var"] for b in template.bind(facts)]

    assert varrole_candidates(build_catalog()) == ["b"]
    assert varrole_candidates(
        build_catalog(role_questions_include_parameters=True)
    ) == ["a", "b"]


def test_catalog_export_shape():
    docs = [t.to_json() for t in build_catalog()]
    assert len(docs) == 14
    for doc in docs:
        assert set(doc) == {
            "templateId", "tag", "answerType", "textPattern", "autoGradable", "enabledByDefault",
        }
        assert doc["autoGradable"] == (doc["answerType"] != OPEN_ENDED)
    by_id = catalog_by_id()
    assert by_id["T-SUBGOALSELECT"].enabled_by_default is False
    assert by_id["T-CROSSPROGRAM"].enabled_by_default is False
