import random

import pytest

from helpers import structurally_equal
from genprog import random_program_source

from qlc.errors import ParseFailure
from qlc.nodes import (
    Assign,
    Block,
    Call,
    Expr,
    FunctionDecl,
    IntLit,
    Program,
    Stmt,
    StringLit,
    VarDecl,
    walk,
)
from qlc.parser import (
    parse_entry_expression,
    parse_expression,
    parse_program,
    parse_statement,
)
from qlc.span import slice_span


def test_golden_program_shape(golden_program):
    assert golden_program.function_names() == ["smallest", "smallestFrom"]
    fn = golden_program.function("smallestFrom")
    assert [p.name for p in fn.params] == ["word", "index"]
    assert [p.type_name for p in fn.params] == ["String", "int"]
    assert fn.return_type == "char"


def test_empty_source_is_empty_program():
    program = parse_program("")
    assert program.functions == ()


def test_missing_return_expression_reports_syntactic_error():
    with pytest.raises(ParseFailure) as exc:
        parse_program("static int f() { return }")
    assert exc.value.errors[0].kind == "syntactic"


def test_parser_recovers_and_reports_multiple_errors():
    source = (
        "static int f() {\n"
        "  int a = ;\n"
        "  int b = 1;\n"
        "  b = * 2;\n"
        "  return b;\n"
        "}\n"
    )
    with pytest.raises(ParseFailure) as exc:
        parse_program(source)
    lines = sorted(e.span.start_line for e in exc.value.errors)
    assert len(exc.value.errors) >= 2
    assert 2 in lines and 4 in lines


def test_duplicate_function_name_rejected():
    with pytest.raises(ParseFailure) as exc:
        parse_program("int f() { return 1; }\nint f() { return 2; }")
    assert "duplicate function name" in exc.value.errors[0].message


def test_duplicate_parameter_name_rejected():
    with pytest.raises(ParseFailure):
        parse_program("int f(int a, int a) { return a; }")


def test_loop_ids_assigned_in_source_order():
    source = (
        "int f() {\n"
        "  while (true) {\n"
        "    for (int i = 0; i < 1; i = i + 1) {}\n"
        "  }\n"
        "  while (false) {}\n"
        "  return 0;\n"
        "}\n"
    )
    program = parse_program(source)
    loops = [n for n in walk(program.functions[0].body) if hasattr(n, "loop_id")]
    by_line = sorted((n.span.start_line, n.loop_id) for n in loops)
    assert by_line == [(2, 0), (3, 1), (5, 2)]


def test_static_keyword_is_optional():
    program = parse_program("int f() { return 1; }")
    assert program.function_names() == ["f"]


def test_single_statement_bodies_become_blocks():
    program = parse_program("int f(int n) { if (n > 0) return 1; else return 2; }")
    fn = program.functions[0]
    if_stmt = fn.body.stmts[0]
    assert isinstance(if_stmt.then_block, Block)
    assert isinstance(if_stmt.else_block, Block)


def test_ternary_is_right_associative():
    expr = parse_expression("a ? 1 : b ? 2 : 3")
    assert type(expr.else_expr).__name__ == "Conditional"


def test_precedence_and_parentheses():
    flat = parse_expression("1 + 2 * 3")
    assert flat.op == "+" and flat.right.op == "*"
    grouped = parse_expression("(1 + 2) * 3")
    assert grouped.op == "*" and grouped.left.op == "+"


# -- entry expressions --------------------------------------------------------


def test_entry_expression_golden_examples():
    entry = parse_entry_expression('smallest("ABBA")')
    assert entry.fn_name == "smallest"
    assert isinstance(entry.args[0], StringLit) and entry.args[0].value == "ABBA"

    entry2 = parse_entry_expression('smallestFrom("ACDC", 0)')
    assert entry2.fn_name == "smallestFrom"
    assert isinstance(entry2.args[1], IntLit) and entry2.args[1].value == 0


def test_entry_expression_rejects_non_calls():
    with pytest.raises(ParseFailure):
        parse_entry_expression("1 + 2")


def test_entry_expression_rejects_free_variables():
    with pytest.raises(ParseFailure):
        parse_entry_expression("f(x)")


def test_entry_expression_accepts_negative_literals():
    entry = parse_entry_expression("f(-3)")
    assert isinstance(entry.args[0], IntLit) and entry.args[0].value == -3


# -- structural invariants over a corpus ---------------------------------------


def _corpus() -> list[Program]:
    from fixtures import CASES

    programs = [parse_program(case.source) for case in CASES]
    rng = random.Random(20240817)
    for _ in range(25):
        source, _ = random_program_source(rng)
        programs.append(parse_program(source))
    return programs


def _is_synthetic_block(node) -> bool:
    return (
        isinstance(node, Block)
        and len(node.stmts) == 1
        and node.span == node.stmts[0].span
    )


def test_determinism_identical_source_identical_ast():
    for program in _corpus():
        assert parse_program(program.source) == program


def test_span_nesting_child_within_parent():
    for program in _corpus():
        for fn in program.functions:
            assert fn.body.span.contains(fn.body.span)
            stack = [(fn.body, fn.span)]
            while stack:
                node, parent_span = stack.pop()
                assert parent_span.contains(node.span), (
                    f"{type(node).__name__} span {node.span} escapes parent {parent_span}"
                )
                from qlc.nodes import children

                for child in children(node):
                    stack.append((child, node.span))


def test_round_trip_every_node_reparses_to_equal_structure():
    for program in _corpus():
        source = program.source
        for fn in program.functions:
            fn_slice = slice_span(source, fn.span)
            reparsed_fn = parse_program(fn_slice).functions[0]
            assert structurally_equal(reparsed_fn, fn)
            for node in walk(fn.body):
                if _is_synthetic_block(node):
                    continue
                text = slice_span(source, node.span)
                if isinstance(node, Expr):
                    again = parse_expression(text)
                elif isinstance(node, Stmt):
                    if not isinstance(node, Block) and not text.rstrip().endswith(("}", ";")):
                        text += ";"  # loop headers carry statements without terminators
                    again = parse_statement(text)
                else:
                    continue
                if _is_synthetic_block(again) and not isinstance(node, Block):
                    again = again.stmts[0]
                assert structurally_equal(again, node), (
                    f"slice {text!r} reparsed differently"
                )
