"""AST for the analyzed language: a closed Java-like subset.

Types: int, char, boolean, String, void. Statements: declarations,
assignments, if/else, while, for, return, expression statements, blocks.
Expressions: literals, variables, unary/binary operators, the ternary
conditional, user-function calls, and the String built-ins length() and
charAt(int).

Every node carries the span of its own source text; child spans always
lie within their parent's span. Loops additionally carry a `loop_id`
assigned in source order while parsing, unique within the program.
"""

from __future__ import annotations

from dataclasses import dataclass

from .span import SourceSpan

BUILTIN_METHODS = ("length", "charAt")


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    span: SourceSpan


@dataclass(frozen=True)
class CharLit(Expr):
    value: str
    span: SourceSpan


@dataclass(frozen=True)
class StringLit(Expr):
    value: str
    span: SourceSpan


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    span: SourceSpan


@dataclass(frozen=True)
class Var(Expr):
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "-" | "!"
    operand: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # + - * / % < <= > >= == != && ||
    left: Expr
    right: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Conditional(Expr):
    cond: Expr
    then_expr: Expr
    else_expr: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Call(Expr):
    fn_name: str
    args: tuple[Expr, ...]
    span: SourceSpan


@dataclass(frozen=True)
class BuiltinCall(Expr):
    """Method call on a String value: receiver.length() or receiver.charAt(i)."""

    receiver: Expr
    method: str
    args: tuple[Expr, ...]
    span: SourceSpan


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stmt:
    pass


@dataclass(frozen=True)
class VarDecl(Stmt):
    name: str
    type_name: str
    init_expr: Expr | None
    span: SourceSpan
    name_span: SourceSpan | None = None  # span of the declared identifier


@dataclass(frozen=True)
class Assign(Stmt):
    target: str
    expr: Expr
    span: SourceSpan
    target_span: SourceSpan | None = None


@dataclass(frozen=True)
class Block(Stmt):
    stmts: tuple[Stmt, ...]
    span: SourceSpan


@dataclass(frozen=True)
class If(Stmt):
    cond: Expr
    then_block: Block
    else_block: Block | None
    span: SourceSpan


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: Block
    loop_id: int
    span: SourceSpan


@dataclass(frozen=True)
class For(Stmt):
    init: Stmt | None  # VarDecl or Assign
    cond: Expr | None
    update: Stmt | None  # Assign or ExprStmt
    body: Block
    loop_id: int
    span: SourceSpan


@dataclass(frozen=True)
class Return(Stmt):
    expr: Expr | None
    span: SourceSpan


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Expr
    span: SourceSpan


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str
    span: SourceSpan


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    params: tuple[Param, ...]
    return_type: str
    body: Block
    span: SourceSpan
    header_line: int  # line of the function header; parameters count as declared here


@dataclass(frozen=True)
class Program:
    functions: tuple[FunctionDecl, ...]
    source: str

    def function(self, name: str) -> FunctionDecl:
        for fn in self.functions:
            if fn.name == name:
                return fn
        raise KeyError(name)

    def function_names(self) -> list[str]:
        return [fn.name for fn in self.functions]


def children(node: Expr | Stmt) -> list[Expr | Stmt]:
    """Direct child nodes, in source order."""
    if isinstance(node, (IntLit, CharLit, StringLit, BoolLit, Var)):
        return []
    if isinstance(node, Unary):
        return [node.operand]
    if isinstance(node, Binary):
        return [node.left, node.right]
    if isinstance(node, Conditional):
        return [node.cond, node.then_expr, node.else_expr]
    if isinstance(node, Call):
        return list(node.args)
    if isinstance(node, BuiltinCall):
        return [node.receiver, *node.args]
    if isinstance(node, VarDecl):
        return [node.init_expr] if node.init_expr is not None else []
    if isinstance(node, Assign):
        return [node.expr]
    if isinstance(node, Block):
        return list(node.stmts)
    if isinstance(node, If):
        out: list[Expr | Stmt] = [node.cond, node.then_block]
        if node.else_block is not None:
            out.append(node.else_block)
        return out
    if isinstance(node, While):
        return [node.cond, node.body]
    if isinstance(node, For):
        out = []
        if node.init is not None:
            out.append(node.init)
        if node.cond is not None:
            out.append(node.cond)
        if node.update is not None:
            out.append(node.update)
        out.append(node.body)
        return out
    if isinstance(node, Return):
        return [node.expr] if node.expr is not None else []
    if isinstance(node, ExprStmt):
        return [node.expr]
    raise TypeError(f"unknown node {node!r}")


def walk(node: Expr | Stmt):
    """Yield `node` and all descendants, depth-first in source order."""
    yield node
    for child in children(node):
        yield from walk(child)
