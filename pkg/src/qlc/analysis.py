"""Static facts: functions, variables, loops, call graph, recursion, roles.

The analyzer doubles as the pre-submission check: a call to an undefined
function or a use of an undeclared variable raises AnalysisError before
any question generation or execution happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import AnalysisError
from .nodes import (
    Assign,
    Binary,
    Block,
    BuiltinCall,
    Call,
    Conditional,
    Expr,
    ExprStmt,
    For,
    FunctionDecl,
    If,
    Program,
    Return,
    Stmt,
    Var,
    VarDecl,
    While,
    IntLit,
    CharLit,
    StringLit,
    BoolLit,
    children,
    walk,
)
from .span import SourceSpan


class Role(Enum):
    FIXED_VALUE = "FixedValue"
    STEPPER = "Stepper"
    MOST_WANTED_HOLDER = "MostWantedHolder"
    GATHERER = "Gatherer"
    OTHER = "Other"

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return self.value


@dataclass(frozen=True)
class VariableFacts:
    name: str
    decl_line: int  # parameters: line of the function header
    use_lines: tuple[int, ...]  # lines reading or writing the name after declaration
    assign_lines: tuple[int, ...]  # declaration-with-initializer and reassignment lines
    role: Role
    is_parameter: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "declLine": self.decl_line,
            "useLines": list(self.use_lines),
            "assignLines": list(self.assign_lines),
            "role": self.role.value,
            "parameter": self.is_parameter,
        }


@dataclass(frozen=True)
class FunctionFacts:
    name: str
    param_names: tuple[str, ...]
    variables: tuple[VariableFacts, ...]
    span: SourceSpan

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "paramNames": list(self.param_names),
            "variables": [v.to_json() for v in self.variables],
            "span": self.span.to_json(),
        }


@dataclass(frozen=True)
class LoopFacts:
    loop_id: int
    kind: str  # "while" | "for"
    start_line: int
    last_body_stmt_line: int
    closing_brace_line: int
    enclosing_function: str

    def to_json(self) -> dict:
        return {
            "loopId": self.loop_id,
            "kind": self.kind,
            "startLine": self.start_line,
            "lastBodyStmtLine": self.last_body_stmt_line,
            "closingBraceLine": self.closing_brace_line,
            "enclosingFunction": self.enclosing_function,
        }


@dataclass(frozen=True)
class UseSite:
    """One resolved variable occurrence (read or write, not the declaration itself)."""

    name: str
    line: int
    col: int
    access: str  # "read" | "write"
    decl_line: int
    function: str
    is_parameter: bool


@dataclass(frozen=True)
class StaticFacts:
    functions: tuple[FunctionFacts, ...]
    loops: tuple[LoopFacts, ...]
    call_graph: dict[str, set[str]]
    recursive_functions: set[str]
    use_sites: tuple[UseSite, ...]
    literals: tuple[str, ...] = ()  # literal texts in source order, deduped
    conditional_lines: tuple[tuple[int, str], ...] = ()  # (condition line, function)

    def function(self, name: str) -> FunctionFacts:
        for fn in self.functions:
            if fn.name == name:
                return fn
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "functions": [f.to_json() for f in self.functions],
            "loops": [l.to_json() for l in self.loops],
            "callGraph": {fn: sorted(callees) for fn, callees in sorted(self.call_graph.items())},
            "recursiveFunctions": sorted(self.recursive_functions),
        }


# ---------------------------------------------------------------------------
# Name resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class _DeclKey:
    function: str
    name: str
    decl_line: int
    decl_col: int


@dataclass
class _DeclInfo:
    key: _DeclKey
    is_parameter: bool
    order: int  # declaration order within the function, params first


@dataclass
class _ResolvedAssign:
    decl: _DeclInfo
    stmt: Assign
    loops: tuple[While | For, ...]  # enclosing loops, innermost last
    if_conds: tuple[Expr, ...]  # conditions of enclosing if statements


class _Resolver:
    """Scope-aware walk collecting declarations, occurrences, and call edges."""

    def __init__(self, program: Program):
        self.program = program
        self.fn_names = set(program.function_names())
        self.decls: list[_DeclInfo] = []
        self.uses: list[UseSite] = []
        self.assign_lines: dict[_DeclKey, list[int]] = {}
        self.reassignments: dict[_DeclKey, list[_ResolvedAssign]] = {}
        self.call_edges: dict[str, set[str]] = {name: set() for name in program.function_names()}
        self.occurrence_depth: dict[tuple[int, int, str], int] = {}

    def run(self) -> None:
        for fn in self.program.functions:
            self._function(fn)

    # scopes are dicts name -> _DeclInfo, innermost last
    def _function(self, fn: FunctionDecl) -> None:
        self.current_fn = fn.name
        self.order = 0
        scope: dict[str, _DeclInfo] = {}
        for param in fn.params:
            info = self._declare(
                scope, param.name, fn.header_line, param.span.start_col, is_parameter=True
            )
        self.scopes: list[dict[str, _DeclInfo]] = [scope]
        self.loop_stack: list[While | For] = []
        self.if_stack: list[Expr] = []
        self._block(fn.body)

    def _declare(
        self,
        scope: dict[str, _DeclInfo],
        name: str,
        line: int,
        col: int,
        is_parameter: bool,
    ) -> _DeclInfo:
        if name in scope:
            raise AnalysisError(f"variable {name!r} is already declared in this scope", line)
        key = _DeclKey(self.current_fn, name, line, col)
        info = _DeclInfo(key, is_parameter, self.order)
        self.order += 1
        scope[name] = info
        self.decls.append(info)
        self.assign_lines.setdefault(key, [])
        self.reassignments.setdefault(key, [])
        return info

    def _resolve(self, name: str, line: int) -> _DeclInfo:
        for depth in range(len(self.scopes) - 1, -1, -1):
            if name in self.scopes[depth]:
                return self.scopes[depth][name]
        if name in self.fn_names:
            raise AnalysisError(f"{name!r} is a function, not a variable", line)
        raise AnalysisError(f"variable {name!r} used before declaration", line)

    def _use(self, name: str, span: SourceSpan, access: str) -> _DeclInfo:
        info = self._resolve(name, span.start_line)
        self.uses.append(
            UseSite(
                name=name,
                line=span.start_line,
                col=span.start_col,
                access=access,
                decl_line=info.key.decl_line,
                function=self.current_fn,
                is_parameter=info.is_parameter,
            )
        )
        depth = max(
            (d for d in range(len(self.scopes)) if name in self.scopes[d]),
        )
        self.occurrence_depth[(span.start_line, span.start_col, name)] = depth
        return info

    def _block(self, block: Block) -> None:
        self.scopes.append({})
        for stmt in block.stmts:
            self._stmt(stmt)
        self.scopes.pop()

    def _stmt(self, stmt: Stmt) -> None:
        if isinstance(stmt, VarDecl):
            if stmt.init_expr is not None:
                self._expr(stmt.init_expr)
            name_span = stmt.name_span or stmt.span
            info = self._declare(
                self.scopes[-1],
                stmt.name,
                stmt.span.start_line,
                name_span.start_col,
                is_parameter=False,
            )
            if stmt.init_expr is not None:
                self.assign_lines[info.key].append(stmt.span.start_line)
        elif isinstance(stmt, Assign):
            self._expr(stmt.expr)
            target_span = stmt.target_span or stmt.span
            info = self._use(stmt.target, target_span, "write")
            self.assign_lines[info.key].append(stmt.span.start_line)
            self.reassignments[info.key].append(
                _ResolvedAssign(info, stmt, tuple(self.loop_stack), tuple(self.if_stack))
            )
        elif isinstance(stmt, Block):
            self._block(stmt)
        elif isinstance(stmt, If):
            self._expr(stmt.cond)
            self.if_stack.append(stmt.cond)
            self._block(stmt.then_block)
            if stmt.else_block is not None:
                self._block(stmt.else_block)
            self.if_stack.pop()
        elif isinstance(stmt, While):
            self._expr(stmt.cond)
            self.loop_stack.append(stmt)
            self._block(stmt.body)
            self.loop_stack.pop()
        elif isinstance(stmt, For):
            self.scopes.append({})
            self.loop_stack.append(stmt)
            if stmt.init is not None:
                # The loop variable is in scope for cond, update, and body,
                # but its initialization runs once, outside the iterations.
                self.loop_stack.pop()
                self._stmt(stmt.init)
                self.loop_stack.append(stmt)
            if stmt.cond is not None:
                self._expr(stmt.cond)
            if stmt.update is not None:
                self._stmt(stmt.update)
            self._block(stmt.body)
            self.loop_stack.pop()
            self.scopes.pop()
        elif isinstance(stmt, Return):
            if stmt.expr is not None:
                self._expr(stmt.expr)
        elif isinstance(stmt, ExprStmt):
            self._expr(stmt.expr)
        else:  # pragma: no cover - exhaustive over Stmt variants
            raise TypeError(f"unknown statement {stmt!r}")

    def _expr(self, expr: Expr) -> None:
        if isinstance(expr, Var):
            self._use(expr.name, expr.span, "read")
        elif isinstance(expr, Call):
            if expr.fn_name not in self.fn_names:
                raise AnalysisError(
                    f"call to undefined function {expr.fn_name!r}", expr.span.start_line
                )
            self.call_edges[self.current_fn].add(expr.fn_name)
            for arg in expr.args:
                self._expr(arg)
        elif isinstance(expr, BuiltinCall):
            self._expr(expr.receiver)
            for arg in expr.args:
                self._expr(arg)
        else:
            for child in _expr_children(expr):
                self._expr(child)


def _expr_children(expr: Expr) -> list[Expr]:
    return [c for c in children(expr) if isinstance(c, Expr)]


# ---------------------------------------------------------------------------
# Role classification
# ---------------------------------------------------------------------------

_COMPARISONS = ("<", "<=", ">", ">=")


def _names_in(expr: Expr) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, Var)}


def _names_assigned_in(loop: While | For) -> set[str]:
    assigned: set[str] = set()
    for node in walk(loop):
        if isinstance(node, Assign):
            assigned.add(node.target)
        elif isinstance(node, VarDecl):
            assigned.add(node.name)
    return assigned


def _loop_invariant(expr: Expr, loop: While | For) -> bool:
    return not (_names_in(expr) & _names_assigned_in(loop))


def _structurally_equal(a: Expr, b: Expr) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, (IntLit, CharLit, StringLit, BoolLit)):
        return a.value == b.value
    if isinstance(a, Var):
        return a.name == b.name
    # Generic: compare dataclass fields except spans.
    for field_name in a.__dataclass_fields__:
        if field_name == "span":
            continue
        va = getattr(a, field_name)
        vb = getattr(b, field_name)
        if isinstance(va, Expr):
            if not _structurally_equal(va, vb):
                return False
        elif isinstance(va, tuple) and va and isinstance(va[0], Expr):
            if len(va) != len(vb) or not all(_structurally_equal(x, y) for x, y in zip(va, vb)):
                return False
        elif va != vb:
            return False
    return True


def _is_stepper_update(assign: Assign, loop: While | For) -> bool:
    expr = assign.expr
    if not isinstance(expr, Binary) or expr.op not in ("+", "-"):
        return False
    v = assign.target
    if isinstance(expr.left, Var) and expr.left.name == v:
        step = expr.right
    elif expr.op == "+" and isinstance(expr.right, Var) and expr.right.name == v:
        step = expr.left
    else:
        return False
    if isinstance(step, (IntLit, CharLit)):
        return True
    return isinstance(step, Var) and step.name not in _names_assigned_in(loop)


def _is_gatherer_update(assign: Assign, loop: While | For) -> bool:
    expr = assign.expr
    if not isinstance(expr, Binary) or expr.op not in ("+", "-", "*"):
        return False
    v = assign.target
    if isinstance(expr.left, Var) and expr.left.name == v:
        combined = expr.right
    elif expr.op in ("+", "*") and isinstance(expr.right, Var) and expr.right.name == v:
        combined = expr.left
    else:
        return False
    return not _loop_invariant(combined, loop)


def _condition_guards(cond: Expr, v: str, assigned: Expr) -> bool:
    """Does `cond` compare `v` against the assigned expression or a name in it?"""
    if not isinstance(cond, Binary) or cond.op not in _COMPARISONS:
        return False
    for own, other in ((cond.left, cond.right), (cond.right, cond.left)):
        if isinstance(own, Var) and own.name == v:
            if _structurally_equal(other, assigned):
                return True
            if isinstance(other, Var) and other.name in _names_in(assigned):
                return True
    return False


def _is_most_wanted_update(record: _ResolvedAssign) -> bool:
    assign = record.stmt
    for cond in record.if_conds:
        if _condition_guards(cond, assign.target, assign.expr):
            return True
    if isinstance(assign.expr, Conditional):
        if _condition_guards(assign.expr.cond, assign.target, assign.expr):
            return True
    return False


def _classify(key: _DeclKey, reassignments: list[_ResolvedAssign]) -> Role:
    if not reassignments:
        return Role.FIXED_VALUE
    in_loop = [r for r in reassignments if r.loops]
    if in_loop and all(_is_stepper_update(r.stmt, r.loops[-1]) for r in in_loop):
        return Role.STEPPER
    if all(_is_most_wanted_update(r) for r in reassignments):
        return Role.MOST_WANTED_HOLDER
    if in_loop and all(_is_gatherer_update(r.stmt, r.loops[-1]) for r in in_loop):
        return Role.GATHERER
    return Role.OTHER


def classify_variable_role(var_facts: VariableFacts, program: Program) -> Role:
    """Role of one variable, re-derived from the program.

    Rules, applied in order: fixed value (never reassigned), stepper
    (loop reassignments step by a literal or loop-invariant name), most
    wanted holder (reassigned only under comparisons against the new
    value), gatherer (loop reassignments fold in loop-varying values),
    otherwise Other.
    """
    resolver = _Resolver(program)
    resolver.run()
    for info in resolver.decls:
        if info.key.name == var_facts.name and info.key.decl_line == var_facts.decl_line:
            if info.is_parameter != var_facts.is_parameter:
                continue
            return _classify(info.key, resolver.reassignments[info.key])
    raise AnalysisError(
        f"no declaration of {var_facts.name!r} on line {var_facts.decl_line}",
        var_facts.decl_line,
    )


# ---------------------------------------------------------------------------
# Recursion detection
# ---------------------------------------------------------------------------


def detect_recursion(call_graph: dict[str, set[str]]) -> set[str]:
    """Every function lying on a directed cycle (direct or mutual recursion).

    Kosaraju's strongly-connected components; a node is recursive when its
    component has more than one member or it has a self edge.
    """
    nodes = sorted(call_graph)
    order: list[str] = []
    visited: set[str] = set()
    for start in nodes:
        if start in visited:
            continue
        stack: list[tuple[str, list[str]]] = [(start, sorted(call_graph.get(start, ())))]
        visited.add(start)
        while stack:
            node, todo = stack[-1]
            if todo:
                succ = todo.pop(0)
                if succ in call_graph and succ not in visited:
                    visited.add(succ)
                    stack.append((succ, sorted(call_graph.get(succ, ()))))
            else:
                order.append(node)
                stack.pop()

    reverse: dict[str, set[str]] = {n: set() for n in nodes}
    for src, dsts in call_graph.items():
        for dst in dsts:
            if dst in reverse:
                reverse[dst].add(src)

    component: dict[str, int] = {}
    comp_sizes: dict[int, int] = {}
    current = 0
    for node in reversed(order):
        if node in component:
            continue
        stack2 = [node]
        component[node] = current
        size = 0
        while stack2:
            item = stack2.pop()
            size += 1
            for pred in sorted(reverse[item]):
                if pred not in component:
                    component[pred] = current
                    stack2.append(pred)
        comp_sizes[current] = size
        current += 1

    recursive = set()
    for node in nodes:
        if comp_sizes[component[node]] > 1 or node in call_graph.get(node, set()):
            recursive.add(node)
    return recursive


# ---------------------------------------------------------------------------
# Loop extents
# ---------------------------------------------------------------------------


def _collect_loops(fn: FunctionDecl) -> list[LoopFacts]:
    loops: list[LoopFacts] = []
    for node in walk(fn.body):
        if isinstance(node, (While, For)):
            body = node.body
            closing = node.span.end_line
            if body.stmts:
                last = body.stmts[-1].span.end_line
            else:
                last = closing
            loops.append(
                LoopFacts(
                    loop_id=node.loop_id,
                    kind="while" if isinstance(node, While) else "for",
                    start_line=node.span.start_line,
                    last_body_stmt_line=last,
                    closing_brace_line=closing,
                    enclosing_function=fn.name,
                )
            )
    return loops


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def analyze(program: Program) -> StaticFacts:
    """Extract the complete static facts; raises AnalysisError on check failures."""
    resolver = _Resolver(program)
    resolver.run()

    roles = {
        info.key: _classify(info.key, resolver.reassignments[info.key])
        for info in resolver.decls
    }

    use_lines: dict[_DeclKey, set[int]] = {info.key: set() for info in resolver.decls}
    for use in resolver.uses:
        for info in resolver.decls:
            if (
                info.key.function == use.function
                and info.key.name == use.name
                and info.key.decl_line == use.decl_line
                and info.is_parameter == use.is_parameter
            ):
                use_lines[info.key].add(use.line)
                break

    functions: list[FunctionFacts] = []
    for fn in program.functions:
        fn_decls = sorted(
            (info for info in resolver.decls if info.key.function == fn.name),
            key=lambda info: info.order,
        )
        variables = tuple(
            VariableFacts(
                name=info.key.name,
                decl_line=info.key.decl_line,
                use_lines=tuple(sorted(use_lines[info.key])),
                assign_lines=tuple(sorted(set(resolver.assign_lines[info.key]))),
                role=roles[info.key],
                is_parameter=info.is_parameter,
            )
            for info in fn_decls
        )
        functions.append(
            FunctionFacts(
                name=fn.name,
                param_names=tuple(p.name for p in fn.params),
                variables=variables,
                span=fn.span,
            )
        )

    loops: list[LoopFacts] = []
    for fn in program.functions:
        loops.extend(_collect_loops(fn))
    loops.sort(key=lambda l: l.loop_id)

    call_graph = {fn: set(callees) for fn, callees in resolver.call_edges.items()}

    literals: list[str] = []
    seen_literals: set[str] = set()
    conditional_lines: list[tuple[int, str]] = []
    for fn in program.functions:
        for node in walk(fn.body):
            if isinstance(node, (IntLit, CharLit, StringLit)):
                text = str(node.value)
                if text not in seen_literals:
                    seen_literals.add(text)
                    literals.append(text)
            elif isinstance(node, If):
                conditional_lines.append((node.cond.span.start_line, fn.name))

    return StaticFacts(
        functions=tuple(functions),
        loops=tuple(loops),
        call_graph=call_graph,
        recursive_functions=detect_recursion(call_graph),
        use_sites=tuple(resolver.uses),
        literals=tuple(literals),
        conditional_lines=tuple(conditional_lines),
    )


def find_declaration(program: Program, use_line: int, name: str) -> int:
    """Line of the innermost declaration governing `name` as used on `use_line`."""
    resolver = _Resolver(program)
    resolver.run()
    candidates = [
        use for use in resolver.uses if use.line == use_line and use.name == name
    ]
    if not candidates:
        raise AnalysisError(
            f"{name!r} is not read or written on line {use_line}", use_line
        )
    best = max(
        candidates,
        key=lambda use: resolver.occurrence_depth.get((use.line, use.col, use.name), 0),
    )
    return best.decl_line
