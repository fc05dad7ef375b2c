"""Tracing interpreter: executes a program from an entry call and records
the full execution history.

Evaluation is strict, left-to-right, call-by-value. Integers are 64-bit
signed and overflow raises instead of wrapping. Execution is bounded by
fuel (steps and call depth), so untrusted student code cannot hang the
host. The call stack depth counts user-function frames, the entry call
being depth 1; built-ins add no frame.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .nodes import (
    Assign,
    Binary,
    Block,
    BoolLit,
    BuiltinCall,
    Call,
    CharLit,
    Conditional,
    Expr,
    ExprStmt,
    For,
    FunctionDecl,
    If,
    IntLit,
    Program,
    Return,
    Stmt,
    StringLit,
    Unary,
    Var,
    VarDecl,
    While,
)

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

_JAVA_TYPE_FOR_KIND = {"int": "int", "char": "char", "boolean": "boolean", "string": "String"}


@dataclass(frozen=True)
class Value:
    kind: str  # "int" | "char" | "boolean" | "string" | "void"
    data: object = None

    def to_json(self) -> dict:
        return {"type": self.kind, "value": self.data}


VOID = Value("void")


def v_int(n: int) -> Value:
    return Value("int", n)


def v_char(c: str) -> Value:
    return Value("char", c)


def v_bool(b: bool) -> Value:
    return Value("boolean", b)


def v_str(s: str) -> Value:
    return Value("string", s)


def canonical_text(value: Value) -> str:
    """Canonical rendering: int decimal, char bare, string quoted, boolean
    true/false, void as 'void'. Used for answer keys and check expectations."""
    if value.kind == "int":
        return str(value.data)
    if value.kind == "char":
        return str(value.data)
    if value.kind == "boolean":
        return "true" if value.data else "false"
    if value.kind == "string":
        escaped = str(value.data).replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    return "void"


class RuntimeFault(Exception):
    """A runtime failure of the analyzed program (not of the host)."""

    KINDS = (
        "typeError",
        "divisionByZero",
        "indexOutOfBounds",
        "undefinedFunction",
        "fuelExhausted",
        "stackOverflow",
        "integerOverflow",
    )

    def __init__(self, kind: str, message: str, line: int):
        assert kind in self.KINDS
        self.kind = kind
        self.message = message
        self.line = line
        super().__init__(f"{kind} at line {line}: {message}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "line": self.line}


@dataclass(frozen=True)
class Fuel:
    max_steps: int = 100_000
    max_call_depth: int = 256

    def __post_init__(self) -> None:
        if self.max_steps <= 0 or self.max_call_depth <= 0:
            raise ValueError("fuel limits must be positive")


# ---------------------------------------------------------------------------
# Trace events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CallEnter:
    fn_name: str
    args: tuple[Value, ...]
    depth: int  # frames on the stack after this entry
    invocation_index: int  # per-function, 1-based

    def to_json(self) -> dict:
        return {
            "kind": "callEnter",
            "fnName": self.fn_name,
            "args": [a.to_json() for a in self.args],
            "depth": self.depth,
            "invocationIndex": self.invocation_index,
        }


@dataclass(frozen=True)
class CallExit:
    fn_name: str
    return_value: Value

    def to_json(self) -> dict:
        return {
            "kind": "callExit",
            "fnName": self.fn_name,
            "returnValue": self.return_value.to_json(),
        }


@dataclass(frozen=True)
class AssignEvent:
    var_name: str
    line: int
    value: Value
    fn_name: str
    invocation_index: int

    def to_json(self) -> dict:
        return {
            "kind": "assign",
            "varName": self.var_name,
            "line": self.line,
            "value": self.value.to_json(),
            "fnName": self.fn_name,
            "invocationIndex": self.invocation_index,
        }


@dataclass(frozen=True)
class LoopIter:
    loop_id: int
    iteration_index: int  # 1-based within one activation of the loop

    def to_json(self) -> dict:
        return {"kind": "loopIter", "loopId": self.loop_id, "iterationIndex": self.iteration_index}


TraceEvent = CallEnter | CallExit | AssignEvent | LoopIter


@dataclass(frozen=True)
class DynamicFacts:
    entry: Call
    entry_text: str
    result: Value | RuntimeFault
    trace: tuple[TraceEvent, ...]
    max_stack_depth: int
    loop_iterations: dict[int, int]
    assignments: dict[tuple[str, str, int], tuple[Value, ...]]

    @property
    def failed(self) -> bool:
        return isinstance(self.result, RuntimeFault)

    def to_json(self, include_trace: bool = True) -> dict:
        if isinstance(self.result, RuntimeFault):
            result_json: dict = {"error": self.result.to_json()}
        else:
            result_json = self.result.to_json()
        doc = {
            "entry": self.entry_text,
            "result": result_json,
            "maxStackDepth": self.max_stack_depth,
            "loopIterations": {str(k): v for k, v in sorted(self.loop_iterations.items())},
            "assignments": [
                {
                    "varName": var,
                    "fnName": fn,
                    "invocationIndex": inv,
                    "values": [v.to_json() for v in values],
                }
                for (var, fn, inv), values in self.assignments.items()
            ],
        }
        if include_trace:
            doc["trace"] = [e.to_json() for e in self.trace]
        return doc


class MissingAssignment(LookupError):
    """The requested (variable, function, invocation) was never assigned."""


# ---------------------------------------------------------------------------
# Interpreter internals
# ---------------------------------------------------------------------------

_UNINITIALIZED = object()


class _ReturnSignal(Exception):
    def __init__(self, value: Value):
        self.value = value


@dataclass
class _Frame:
    fn: FunctionDecl
    invocation_index: int
    scopes: list[dict[str, list]] = field(default_factory=list)  # name -> [type, value]

    def declare(self, name: str, type_name: str, value) -> None:
        self.scopes[-1][name] = [type_name, value]

    def slot(self, name: str) -> list | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None


class _Interp:
    def __init__(self, program: Program, fuel: Fuel, initial_depth: int):
        self.program = program
        self.fns = {fn.name: fn for fn in program.functions}
        self.fuel = fuel
        self.steps = 0
        self.depth = 0
        self.initial_depth = initial_depth
        self.max_depth_seen = 0
        self.invocations: dict[str, int] = {}
        self.trace: list[TraceEvent] = []
        self.loop_counts: dict[int, int] = {}
        self.assignments: dict[tuple[str, str, int], list[Value]] = {}
        self.frames: list[_Frame] = []

    # -- bookkeeping ----------------------------------------------------------

    def tick(self, line: int) -> None:
        self.steps += 1
        if self.steps > self.fuel.max_steps:
            raise RuntimeFault("fuelExhausted", "execution step budget exhausted", line)

    def record_assign(self, name: str, line: int, value: Value) -> None:
        frame = self.frames[-1]
        event = AssignEvent(name, line, value, frame.fn.name, frame.invocation_index)
        self.trace.append(event)
        key = (name, frame.fn.name, frame.invocation_index)
        self.assignments.setdefault(key, []).append(value)

    # -- calls ----------------------------------------------------------------

    def call(self, fn_name: str, args: list[Value], line: int) -> Value:
        fn = self.fns.get(fn_name)
        if fn is None:
            raise RuntimeFault("undefinedFunction", f"no function named {fn_name!r}", line)
        if len(args) != len(fn.params):
            raise RuntimeFault(
                "typeError",
                f"{fn_name} expects {len(fn.params)} argument(s), got {len(args)}",
                line,
            )
        if self.depth + 1 > self.fuel.max_call_depth:
            raise RuntimeFault("stackOverflow", f"call depth exceeds {self.fuel.max_call_depth}", line)
        self.depth += 1
        depth_recorded = self.depth + self.initial_depth - 1
        self.max_depth_seen = max(self.max_depth_seen, depth_recorded)
        self.invocations[fn_name] = self.invocations.get(fn_name, 0) + 1
        frame = _Frame(fn, self.invocations[fn_name])
        frame.scopes.append({})
        for param, arg in zip(fn.params, args):
            checked = self.check_type(arg, param.type_name, line, f"parameter {param.name!r}")
            frame.declare(param.name, param.type_name, checked)
        self.frames.append(frame)
        self.trace.append(CallEnter(fn_name, tuple(args), depth_recorded, frame.invocation_index))
        try:
            self.exec_block(fn.body)
        except _ReturnSignal as ret:
            result = ret.value
        else:
            if fn.return_type == "void":
                result = VOID
            else:
                raise RuntimeFault(
                    "typeError",
                    f"{fn_name} fell off the end without returning a {fn.return_type}",
                    fn.span.end_line,
                )
        self.trace.append(CallExit(fn_name, result))
        self.frames.pop()
        self.depth -= 1
        return result

    def check_type(self, value: Value, type_name: str, line: int, what: str) -> Value:
        expected = {"int": "int", "char": "char", "boolean": "boolean", "String": "string"}.get(
            type_name
        )
        if expected is None:
            raise RuntimeFault("typeError", f"cannot use type {type_name!r} here", line)
        if value.kind != expected:
            raise RuntimeFault(
                "typeError",
                f"{what} expects {type_name}, got {_JAVA_TYPE_FOR_KIND.get(value.kind, value.kind)}",
                line,
            )
        return value

    # -- statements -----------------------------------------------------------

    def exec_block(self, block: Block) -> None:
        frame = self.frames[-1]
        frame.scopes.append({})
        try:
            for stmt in block.stmts:
                self.exec_stmt(stmt)
        finally:
            frame.scopes.pop()

    def exec_stmt(self, stmt: Stmt) -> None:
        self.tick(stmt.span.start_line)
        if isinstance(stmt, VarDecl):
            frame = self.frames[-1]
            if stmt.init_expr is not None:
                value = self.check_type(
                    self.eval(stmt.init_expr),
                    stmt.type_name,
                    stmt.span.start_line,
                    f"variable {stmt.name!r}",
                )
                frame.declare(stmt.name, stmt.type_name, value)
                self.record_assign(stmt.name, stmt.span.start_line, value)
            else:
                frame.declare(stmt.name, stmt.type_name, _UNINITIALIZED)
        elif isinstance(stmt, Assign):
            value = self.eval(stmt.expr)
            slot = self.frames[-1].slot(stmt.target)
            if slot is None:
                raise RuntimeFault(
                    "typeError", f"variable {stmt.target!r} is not declared", stmt.span.start_line
                )
            slot[1] = self.check_type(
                value, slot[0], stmt.span.start_line, f"variable {stmt.target!r}"
            )
            self.record_assign(stmt.target, stmt.span.start_line, slot[1])
        elif isinstance(stmt, Block):
            self.exec_block(stmt)
        elif isinstance(stmt, If):
            if self.truth(stmt.cond):
                self.exec_block(stmt.then_block)
            elif stmt.else_block is not None:
                self.exec_block(stmt.else_block)
        elif isinstance(stmt, While):
            iteration = 0
            while self.truth(stmt.cond):
                iteration += 1
                self.loop_counts[stmt.loop_id] = self.loop_counts.get(stmt.loop_id, 0) + 1
                self.trace.append(LoopIter(stmt.loop_id, iteration))
                self.exec_block(stmt.body)
        elif isinstance(stmt, For):
            frame = self.frames[-1]
            frame.scopes.append({})
            try:
                if stmt.init is not None:
                    self.exec_stmt(stmt.init)
                iteration = 0
                while stmt.cond is None or self.truth(stmt.cond):
                    iteration += 1
                    self.loop_counts[stmt.loop_id] = self.loop_counts.get(stmt.loop_id, 0) + 1
                    self.trace.append(LoopIter(stmt.loop_id, iteration))
                    self.exec_block(stmt.body)
                    if stmt.update is not None:
                        self.exec_stmt(stmt.update)
            finally:
                frame.scopes.pop()
        elif isinstance(stmt, Return):
            fn = self.frames[-1].fn
            if stmt.expr is None:
                if fn.return_type != "void":
                    raise RuntimeFault(
                        "typeError",
                        f"{fn.name} must return a {fn.return_type}",
                        stmt.span.start_line,
                    )
                raise _ReturnSignal(VOID)
            value = self.eval(stmt.expr)
            if fn.return_type == "void":
                raise RuntimeFault(
                    "typeError", f"{fn.name} is void and cannot return a value", stmt.span.start_line
                )
            raise _ReturnSignal(
                self.check_type(value, fn.return_type, stmt.span.start_line, "return value")
            )
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.expr)
        else:  # pragma: no cover - exhaustive over Stmt variants
            raise TypeError(f"unknown statement {stmt!r}")

    def truth(self, cond: Expr) -> bool:
        value = self.eval(cond)
        if value.kind != "boolean":
            raise RuntimeFault(
                "typeError", "condition must be a boolean", cond.span.start_line
            )
        return bool(value.data)

    # -- expressions ----------------------------------------------------------

    def eval(self, expr: Expr) -> Value:
        self.tick(expr.span.start_line)
        line = expr.span.start_line
        if isinstance(expr, IntLit):
            if not (INT_MIN <= expr.value <= INT_MAX):
                raise RuntimeFault("integerOverflow", "integer literal out of range", line)
            return v_int(expr.value)
        if isinstance(expr, CharLit):
            return v_char(expr.value)
        if isinstance(expr, StringLit):
            return v_str(expr.value)
        if isinstance(expr, BoolLit):
            return v_bool(expr.value)
        if isinstance(expr, Var):
            slot = self.frames[-1].slot(expr.name)
            if slot is None:
                raise RuntimeFault("typeError", f"variable {expr.name!r} is not declared", line)
            if slot[1] is _UNINITIALIZED:
                raise RuntimeFault(
                    "typeError", f"variable {expr.name!r} read before it was assigned", line
                )
            return slot[1]
        if isinstance(expr, Unary):
            return self.eval_unary(expr)
        if isinstance(expr, Binary):
            return self.eval_binary(expr)
        if isinstance(expr, Conditional):
            if self.truth(expr.cond):
                return self.eval(expr.then_expr)
            return self.eval(expr.else_expr)
        if isinstance(expr, Call):
            args = [self.eval(arg) for arg in expr.args]
            return self.call(expr.fn_name, args, line)
        if isinstance(expr, BuiltinCall):
            return self.eval_builtin(expr)
        raise TypeError(f"unknown expression {expr!r}")  # pragma: no cover

    def eval_unary(self, expr: Unary) -> Value:
        operand = self.eval(expr.operand)
        line = expr.span.start_line
        if expr.op == "-":
            if operand.kind != "int":
                raise RuntimeFault("typeError", "unary '-' needs an int", line)
            return self._int_result(-operand.data, line)
        if expr.op == "!":
            if operand.kind != "boolean":
                raise RuntimeFault("typeError", "'!' needs a boolean", line)
            return v_bool(not operand.data)
        raise TypeError(f"unknown unary operator {expr.op!r}")  # pragma: no cover

    def _int_result(self, n: int, line: int) -> Value:
        if not (INT_MIN <= n <= INT_MAX):
            raise RuntimeFault("integerOverflow", "arithmetic overflow", line)
        return v_int(n)

    def eval_binary(self, expr: Binary) -> Value:
        line = expr.span.start_line
        op = expr.op
        if op in ("&&", "||"):
            left = self.eval(expr.left)
            if left.kind != "boolean":
                raise RuntimeFault("typeError", f"{op!r} needs boolean operands", line)
            if op == "&&" and not left.data:
                return v_bool(False)
            if op == "||" and left.data:
                return v_bool(True)
            right = self.eval(expr.right)
            if right.kind != "boolean":
                raise RuntimeFault("typeError", f"{op!r} needs boolean operands", line)
            return v_bool(bool(right.data))

        left = self.eval(expr.left)
        right = self.eval(expr.right)

        if op == "+":
            if left.kind == "string" or right.kind == "string":
                return v_str(_concat_text(left) + _concat_text(right))
            if left.kind == "int" and right.kind == "int":
                return self._int_result(left.data + right.data, line)
            raise RuntimeFault(
                "typeError", f"cannot add {left.kind} and {right.kind}", line
            )
        if op in ("-", "*", "/", "%"):
            if left.kind != "int" or right.kind != "int":
                raise RuntimeFault(
                    "typeError", f"{op!r} needs int operands, got {left.kind} and {right.kind}", line
                )
            if op == "-":
                return self._int_result(left.data - right.data, line)
            if op == "*":
                return self._int_result(left.data * right.data, line)
            if right.data == 0:
                raise RuntimeFault("divisionByZero", "division by zero", line)
            quotient = abs(left.data) // abs(right.data)
            if (left.data < 0) != (right.data < 0):
                quotient = -quotient
            if op == "/":
                return self._int_result(quotient, line)
            return self._int_result(left.data - quotient * right.data, line)
        if op in ("<", "<=", ">", ">="):
            if left.kind == right.kind == "int":
                a, b = left.data, right.data
            elif left.kind == right.kind == "char":
                a, b = ord(left.data), ord(right.data)
            else:
                raise RuntimeFault(
                    "typeError",
                    f"cannot compare {left.kind} and {right.kind} with {op!r}",
                    line,
                )
            return v_bool({"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op])
        if op in ("==", "!="):
            if left.kind != right.kind or left.kind == "void":
                raise RuntimeFault(
                    "typeError", f"cannot compare {left.kind} and {right.kind} for equality", line
                )
            equal = left.data == right.data
            return v_bool(equal if op == "==" else not equal)
        raise TypeError(f"unknown binary operator {op!r}")  # pragma: no cover

    def eval_builtin(self, expr: BuiltinCall) -> Value:
        line = expr.span.start_line
        receiver = self.eval(expr.receiver)
        if receiver.kind != "string":
            raise RuntimeFault(
                "typeError", f".{expr.method}() needs a String receiver", line
            )
        if expr.method == "length":
            if expr.args:
                raise RuntimeFault("typeError", "length() takes no arguments", line)
            return v_int(len(receiver.data))
        if expr.method == "charAt":
            if len(expr.args) != 1:
                raise RuntimeFault("typeError", "charAt(index) takes one argument", line)
            index = self.eval(expr.args[0])
            if index.kind != "int":
                raise RuntimeFault("typeError", "charAt index must be an int", line)
            text = receiver.data
            if not (0 <= index.data < len(text)):
                raise RuntimeFault(
                    "indexOutOfBounds",
                    f"charAt({index.data}) on a string of length {len(text)}",
                    line,
                )
            return v_char(text[index.data])
        raise TypeError(f"unknown builtin {expr.method!r}")  # pragma: no cover


def _concat_text(value: Value) -> str:
    if value.kind == "string":
        return str(value.data)
    if value.kind == "char":
        return str(value.data)
    if value.kind == "int":
        return str(value.data)
    if value.kind == "boolean":
        return "true" if value.data else "false"
    return "void"


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def execute(
    program: Program,
    entry: Call,
    fuel: Fuel | None = None,
    initial_depth: int = 1,
) -> DynamicFacts:
    """Run `entry` against `program`, collecting the complete dynamic facts.

    A RuntimeFault is captured in the result with the trace retained up to
    the failure point. `initial_depth` is the depth recorded for the entry
    call itself (the stack counting convention; 1 by default).
    """
    fuel = fuel or Fuel()
    _ensure_recursion_headroom(fuel.max_call_depth)
    interp = _Interp(program, fuel, initial_depth)
    entry_text = _render_entry(entry)
    try:
        args = [interp.eval(arg) for arg in entry.args]
        result: Value | RuntimeFault = interp.call(entry.fn_name, args, entry.span.start_line)
    except RuntimeFault as fault:
        result = fault
    except RecursionError:
        result = RuntimeFault("stackOverflow", "host recursion limit reached", entry.span.start_line)
    return DynamicFacts(
        entry=entry,
        entry_text=entry_text,
        result=result,
        trace=tuple(interp.trace),
        max_stack_depth=interp.max_depth_seen,
        loop_iterations=dict(interp.loop_counts),
        assignments={key: tuple(values) for key, values in interp.assignments.items()},
    )


def _ensure_recursion_headroom(max_call_depth: int) -> None:
    # ~30 Python frames per interpreted call; only ever raise the limit.
    needed = max_call_depth * 30 + 2000
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)


def _render_entry(entry: Call) -> str:
    parts = []
    for arg in entry.args:
        if isinstance(arg, IntLit):
            parts.append(str(arg.value))
        elif isinstance(arg, CharLit):
            parts.append(f"'{arg.value}'")
        elif isinstance(arg, StringLit):
            parts.append(canonical_text(v_str(arg.value)))
        elif isinstance(arg, BoolLit):
            parts.append("true" if arg.value else "false")
        else:  # pragma: no cover - entry args are literals by construction
            parts.append("?")
    return f"{entry.fn_name}({', '.join(parts)})"


def max_call_depth(facts: DynamicFacts) -> int:
    """Deepest call stack seen during the execution."""
    return facts.max_stack_depth


def loop_iterations(facts: DynamicFacts, loop_id: int) -> int:
    """Body entries of one loop summed over every activation in the run."""
    return facts.loop_iterations.get(loop_id, 0)


def assignment_value(
    facts: DynamicFacts, var_name: str, fn_name: str, invocation_index: int, occurrence: int = 1
) -> Value:
    """The occurrence-th value assigned to a variable within one invocation."""
    values = facts.assignments.get((var_name, fn_name, invocation_index))
    if not values or occurrence < 1 or occurrence > len(values):
        raise MissingAssignment(
            f"{var_name!r} has no assignment #{occurrence} in invocation "
            f"{invocation_index} of {fn_name}"
        )
    return values[occurrence - 1]
