"""Recursive-descent parser.

Grammar:

    program      := { functionDecl }
    functionDecl := ["static"] type ident "(" [param {"," param}] ")" block
    param        := type ident
    type         := "int" | "char" | "boolean" | "String" | "void"
    block        := "{" { stmt } "}"
    stmt         := varDecl ";" | assign ";" | ifStmt | whileStmt | forStmt
                  | "return" [expr] ";" | expr ";" | block
    expr         := conditional (Java precedence; ternary is right-associative)

The parser recovers at statement boundaries so one submission can report
several syntactic errors at once. Loop statements get a `loop_id` counter
in source order.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import ParseError, ParseFailure
from .lexer import Token, tokenize
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
    Param,
    Program,
    Return,
    Stmt,
    StringLit,
    Unary,
    Var,
    VarDecl,
    While,
)
from .span import SourceSpan, merge

TYPE_KEYWORDS = ("int", "char", "boolean", "String", "void")


class _SyntaxError(Exception):
    def __init__(self, error: ParseError):
        self.error = error
        super().__init__(error.message)


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.pos = 0
        self.errors: list[ParseError] = []
        self.next_loop_id = 0

    # -- token stream helpers ------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def check(self, kind: str, text: str | None = None) -> bool:
        token = self.peek()
        if token is None or token.kind != kind:
            return False
        return text is None or token.text == text

    def match(self, kind: str, text: str | None = None) -> Token | None:
        if self.check(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        token = self.peek()
        if self.check(kind, text):
            return self.advance()
        expected = what or (text if text is not None else kind)
        if token is None:
            span = self._eof_span()
            raise _SyntaxError(ParseError(f"expected {expected}, found end of input", span, "syntactic"))
        raise _SyntaxError(
            ParseError(f"expected {expected}, found {token.text!r}", token.span, "syntactic")
        )

    def _eof_span(self) -> SourceSpan:
        if self.tokens:
            last = self.tokens[-1].span
            return SourceSpan(last.end_line, last.end_col, last.end_line, last.end_col)
        return SourceSpan(1, 1, 1, 1)

    # -- declarations ---------------------------------------------------------

    def parse_program(self) -> Program:
        functions: list[FunctionDecl] = []
        seen: dict[str, FunctionDecl] = {}
        while not self.at_end():
            try:
                fn = self.parse_function()
            except _SyntaxError as exc:
                self.errors.append(exc.error)
                self._skip_to_function_start()
                continue
            if fn.name in seen:
                self.errors.append(
                    ParseError(f"duplicate function name {fn.name!r}", fn.span, "syntactic")
                )
            else:
                seen[fn.name] = fn
                functions.append(fn)
        return Program(tuple(functions), self.source)

    def _skip_to_function_start(self) -> None:
        # Resynchronize at a plausible next function header at brace depth 0.
        depth = 0
        while not self.at_end():
            token = self.peek()
            if token.kind == "symbol" and token.text == "{":
                depth += 1
            elif token.kind == "symbol" and token.text == "}":
                if depth == 0:
                    self.advance()
                    return
                depth -= 1
            elif depth == 0 and token.kind == "keyword" and (
                token.text == "static" or token.text in TYPE_KEYWORDS
            ):
                return
            self.advance()

    def parse_function(self) -> FunctionDecl:
        start = self.peek()
        if start is None:
            raise _SyntaxError(
                ParseError("expected function declaration", self._eof_span(), "syntactic")
            )
        first = self.match("keyword", "static") or None
        rtype = self.expect("keyword", what="return type")
        if rtype.text not in TYPE_KEYWORDS:
            raise _SyntaxError(
                ParseError(f"expected a type, found {rtype.text!r}", rtype.span, "syntactic")
            )
        name = self.expect("ident", what="function name")
        self.expect("symbol", "(")
        params: list[Param] = []
        param_names: set[str] = set()
        if not self.check("symbol", ")"):
            while True:
                ptype = self.expect("keyword", what="parameter type")
                if ptype.text not in TYPE_KEYWORDS or ptype.text == "void":
                    raise _SyntaxError(
                        ParseError(
                            f"expected a parameter type, found {ptype.text!r}",
                            ptype.span,
                            "syntactic",
                        )
                    )
                pname = self.expect("ident", what="parameter name")
                if pname.text in param_names:
                    raise _SyntaxError(
                        ParseError(
                            f"duplicate parameter name {pname.text!r}", pname.span, "syntactic"
                        )
                    )
                param_names.add(pname.text)
                params.append(Param(pname.text, ptype.text, merge(ptype.span, pname.span)))
                if not self.match("symbol", ","):
                    break
        self.expect("symbol", ")")
        body = self.parse_block()
        span = merge((first or rtype).span, body.span)
        return FunctionDecl(
            name=name.text,
            params=tuple(params),
            return_type=rtype.text,
            body=body,
            span=span,
            header_line=(first or rtype).span.start_line,
        )

    # -- statements -----------------------------------------------------------

    def parse_block(self) -> Block:
        open_brace = self.expect("symbol", "{")
        stmts: list[Stmt] = []
        while not self.check("symbol", "}"):
            if self.at_end():
                raise _SyntaxError(
                    ParseError("unclosed block, expected '}'", open_brace.span, "syntactic")
                )
            try:
                stmts.append(self.parse_statement())
            except _SyntaxError as exc:
                self.errors.append(exc.error)
                self._skip_to_statement_boundary()
        close_brace = self.advance()
        return Block(tuple(stmts), merge(open_brace.span, close_brace.span))

    def _skip_to_statement_boundary(self) -> None:
        depth = 0
        while not self.at_end():
            token = self.peek()
            if token.kind == "symbol":
                if token.text == ";" and depth == 0:
                    self.advance()
                    return
                if token.text == "{":
                    depth += 1
                elif token.text == "}":
                    if depth == 0:
                        return
                    depth -= 1
            self.advance()

    def parse_statement(self) -> Stmt:
        token = self.peek()
        if token is None:
            raise _SyntaxError(ParseError("expected a statement", self._eof_span(), "syntactic"))
        if token.kind == "symbol" and token.text == "{":
            return self.parse_block()
        if token.kind == "keyword":
            if token.text == "if":
                return self._parse_if()
            if token.text == "while":
                return self._parse_while()
            if token.text == "for":
                return self._parse_for()
            if token.text == "return":
                return self._parse_return()
            if token.text in TYPE_KEYWORDS:
                stmt = self._parse_var_decl()
                self.expect("symbol", ";")
                return self._with_semi(stmt)
        if token.kind == "ident":
            after = self.peek(1)
            if after is not None and after.kind == "symbol" and after.text == "=":
                stmt = self._parse_assign()
                self.expect("symbol", ";")
                return self._with_semi(stmt)
        expr = self.parse_expression()
        semi = self.expect("symbol", ";")
        return ExprStmt(expr, merge(_expr_span(expr), semi.span))

    def _with_semi(self, stmt: Stmt) -> Stmt:
        # The ';' was just consumed; extend the span to cover it.
        semi = self.tokens[self.pos - 1]
        if isinstance(stmt, VarDecl):
            return VarDecl(
                stmt.name, stmt.type_name, stmt.init_expr, merge(stmt.span, semi.span), stmt.name_span
            )
        if isinstance(stmt, Assign):
            return Assign(stmt.target, stmt.expr, merge(stmt.span, semi.span), stmt.target_span)
        return stmt

    def _parse_var_decl(self) -> VarDecl:
        vtype = self.advance()
        if vtype.text == "void":
            raise _SyntaxError(
                ParseError("variables cannot have type void", vtype.span, "syntactic")
            )
        name = self.expect("ident", what="variable name")
        init: Expr | None = None
        end_span = name.span
        if self.match("symbol", "="):
            init = self.parse_expression()
            end_span = _expr_span(init)
        return VarDecl(name.text, vtype.text, init, merge(vtype.span, end_span), name.span)

    def _parse_assign(self) -> Assign:
        target = self.advance()
        self.expect("symbol", "=")
        expr = self.parse_expression()
        return Assign(target.text, expr, merge(target.span, _expr_span(expr)), target.span)

    def _parse_if(self) -> If:
        kw = self.advance()
        self.expect("symbol", "(")
        cond = self.parse_expression()
        self.expect("symbol", ")")
        then_block = self._parse_loop_or_branch_body()
        else_block: Block | None = None
        end = then_block.span
        if self.match("keyword", "else"):
            else_block = self._parse_loop_or_branch_body()
            end = else_block.span
        return If(cond, then_block, else_block, merge(kw.span, end))

    def _parse_while(self) -> While:
        kw = self.advance()
        loop_id = self.next_loop_id
        self.next_loop_id += 1
        self.expect("symbol", "(")
        cond = self.parse_expression()
        self.expect("symbol", ")")
        body = self._parse_loop_or_branch_body()
        return While(cond, body, loop_id, merge(kw.span, body.span))

    def _parse_for(self) -> For:
        kw = self.advance()
        loop_id = self.next_loop_id
        self.next_loop_id += 1
        self.expect("symbol", "(")
        init: Stmt | None = None
        if not self.check("symbol", ";"):
            token = self.peek()
            if token is not None and token.kind == "keyword" and token.text in TYPE_KEYWORDS:
                init = self._parse_var_decl()
            else:
                init = self._parse_assign()
        self.expect("symbol", ";")
        cond: Expr | None = None
        if not self.check("symbol", ";"):
            cond = self.parse_expression()
        self.expect("symbol", ";")
        update: Stmt | None = None
        if not self.check("symbol", ")"):
            token = self.peek()
            after = self.peek(1)
            if (
                token is not None
                and token.kind == "ident"
                and after is not None
                and after.kind == "symbol"
                and after.text == "="
            ):
                update = self._parse_assign()
            else:
                expr = self.parse_expression()
                update = ExprStmt(expr, _expr_span(expr))
        self.expect("symbol", ")")
        body = self._parse_loop_or_branch_body()
        return For(init, cond, update, body, loop_id, merge(kw.span, body.span))

    def _parse_loop_or_branch_body(self) -> Block:
        if self.check("symbol", "{"):
            return self.parse_block()
        stmt = self.parse_statement()
        span = stmt.span if hasattr(stmt, "span") else self._eof_span()
        return Block((stmt,), span)

    def _parse_return(self) -> Return:
        kw = self.advance()
        expr: Expr | None = None
        if not self.check("symbol", ";"):
            expr = self.parse_expression()
        semi = self.expect("symbol", ";")
        return Return(expr, merge(kw.span, semi.span))

    # -- expressions ----------------------------------------------------------

    def parse_expression(self) -> Expr:
        return self._parse_conditional()

    def _parse_conditional(self) -> Expr:
        cond = self._parse_binary(0)
        if self.match("symbol", "?"):
            then_expr = self.parse_expression()
            self.expect("symbol", ":")
            else_expr = self.parse_expression()
            return Conditional(
                cond, then_expr, else_expr, merge(_expr_span(cond), _expr_span(else_expr))
            )
        return cond

    _PRECEDENCE: list[list[str]] = [
        ["||"],
        ["&&"],
        ["==", "!="],
        ["<", "<=", ">", ">="],
        ["+", "-"],
        ["*", "/", "%"],
    ]

    def _parse_binary(self, level: int) -> Expr:
        if level >= len(self._PRECEDENCE):
            return self._parse_unary()
        left = self._parse_binary(level + 1)
        ops = self._PRECEDENCE[level]
        while True:
            token = self.peek()
            if token is None or token.kind != "symbol" or token.text not in ops:
                return left
            op = self.advance()
            right = self._parse_binary(level + 1)
            left = Binary(op.text, left, right, merge(_expr_span(left), _expr_span(right)))

    def _parse_unary(self) -> Expr:
        token = self.peek()
        if token is not None and token.kind == "symbol" and token.text in ("-", "!"):
            op = self.advance()
            operand = self._parse_unary()
            return Unary(op.text, operand, merge(op.span, _expr_span(operand)))
        return self._parse_postfix()

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while self.check("symbol", "."):
            self.advance()
            method = self.expect("ident", what="method name")
            if method.text not in ("length", "charAt"):
                raise _SyntaxError(
                    ParseError(
                        f"unknown built-in method {method.text!r} (supported: length, charAt)",
                        method.span,
                        "syntactic",
                    )
                )
            self.expect("symbol", "(")
            args: list[Expr] = []
            if not self.check("symbol", ")"):
                args.append(self.parse_expression())
                while self.match("symbol", ","):
                    args.append(self.parse_expression())
            close = self.expect("symbol", ")")
            expr = BuiltinCall(expr, method.text, tuple(args), merge(_expr_span(expr), close.span))
        return expr

    def _parse_primary(self) -> Expr:
        token = self.peek()
        if token is None:
            raise _SyntaxError(ParseError("expected an expression", self._eof_span(), "syntactic"))
        if token.kind == "int":
            self.advance()
            return IntLit(token.value, token.span)
        if token.kind == "char":
            self.advance()
            return CharLit(token.value, token.span)
        if token.kind == "string":
            self.advance()
            return StringLit(token.value, token.span)
        if token.kind == "keyword" and token.text in ("true", "false"):
            self.advance()
            return BoolLit(token.text == "true", token.span)
        if token.kind == "ident":
            self.advance()
            if self.check("symbol", "("):
                self.advance()
                args: list[Expr] = []
                if not self.check("symbol", ")"):
                    args.append(self.parse_expression())
                    while self.match("symbol", ","):
                        args.append(self.parse_expression())
                close = self.expect("symbol", ")")
                return Call(token.text, tuple(args), merge(token.span, close.span))
            return Var(token.text, token.span)
        if token.kind == "symbol" and token.text == "(":
            open_paren = self.advance()
            inner = self.parse_expression()
            close_paren = self.expect("symbol", ")")
            # Keep the parentheses inside the span so the slice re-parses.
            return replace(inner, span=merge(open_paren.span, close_paren.span))
        raise _SyntaxError(
            ParseError(f"expected an expression, found {token.text!r}", token.span, "syntactic")
        )


def _expr_span(expr: Expr) -> SourceSpan:
    return expr.span


def parse_program(source: str) -> Program:
    """Parse a whole source text; raises ParseFailure carrying every diagnostic."""
    tokens = tokenize(source)
    parser = _Parser(tokens, source)
    program = parser.parse_program()
    if parser.errors:
        raise ParseFailure(parser.errors)
    return program


def parse_expression(text: str) -> Expr:
    """Parse a standalone expression (used for spans round-trips and entry calls)."""
    tokens = tokenize(text)
    parser = _Parser(tokens, text)
    try:
        expr = parser.parse_expression()
    except _SyntaxError as exc:
        raise ParseFailure([exc.error]) from None
    if not parser.at_end():
        extra = parser.peek()
        raise ParseFailure(
            [ParseError(f"unexpected trailing input {extra.text!r}", extra.span, "syntactic")]
        )
    return expr


def parse_statement(text: str) -> Stmt:
    """Parse a standalone statement (grammatical-context helper for round-trips)."""
    tokens = tokenize(text)
    parser = _Parser(tokens, text)
    try:
        stmt = parser.parse_statement()
    except _SyntaxError as exc:
        raise ParseFailure([exc.error]) from None
    if parser.errors:
        raise ParseFailure(parser.errors)
    if not parser.at_end():
        extra = parser.peek()
        raise ParseFailure(
            [ParseError(f"unexpected trailing input {extra.text!r}", extra.span, "syntactic")]
        )
    return stmt


def parse_entry_expression(text: str) -> Call:
    """Parse a teacher-provided entry call: a single call with literal arguments."""
    expr = parse_expression(text)
    if not isinstance(expr, Call):
        raise ParseFailure(
            [ParseError("entry must be a function call", _expr_span(expr), "syntactic")]
        )
    args: list[Expr] = []
    for arg in expr.args:
        folded = _fold_literal(arg)
        if folded is None:
            raise ParseFailure(
                [
                    ParseError(
                        "entry arguments must be literals", _expr_span(arg), "syntactic"
                    )
                ]
            )
        args.append(folded)
    return Call(expr.fn_name, tuple(args), expr.span)


def _fold_literal(expr: Expr) -> Expr | None:
    if isinstance(expr, (IntLit, CharLit, StringLit, BoolLit)):
        return expr
    if isinstance(expr, Unary) and expr.op == "-" and isinstance(expr.operand, IntLit):
        return IntLit(-expr.operand.value, expr.span)
    return None
