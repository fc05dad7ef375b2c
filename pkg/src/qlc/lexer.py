"""Tokenizer for the analyzed language.

Skips whitespace, `//` line comments and `/* */` block comments; every
token carries the exact span of its source text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, ParseFailure
from .span import SourceSpan

KEYWORDS = {
    "static", "int", "char", "boolean", "String", "void",
    "if", "else", "while", "for", "return", "true", "false",
}

# Longest first so that e.g. "<=" wins over "<".
SYMBOLS = [
    "&&", "||", "==", "!=", "<=", ">=",
    "+", "-", "*", "/", "%", "<", ">", "!", "=",
    "(", ")", "{", "}", ";", ",", ".", "?", ":",
]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "keyword" | "int" | "char" | "string" | "symbol"
    text: str
    span: SourceSpan
    value: object = None  # parsed literal payload for int/char/string


_DIGITS = "0123456789"
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _ident_start(ch: str) -> bool:
    return ch in _LETTERS or ch == "_"


def _ident_part(ch: str) -> bool:
    return ch in _LETTERS or ch in _DIGITS or ch == "_"


def _lex_error(message: str, span: SourceSpan) -> ParseFailure:
    return ParseFailure([ParseError(message, span, "lexical")])


def tokenize(source: str) -> list[Token]:
    """Tokenize `source`; raises ParseFailure on the first lexical error."""
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(source)

    def advance(count: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(count):
            ch = source[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
            elif ch == "\r" and i + 1 < n and source[i + 1] == "\n":
                line += 1
                col = 1
                i += 2
            else:
                col += 1
                i += 1

    def here() -> tuple[int, int]:
        return line, col

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                advance()
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            start = SourceSpan(line, col, line, col + 1)
            advance(2)
            closed = False
            while i < n:
                if source[i] == "*" and i + 1 < n and source[i + 1] == "/":
                    advance(2)
                    closed = True
                    break
                advance()
            if not closed:
                raise _lex_error("unterminated block comment", start)
            continue

        start_line, start_col = here()

        if _ident_start(ch):
            j = i
            while j < n and _ident_part(source[j]):
                j += 1
            text = source[i:j]
            advance(j - i)
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, SourceSpan(start_line, start_col, line, col - 1)))
            continue

        if ch in _DIGITS:
            j = i
            while j < n and source[j] in _DIGITS:
                j += 1
            text = source[i:j]
            advance(j - i)
            tokens.append(
                Token("int", text, SourceSpan(start_line, start_col, line, col - 1), int(text))
            )
            continue

        if ch == "'":
            j = i + 1
            value: str
            if j < n and source[j] == "\\":
                if j + 1 >= n:
                    raise _lex_error(
                        "unterminated char literal",
                        SourceSpan(start_line, start_col, start_line, start_col),
                    )
                value = _unescape(source[j + 1], start_line, start_col)
                j += 2
            elif j < n and source[j] not in ("'", "\n", "\r"):
                value = source[j]
                j += 1
            else:
                raise _lex_error(
                    "empty or unterminated char literal",
                    SourceSpan(start_line, start_col, start_line, start_col),
                )
            if j >= n or source[j] != "'":
                raise _lex_error(
                    "unterminated char literal",
                    SourceSpan(start_line, start_col, start_line, start_col),
                )
            text = source[i : j + 1]
            advance(j + 1 - i)
            tokens.append(
                Token("char", text, SourceSpan(start_line, start_col, line, col - 1), value)
            )
            continue

        if ch == '"':
            j = i + 1
            chars: list[str] = []
            while j < n and source[j] not in ('"', "\n", "\r"):
                if source[j] == "\\":
                    if j + 1 >= n:
                        break
                    chars.append(_unescape(source[j + 1], start_line, start_col))
                    j += 2
                else:
                    chars.append(source[j])
                    j += 1
            if j >= n or source[j] != '"':
                raise _lex_error(
                    "unterminated string literal",
                    SourceSpan(start_line, start_col, start_line, start_col),
                )
            text = source[i : j + 1]
            advance(j + 1 - i)
            tokens.append(
                Token("string", text, SourceSpan(start_line, start_col, line, col - 1), "".join(chars))
            )
            continue

        matched = None
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                matched = sym
                break
        if matched is None:
            raise _lex_error(
                f"illegal character {ch!r}",
                SourceSpan(start_line, start_col, start_line, start_col),
            )
        advance(len(matched))
        tokens.append(Token("symbol", matched, SourceSpan(start_line, start_col, line, col - 1)))

    return tokens


def _unescape(ch: str, line: int, col: int) -> str:
    mapping = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "0": "\0"}
    if ch not in mapping:
        raise _lex_error(f"unknown escape sequence \\{ch}", SourceSpan(line, col, line, col))
    return mapping[ch]
