from __future__ import annotations

from dataclasses import dataclass

from .span import SourceSpan


@dataclass(frozen=True)
class ParseError:
    """A single lexical or syntactic diagnostic pointing into the source."""

    message: str
    span: SourceSpan
    kind: str  # "lexical" | "syntactic"

    def to_json(self) -> dict:
        return {"message": self.message, "span": self.span.to_json(), "kind": self.kind}


class ParseFailure(Exception):
    """Raised when a source text cannot be turned into a program.

    Carries every diagnostic the parser recovered to; lexical failures
    carry exactly one.
    """

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        summary = "; ".join(f"{e.span.start_line}:{e.span.start_col} {e.message}" for e in errors)
        super().__init__(summary)


class AnalysisError(Exception):
    """A program parsed but fails the pre-submission static checks."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(message)
