"""Source positions and spans.

Lines and columns are 1-based and index the original text directly.
A span covers the characters from (start_line, start_col) up to and
including (end_line, end_col). LF and CRLF both count as one newline;
no other normalization is applied.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if self.start_line > self.end_line:
            raise ValueError(f"span starts after it ends: {self}")
        if self.start_line == self.end_line and self.start_col > self.end_col:
            raise ValueError(f"span starts after it ends: {self}")

    def contains(self, other: "SourceSpan") -> bool:
        return self.start_pos() <= other.start_pos() and other.end_pos() <= self.end_pos()

    def start_pos(self) -> tuple[int, int]:
        return (self.start_line, self.start_col)

    def end_pos(self) -> tuple[int, int]:
        return (self.end_line, self.end_col)

    def to_json(self) -> dict:
        return {
            "startLine": self.start_line,
            "startCol": self.start_col,
            "endLine": self.end_line,
            "endCol": self.end_col,
        }

    @staticmethod
    def from_json(data: dict) -> "SourceSpan":
        return SourceSpan(
            int(data["startLine"]),
            int(data["startCol"]),
            int(data["endLine"]),
            int(data["endCol"]),
        )


def merge(first: SourceSpan, last: SourceSpan) -> SourceSpan:
    """Smallest span covering both arguments (in source order)."""
    return SourceSpan(first.start_line, first.start_col, last.end_line, last.end_col)


def split_lines(source: str) -> list[str]:
    """Split into lines without the newline characters; LF and CRLF only."""
    lines: list[str] = []
    current: list[str] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            lines.append("".join(current))
            current = []
            i += 1
        elif ch == "\r" and i + 1 < n and source[i + 1] == "\n":
            lines.append("".join(current))
            current = []
            i += 2
        else:
            current.append(ch)
            i += 1
    lines.append("".join(current))
    return lines


def slice_span(source: str, span: SourceSpan) -> str:
    """The exact text a span covers in `source`."""
    lines = split_lines(source)
    if span.start_line == span.end_line:
        return lines[span.start_line - 1][span.start_col - 1 : span.end_col]
    parts = [lines[span.start_line - 1][span.start_col - 1 :]]
    for line_no in range(span.start_line + 1, span.end_line):
        parts.append(lines[line_no - 1])
    parts.append(lines[span.end_line - 1][: span.end_col])
    return "\n".join(parts)


def char_range(source: str, span: SourceSpan) -> tuple[int, int]:
    """Absolute [start, end) character offsets of a span, newlines counted as one."""
    lines = split_lines(source)
    starts = []
    offset = 0
    for line in lines:
        starts.append(offset)
        offset += len(line) + 1
    begin = starts[span.start_line - 1] + span.start_col - 1
    end = starts[span.end_line - 1] + span.end_col
    return begin, end
