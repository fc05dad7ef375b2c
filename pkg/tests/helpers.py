"""Shared test utilities: structural AST comparison and corpus access."""

from __future__ import annotations

from dataclasses import fields, is_dataclass

from qlc.span import SourceSpan

GOLDEN_SOURCE = """static char smallest(String word) {
  return smallestFrom(word, 0);
}

static char smallestFrom(String word, int index) {
  if(index == word.length() - 1) {
    return word.charAt(index);
  }
  else {
    char current = word.charAt(index);
    char rest = smallestFrom(word, index + 1);
    return current < rest ? current : rest;
  }
}
"""

_IGNORED_FIELDS = {"span", "name_span", "target_span", "loop_id", "header_line"}


def shape(node):
    """A span-free, loop-id-free structural fingerprint of an AST node."""
    if is_dataclass(node) and not isinstance(node, SourceSpan):
        parts = [type(node).__name__]
        for f in fields(node):
            if f.name in _IGNORED_FIELDS:
                continue
            parts.append((f.name, shape(getattr(node, f.name))))
        return tuple(parts)
    if isinstance(node, tuple):
        return tuple(shape(item) for item in node)
    return node


def structurally_equal(a, b) -> bool:
    return shape(a) == shape(b)
