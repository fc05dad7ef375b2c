import pytest
from hypothesis import given, strategies as st

from qlc.errors import ParseFailure
from qlc.lexer import tokenize
from qlc.span import slice_span


def test_tokenizes_builtin_call_statement():
    tokens = tokenize("return word.charAt(index);")
    assert [t.text for t in tokens] == [
        "return", "word", ".", "charAt", "(", "index", ")", ";",
    ]


def test_empty_input_gives_no_tokens():
    assert tokenize("") == []


def test_unterminated_char_literal_is_lexical_error():
    with pytest.raises(ParseFailure) as exc:
        tokenize("char c = 'A")
    assert exc.value.errors[0].kind == "lexical"


def test_unterminated_string_literal_is_lexical_error():
    with pytest.raises(ParseFailure) as exc:
        tokenize('String s = "oops')
    assert exc.value.errors[0].kind == "lexical"


def test_illegal_character():
    with pytest.raises(ParseFailure) as exc:
        tokenize("int a = 3 @ 4;")
    assert "illegal character" in exc.value.errors[0].message


def test_comments_are_skipped_but_lines_still_count():
    source = "int a; // trailing\n/* block\ncomment */\nint b;"
    tokens = tokenize(source)
    assert [t.text for t in tokens] == ["int", "a", ";", "int", "b", ";"]
    assert tokens[3].span.start_line == 4


def test_unterminated_block_comment():
    with pytest.raises(ParseFailure):
        tokenize("int a; /* never closed")


def test_token_spans_slice_back_to_their_text():
    source = 'static char f(String w) { return w.charAt(0); } // x\nint g() { return 12 <= 3 ? 1 : 0; }'
    for token in tokenize(source):
        assert slice_span(source, token.span) == token.text


def test_literal_values():
    tokens = tokenize("'x' \"ab\\n\" 42 '\\t'")
    assert tokens[0].value == "x"
    assert tokens[1].value == "ab\n"
    assert tokens[2].value == 42
    assert tokens[3].value == "\t"


def test_crlf_counts_as_one_newline():
    tokens = tokenize("int a;\r\nint b;")
    assert tokens[3].span.start_line == 2
    assert tokens[3].span.start_col == 1


def test_two_char_operators_win_over_one_char():
    texts = [t.text for t in tokenize("a <= b >= c == d != e && f || g")]
    assert "<=" in texts and ">=" in texts and "==" in texts
    assert "!=" in texts and "&&" in texts and "||" in texts


@given(st.text(max_size=200))
def test_tokenize_total_over_arbitrary_text(text):
    # Any input either tokenizes or raises the structured failure.
    try:
        tokens = tokenize(text)
    except ParseFailure:
        return
    for token in tokens:
        assert token.span.start_line >= 1
        assert token.span.start_col >= 1
