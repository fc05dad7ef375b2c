"""Hand-derived interpreter conformance fixtures.

Every expectation in this table was worked out by hand from the program
text before the interpreter existed; the suite asserts exact agreement.
loop_iters keys are loop ids in source order (the parser's numbering).
assigns maps (variable, function, invocation) to the canonical texts of
the values assigned, in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from helpers import GOLDEN_SOURCE


@dataclass(frozen=True)
class ConformanceCase:
    name: str
    source: str
    entry: str
    result: str | None = None  # canonical text; None when an error is expected
    error_kind: str | None = None
    max_depth: int | None = None
    loop_iters: dict = field(default_factory=dict)
    assigns: dict = field(default_factory=dict)


CASES: list[ConformanceCase] = [
    ConformanceCase(
        name="golden_smallest_abba",
        source=GOLDEN_SOURCE,
        entry='smallest("ABBA")',
        result="A",
        max_depth=5,
    ),
    ConformanceCase(
        name="golden_smallestfrom_acdc",
        source=GOLDEN_SOURCE,
        entry='smallestFrom("ACDC", 0)',
        result="A",
        max_depth=4,
        assigns={
            ("rest", "smallestFrom", 2): ["C"],
            ("current", "smallestFrom", 1): ["A"],
            ("current", "smallestFrom", 3): ["D"],
        },
    ),
    ConformanceCase(
        name="while_countdown",
        source=(
            "static int f(int n) {\n"
            "  int i = n;\n"
            "  int c = 0;\n"
            "  while (i > 0) {\n"
            "    i = i - 1;\n"
            "    c = c + 1;\n"
            "  }\n"
            "  return c;\n"
            "}\n"
        ),
        entry="f(4)",
        result="4",
        max_depth=1,
        loop_iters={0: 4},
    ),
    ConformanceCase(
        name="for_sum",
        source=(
            "static int sum(int n) {\n"
            "  int s = 0;\n"
            "  for (int i = 1; i <= n; i = i + 1) {\n"
            "    s = s + i;\n"
            "  }\n"
            "  return s;\n"
            "}\n"
        ),
        entry="sum(5)",
        result="15",
        loop_iters={0: 5},
        assigns={("s", "sum", 1): ["0", "1", "3", "6", "10", "15"]},
    ),
    ConformanceCase(
        name="nested_loops",
        source=(
            "static int g(int n) {\n"
            "  int c = 0;\n"
            "  int i = 0;\n"
            "  while (i < n) {\n"
            "    int j = 0;\n"
            "    while (j < i) {\n"
            "      c = c + 1;\n"
            "      j = j + 1;\n"
            "    }\n"
            "    i = i + 1;\n"
            "  }\n"
            "  return c;\n"
            "}\n"
        ),
        entry="g(4)",
        result="6",
        loop_iters={0: 4, 1: 6},
    ),
    ConformanceCase(
        name="loop_never_entered",
        source=(
            "static int z(int n) {\n"
            "  int c = 0;\n"
            "  while (n < 0) {\n"
            "    c = c + 1;\n"
            "  }\n"
            "  return c;\n"
            "}\n"
        ),
        entry="z(3)",
        result="0",
        loop_iters={0: 0},
    ),
    ConformanceCase(
        name="loop_summed_over_activations",
        source=(
            "static int rep() {\n"
            "  int k = 0;\n"
            "  for (int i = 0; i < 2; i = i + 1) {\n"
            "    k = k + 1;\n"
            "  }\n"
            "  return k;\n"
            "}\n"
            "\n"
            "static int thrice() {\n"
            "  int t = 0;\n"
            "  t = t + rep();\n"
            "  t = t + rep();\n"
            "  t = t + rep();\n"
            "  return t;\n"
            "}\n"
        ),
        entry="thrice()",
        result="6",
        max_depth=2,
        loop_iters={0: 6},
        assigns={("t", "thrice", 1): ["0", "2", "4", "6"]},
    ),
    ConformanceCase(
        name="ternary_min",
        source="static int m(int a, int b) { return a < b ? a : b; }\n",
        entry="m(3, 7)",
        result="3",
        max_depth=1,
    ),
    ConformanceCase(
        name="parity_else_branch",
        source=(
            "static int s(int x) {\n"
            "  if (x % 2 == 0) {\n"
            "    return 0;\n"
            "  }\n"
            "  else {\n"
            "    return 1;\n"
            "  }\n"
            "}\n"
        ),
        entry="s(7)",
        result="1",
    ),
    ConformanceCase(
        name="string_length",
        source="static int len(String w) { return w.length(); }\n",
        entry='len("hello")',
        result="5",
    ),
    ConformanceCase(
        name="char_at",
        source="static char at(String w, int i) { return w.charAt(i); }\n",
        entry='at("abc", 2)',
        result="c",
    ),
    ConformanceCase(
        name="char_at_out_of_bounds",
        source="static char at(String w, int i) { return w.charAt(i); }\n",
        entry='at("abc", 5)',
        error_kind="indexOutOfBounds",
    ),
    ConformanceCase(
        name="division_by_zero",
        source="static int d(int a) { return a / 0; }\n",
        entry="d(1)",
        error_kind="divisionByZero",
    ),
    ConformanceCase(
        name="division_truncates_toward_zero",
        source="static int q() { return -7 / 2; }\n",
        entry="q()",
        result="-3",
    ),
    ConformanceCase(
        name="remainder_follows_dividend",
        source="static int r(int a, int b) { return a % b; }\n",
        entry="r(-7, 2)",
        result="-1",
    ),
    ConformanceCase(
        name="remainder_positive_dividend",
        source="static int r(int a, int b) { return a % b; }\n",
        entry="r(7, -2)",
        result="1",
    ),
    ConformanceCase(
        name="integer_overflow",
        source="static int o() { return 9223372036854775806 + 2; }\n",
        entry="o()",
        error_kind="integerOverflow",
    ),
    ConformanceCase(
        name="fuel_exhausted",
        source="static int loop() { while (true) {} return 0; }\n",
        entry="loop()",
        error_kind="fuelExhausted",
    ),
    ConformanceCase(
        name="unbounded_recursion",
        source="static int rec(int n) { return rec(n + 1); }\n",
        entry="rec(0)",
        error_kind="stackOverflow",
    ),
    ConformanceCase(
        name="mutual_recursion",
        source=(
            "static boolean isEven(int n) {\n"
            "  if (n == 0) {\n"
            "    return true;\n"
            "  }\n"
            "  return isOdd(n - 1);\n"
            "}\n"
            "\n"
            "static boolean isOdd(int n) {\n"
            "  if (n == 0) {\n"
            "    return false;\n"
            "  }\n"
            "  return isEven(n - 1);\n"
            "}\n"
        ),
        entry="isEven(4)",
        result="true",
        max_depth=5,
    ),
    ConformanceCase(
        name="string_gatherer",
        source=(
            "static String dup(String w) {\n"
            '  String out = "";\n'
            "  for (int i = 0; i < w.length(); i = i + 1) {\n"
            "    out = out + w.charAt(i) + w.charAt(i);\n"
            "  }\n"
            "  return out;\n"
            "}\n"
        ),
        entry='dup("ab")',
        result='"aabb"',
        loop_iters={0: 2},
        assigns={("out", "dup", 1): ['""', '"aa"', '"aabb"']},
    ),
    ConformanceCase(
        name="most_wanted_holder_run",
        source=(
            "static char maxc(String w) {\n"
            "  char best = w.charAt(0);\n"
            "  for (int i = 1; i < w.length(); i = i + 1) {\n"
            "    char c = w.charAt(i);\n"
            "    if (c > best) {\n"
            "      best = c;\n"
            "    }\n"
            "  }\n"
            "  return best;\n"
            "}\n"
        ),
        entry='maxc("banana")',
        result="n",
        loop_iters={0: 5},
    ),
    ConformanceCase(
        name="assignment_sequence",
        source=(
            "static int acc() {\n"
            "  int t = 0;\n"
            "  t = t + 5;\n"
            "  t = t * 3;\n"
            "  return t;\n"
            "}\n"
        ),
        entry="acc()",
        result="15",
        assigns={("t", "acc", 1): ["0", "5", "15"]},
    ),
    ConformanceCase(
        name="short_circuit_and",
        source="static boolean sc(int x) { return x != 0 && 10 / x > 1; }\n",
        entry="sc(0)",
        result="false",
    ),
    ConformanceCase(
        name="uninitialized_read",
        source="static int u() { int x; return x; }\n",
        entry="u()",
        error_kind="typeError",
    ),
    ConformanceCase(
        name="char_plus_int_rejected",
        source="static int t1() { return 'a' + 1; }\n",
        entry="t1()",
        error_kind="typeError",
    ),
    ConformanceCase(
        name="void_return",
        source="static void nop() { return; }\n",
        entry="nop()",
        result="void",
    ),
    ConformanceCase(
        name="unary_negation",
        source="static int neg(int x) { return -x; }\n",
        entry="neg(5)",
        result="-5",
    ),
    ConformanceCase(
        name="shadowed_block_variable",
        source=(
            "static int sh() {\n"
            "  int v = 1;\n"
            "  if (true) {\n"
            "    int v = 2;\n"
            "    v = v + 1;\n"
            "  }\n"
            "  return v;\n"
            "}\n"
        ),
        entry="sh()",
        result="1",
        assigns={("v", "sh", 1): ["1", "2", "3"]},
    ),
    ConformanceCase(
        name="string_concat_mixed",
        source='static String label(int x) { return "n=" + x; }\n',
        entry="label(7)",
        result='"n=7"',
    ),
    ConformanceCase(
        name="single_frame",
        source="static int one() { return 1; }\n",
        entry="one()",
        result="1",
        max_depth=1,
    ),
]
