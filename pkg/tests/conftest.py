import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import GOLDEN_SOURCE  # noqa: E402

from qlc.analysis import analyze  # noqa: E402
from qlc.parser import parse_entry_expression, parse_program  # noqa: E402


@pytest.fixture(scope="session")
def golden_source() -> str:
    return GOLDEN_SOURCE


@pytest.fixture(scope="session")
def golden_program(golden_source):
    return parse_program(golden_source)


@pytest.fixture(scope="session")
def golden_static(golden_program):
    return analyze(golden_program)


@pytest.fixture(scope="session")
def golden_entries():
    return [
        parse_entry_expression('smallest("ABBA")'),
        parse_entry_expression('smallestFrom("ACDC", 0)'),
    ]
