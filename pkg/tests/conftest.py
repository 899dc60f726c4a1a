import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eentropy import Alphabet, SymbolString  # noqa: E402


def random_string(rng: random.Random, n: int, size: int) -> SymbolString:
    alphabet = Alphabet(tuple(range(97, 97 + size)))
    return SymbolString(alphabet, tuple(rng.randrange(size) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(12345)


BINARY = Alphabet((ord("1"), ord("0")))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
