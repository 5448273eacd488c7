import re
from pathlib import Path

import pytest

from cmgamma.constants import DEFAULT_CONSTANTS_PATH, load_constants


@pytest.fixture(scope="session")
def consts():
    return load_constants()


@pytest.fixture
def mutate_constants(tmp_path):
    """Write a copy of the constants file with one literal token replaced.

    Returns a function (old_line_regex, replacement) -> Path of the mutated
    file; exactly one line must match.
    """
    def _mutate(pattern: str, replacement: str) -> Path:
        text = DEFAULT_CONSTANTS_PATH.read_text()
        lines = text.splitlines()
        hits = [i for i, line in enumerate(lines) if re.fullmatch(pattern, line)]
        assert len(hits) == 1, f"pattern {pattern!r} matched {len(hits)} lines"
        lines[hits[0]] = replacement
        out = tmp_path / "mutated_constants.txt"
        out.write_text("\n".join(lines) + "\n")
        return out

    return _mutate
