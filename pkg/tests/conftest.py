import os
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[1]
BUNDLED = REPO / "data" / "ucr"


def dataset_root(name):
    """``$UCR_ROOT`` when it holds ``name``, otherwise the bundled data directory, else None."""
    env = os.environ.get("UCR_ROOT")
    for root in ([Path(env)] if env else []) + [BUNDLED]:
        if (root / name).is_dir():
            return root
    return None


@pytest.fixture
def golden_pair_words():
    from tsqubo.encoder import from_letters

    test = from_letters("ABACD", 5, source_id=100)
    train = from_letters("CBACA", 5, source_id=0, label=1)
    return test, train


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
