import json
import random
from pathlib import Path

import pytest

from tdobs.graph import Graph

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def frozen():
    """Oracle values frozen by tools/freeze_oracle.py."""
    return json.loads((DATA / "oracle_expected.json").read_text())


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_perm(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


# acceptance reporting --------------------------------------------------------

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
