from fractions import Fraction

import pytest

from spnet.network import SPNetwork
from spnet.trees import BucketTree, tree_to_network

# one pass/fail line per acceptance gate, echoed in the terminal summary
GATE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if GATE_LINES:
        terminalreporter.section("acceptance gates")
        for number in sorted(GATE_LINES):
            terminalreporter.write_line(GATE_LINES[number])


# (edge, parallel?) for steps 2..7 of the worked Bernoulli example
FIG1_STEPS = [(1, True), (1, True), (2, True), (1, False), (5, True), (2, False)]
# attractor of labels 2..7 in the worked binary example
FIG2_ATTRACTORS = [1, 2, 2, 4, 1, 2]


@pytest.fixture
def fig1_network() -> SPNetwork:
    net = SPNetwork()
    for j, parallel in FIG1_STEPS:
        net.duplicate(j, parallel)
    return net


@pytest.fixture
def fig2_tree() -> BucketTree:
    return BucketTree.from_attractors(2, FIG2_ATTRACTORS)


@pytest.fixture
def fig2_network(fig2_tree) -> SPNetwork:
    return tree_to_network(fig2_tree)


def F(text: str) -> Fraction:
    return Fraction(text)
