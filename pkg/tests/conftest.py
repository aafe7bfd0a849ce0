"""Shared fixtures: the worked figure pair and some frequently used subgroups."""

import random

import pytest

from stallings import RANK2, subgroup_graph


# The hand-checked pair whose meet core wraps once around a long loop while
# the join fills the whole rank-2 group.
FIGURE_LEFT = ("aBBa", "abbAABA", "ABaba")
FIGURE_RIGHT = ("aaba", "abbbbaaBBA")
FIGURE_MEET_WORD = "abbAABBBBaba"


def make(*texts):
    """Rank-2 subgroup from word texts."""
    return subgroup_graph([RANK2.word(t) for t in texts], RANK2)


@pytest.fixture
def figure_pair():
    return make(*FIGURE_LEFT), make(*FIGURE_RIGHT)


@pytest.fixture
def small_pair():
    """Meet <a^2>, join the whole group."""
    return make("a", "bab"), make("b", "aa")


@pytest.fixture
def rng():
    return random.Random(1234)


# Acceptance tests append their one-line outcomes here; the summary hook
# re-emits them uncaptured so they show up in any run's terminal output.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
