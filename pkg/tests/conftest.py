import sys

import pytest

from mixang.qp import QP, Arrow, Potential, Quiver


def make_qp(vertices, arrows, terms=()):
    return QP(Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows)), Potential(tuple(terms)))


@pytest.fixture
def a2():
    return make_qp([1, 2], [("a", 1, 2)])


@pytest.fixture
def a3():
    return make_qp([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])


@pytest.fixture
def three_cycle():
    return make_qp([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)], [(1, ("a", "b", "c"))])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
