import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reluregions.gadgets import parse_dimacs
from reluregions.model import Network


def abs_net():
    return Network.from_lists(1, [([[1], [-1]], [0, 0]), ([[1, 1]], [0])])


def identity_1d():
    """max(0, x) - max(0, -x)."""
    return Network.from_lists(1, [([[1], [-1]], [0, 0]), ([[1, -1]], [0])])


def zero_net(n=1):
    return Network.from_lists(n, [([[0] * n], [0]), ([[0]], [0])])


def two_breakpoints():
    """relu(x) - 2 relu(x - 1): pieces 0, x, 2 - x."""
    return Network.from_lists(1, [([[1], [1]], [0, -1]), ([[1, -2]], [0])])


def triangle_net():
    """max(0,x) + max(0,-y) - max(0,x-y)."""
    return Network.from_lists(2, [([[1, 0], [0, -1], [1, -1]], [0, 0, 0]), ([[1, 1, -1]], [0])])


PHI = "p cnf 2 2\n-1 0\n1 2 0\n"
PSI = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n"


@pytest.fixture
def phi():
    return parse_dimacs(PHI)


@pytest.fixture
def psi():
    return parse_dimacs(PSI)


F = Fraction


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(c))
