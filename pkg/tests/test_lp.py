from fractions import Fraction as F

import pytest

from conftest import abs_net
from reluregions import lp
from reluregions.lp import (
    EMPTY,
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearConstraintSystem,
    closure_intersection_dim,
    lp_solve,
    polyhedron_dim,
    region_status,
)
from reluregions.model import Network


def system(n, *rows):
    return LinearConstraintSystem(n, tuple(rows))


def test_lp_examples():
    out = lp_solve(system(1, ((1,), "<=", 1)), [1])
    assert out.status == OPTIMAL and out.value == 1
    assert lp_solve(system(1, ((1,), "<=", 0), ((-1,), "<=", -1)), [1]).status == INFEASIBLE
    assert lp_solve(system(1, ((-1,), "<=", 0)), [1]).status == UNBOUNDED


def test_lp_min_and_duals():
    sys_ = system(2, ((1, 1), "<=", 4), ((-1, 0), "<=", 0), ((0, -1), "<=", 0), ((1, -1), "=", F(1, 2)))
    out = lp_solve(sys_, [1, 2], "min")
    assert out.status == OPTIMAL
    assert out.value == F(1, 2)
    assert sys_.contains(out.witness)
    for j in range(2):
        assert sum(y * c.coefficients[j] for y, c in zip(out.dual, sys_.constraints)) == [1, 2][j]


@pytest.mark.parametrize(
    "rows, n, dim",
    [
        ([((1,), "<=", 0), ((-1,), "<=", 0)], 1, 0),
        ([((1, 0), "<=", 1), ((-1, 0), "<=", 0), ((0, 1), "<=", 1), ((0, -1), "<=", 0)], 2, 2),
        ([((1,), "<=", -1), ((-1,), "<=", 0)], 1, -1),
        ([((1, 1, 0), "=", 1), ((0, 0, 1), "<=", 5)], 3, 2),
    ],
)
def test_polyhedron_dim(rows, n, dim):
    assert polyhedron_dim(system(n, *rows)) == dim


def test_region_status():
    net = abs_net()
    assert region_status(net, (1, 1)) == EMPTY
    assert region_status(net, (0, 0)) == 0
    assert region_status(net, (1, 0)) == 1


def test_closure_intersection_dim():
    assert closure_intersection_dim(abs_net(), (1, 0), (0, 1)) == 0
    plane = Network.from_lists(2, [([[1, 0]], [0]), ([[1]], [0])])
    assert closure_intersection_dim(plane, (1,), (0,)) == 1
    shifted = Network.from_lists(1, [([[1], [1]], [0, -1]), ([[1, 1]], [0])])
    # x <= 0 and x >= 1 never meet
    assert closure_intersection_dim(shifted, (0, 0), (1, 1)) == EMPTY


def test_backend_switch_round_trip():
    before = lp.BACKEND
    try:
        lp.use_backend("python")
        assert lp.BACKEND == "python"
        assert lp_solve(system(1, ((1,), "<=", 3)), [1]).value == 3
    finally:
        lp.use_backend(before)
    with pytest.raises(ValueError):
        lp.use_backend("fortran")
