import pytest

from conftest import abs_net, identity_1d
from reluregions.census import count_regions
from reluregions.gadgets import build_T_eps, build_zanotti
from reluregions.model import DimensionError
from reluregions.oracle import family_formula, line_census, piecewise_line, sample_lower_bounds


def test_line_census_abs():
    r = line_census(abs_net())
    assert [r[d] for d in range(1, 7)] == [3, 2, 2, 2, 2, 2]


def test_line_census_t_eps():
    # one input is outside the gadget's n >= 2 regime: seven pieces, not five
    r = line_census(build_T_eps(1))
    assert r[4] == 7
    assert r[4] == count_regions(build_T_eps(1), (4,))[4]


def test_line_census_affine():
    r = line_census(identity_1d())
    assert r[1] == 3
    assert [r[d] for d in range(2, 7)] == [2, 1, 1, 1, 1]


def test_piecewise_line():
    line = piecewise_line(abs_net())
    assert line.breakpoints == (0,)


def test_line_needs_one_input():
    with pytest.raises(DimensionError):
        line_census(build_zanotti())


def test_sample_bounds():
    assert sample_lower_bounds(abs_net(), 200, seed=1)[1] == 2
    assert sample_lower_bounds(build_zanotti(), 1, seed=5)[0] == 1
    a = sample_lower_bounds(build_zanotti(), 300, seed=9)
    assert a == sample_lower_bounds(build_zanotti(), 300, seed=9)
    exact = count_regions(build_zanotti())
    assert a[0] <= exact[1] and a[1] <= exact[6]
    with pytest.raises(ValueError):
        sample_lower_bounds(abs_net(), 0)


def test_family_formula():
    assert family_formula("generic", m=3, n=2) == 7
    assert family_formula("t_eps", n=2) == 17
    assert family_formula("gadget", k=1, n=2) == 5
    assert family_formula("central_generic", m=3, n=2) == 6
    with pytest.raises(ValueError):
        family_formula("nope")
    with pytest.raises(ValueError):
        family_formula("generic", m=1)
