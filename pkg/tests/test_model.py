from fractions import Fraction as F

import pytest

from conftest import abs_net
from reluregions.gadgets import build_N_phi, build_T, parse_dimacs
from reluregions.model import (
    AffineFunction,
    DimensionError,
    ModelError,
    Network,
    affine_map_of_pattern,
    coefficient_bound,
    encoding_size,
    evaluate,
    integer_size,
    max_entry_size,
    pattern_at,
    preactivation_affine,
    rational_size,
)
from conftest import PSI


def test_sizes():
    assert integer_size(0) == 0
    assert rational_size(F(1, 2)) == 4
    single = Network.from_lists(1, [([[1]], [0]), ([[1]], [0])])
    assert encoding_size(single) == 6


def test_evaluate_examples():
    assert evaluate(abs_net(), [-3]) == 3
    assert evaluate(build_T(1), [F(1, 2)]) == F(-1, 2)
    assert evaluate(build_N_phi(parse_dimacs(PSI)), [F(1, 2), F(1, 2)]) == 0


def test_evaluate_wrong_dimension():
    with pytest.raises(DimensionError):
        evaluate(abs_net(), [1, 2])


@pytest.mark.parametrize("x, expected", [(1, (1, 0)), (0, (0, 0)), (-2, (0, 1))])
def test_pattern_at(x, expected):
    assert pattern_at(abs_net(), [x]) == expected


def test_preactivation_affine():
    net = abs_net()
    assert preactivation_affine(net, (1, 0), 0) == AffineFunction((1,), 0)
    assert preactivation_affine(net, (1, 0), 1) == AffineFunction((-1,), 0)
    deep = Network.from_lists(1, [([[1]], [0]), ([[1]], [-1]), ([[1]], [0])])
    assert preactivation_affine(deep, (1, 1), 1) == AffineFunction((1,), -1)
    # an inactive first neuron masks the second one's input
    assert preactivation_affine(deep, (0, 1), 1) == AffineFunction((0,), -1)


def test_affine_map_of_pattern():
    net = abs_net()
    assert affine_map_of_pattern(net, (1, 0)) == AffineFunction((1,), 0)
    assert affine_map_of_pattern(net, (0, 0)).is_zero()
    # algebraic only: the empty pattern (1, 1) still yields x + (-x)
    assert affine_map_of_pattern(net, (1, 1)).is_zero()


def test_coefficient_bound_formula():
    net = Network.from_lists(1, [([[1], [-1]], [0, 1]), ([[1, -1]], [0])])
    assert coefficient_bound(net) == 36 * 1 * 4 * max_entry_size(net)
    wide = Network.from_lists(1, [([[1]] * 4, [0, 1, 0, 0]), ([[1, -1, 0, 0]], [0])])
    assert coefficient_bound(wide) == 4 * coefficient_bound(net)


def test_realized_coefficients_within_bound():
    net = build_T(2)
    M = coefficient_bound(net)
    for bits in [(1, 0, 1, 0) * 2, (0,) * 8, (1,) * 8]:
        f = affine_map_of_pattern(net, bits)
        assert all(rational_size(c) <= M for c in f.coefficients + (f.constant,))


def test_network_validation():
    with pytest.raises(ModelError):
        Network.from_lists(1, [([[1, 2]], [0]), ([[1]], [0])])
    with pytest.raises(ModelError):
        Network.from_lists(1, [([[1]], [0]), ([[1], [1]], [0, 0])])


def test_affine_function_arithmetic():
    f = AffineFunction((1, 2), 3)
    g = AffineFunction((F(1, 2), 0), -1)
    assert (f + g)([2, 1]) == f([2, 1]) + g([2, 1])
    assert (f - f).is_zero()
    assert str(AffineFunction((1, -2), 0)) == "1*x1 - 2*x2"
