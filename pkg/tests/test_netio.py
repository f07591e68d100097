from fractions import Fraction as F

import pytest

from conftest import abs_net
from reluregions.gadgets import build_zanotti
from reluregions.netio import (
    NetworkFormatError,
    ShapeMismatchError,
    ZeroDenominatorError,
    load_network,
    parse_network,
    serialize_network,
)


def test_round_trip():
    for net in (abs_net(), build_zanotti()):
        assert parse_network(serialize_network(net)) == net


def test_rationals_as_strings():
    doc = '{"input_dim": 1, "layers": [{"weights": [["1/2"]], "biases": ["-3/4"]}, {"weights": [[2]], "biases": [0]}]}'
    net = parse_network(doc)
    assert net.layers[0].weights[0][0] == F(1, 2)
    assert net.layers[0].biases[0] == F(-3, 4)
    assert b'"1/2"' in serialize_network(net)


def test_shape_mismatch():
    doc = '{"input_dim": 2, "layers": [{"weights": [[1, 0], [0, 1]], "biases": [0, 0]}, {"weights": [[1, 1, 1]], "biases": [0]}]}'
    with pytest.raises(ShapeMismatchError):
        parse_network(doc)


def test_zero_denominator():
    doc = '{"input_dim": 1, "layers": [{"weights": [["1/0"]], "biases": [0]}, {"weights": [[1]], "biases": [0]}]}'
    with pytest.raises(ZeroDenominatorError):
        parse_network(doc)


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        "[]",
        '{"layers": []}',
        '{"input_dim": 1, "layers": [{"weights": [[true]], "biases": [0]}, {"weights": [[1]], "biases": [0]}]}',
        '{"input_dim": 1, "layers": [{"weights": [[1.5]], "biases": [0]}, {"weights": [[1]], "biases": [0]}]}',
        '{"input_dim": 1, "layers": [{"weights": [[1], [1]], "biases": [0, 0]}]}',
    ],
)
def test_malformed(doc):
    with pytest.raises(NetworkFormatError):
        parse_network(doc)


def test_load(tmp_path):
    p = tmp_path / "abs.json"
    p.write_bytes(serialize_network(abs_net()))
    assert load_network(p) == abs_net()
