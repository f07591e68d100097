"""Reading and writing the JSON network format.

A document looks like::

    {"input_dim": 1,
     "layers": [{"weights": [[1], [-1]], "biases": [0, 0]},
                {"weights": [[1, 1]], "biases": [0]}]}

Numbers are JSON integers or strings ``"p/q"``.  Hidden neurons are numbered
layer-major (first hidden layer rows first), which is the order used by
activation patterns everywhere in the package.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .model import Layer, ModelError, Network

__all__ = ["NetworkFormatError", "parse_network", "serialize_network", "load_network", "dump_rational"]


class NetworkFormatError(ModelError):
    """Malformed network document."""


class ShapeMismatchError(NetworkFormatError):
    pass


class ZeroDenominatorError(NetworkFormatError):
    pass


def _parse_number(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise NetworkFormatError(f"{where}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise NetworkFormatError(f"{where}: {value!r} is not an integer or 'p/q'") from None
        if q == 0:
            raise ZeroDenominatorError(f"{where}: zero denominator in {value!r}")
        if q < 0:
            raise NetworkFormatError(f"{where}: denominator must be positive in {value!r}")
        return Fraction(p, q)
    raise NetworkFormatError(f"{where}: expected integer or 'p/q' string, got {type(value).__name__}")


def dump_rational(q: Fraction):
    """JSON form of a rational: a plain int when integral, else ``"p/q"``."""
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_network(data: bytes | str) -> Network:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise NetworkFormatError("top level must be an object")
    for key in ("input_dim", "layers"):
        if key not in doc:
            raise NetworkFormatError(f"missing field {key!r}")
    n = doc["input_dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise NetworkFormatError("input_dim must be a positive integer")
    raw_layers = doc["layers"]
    if not isinstance(raw_layers, list) or not raw_layers:
        raise NetworkFormatError("layers must be a nonempty list")

    layers = []
    width = n
    for k, raw in enumerate(raw_layers):
        if not isinstance(raw, dict) or "weights" not in raw or "biases" not in raw:
            raise NetworkFormatError(f"layer {k}: needs 'weights' and 'biases'")
        rows, biases = raw["weights"], raw["biases"]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise NetworkFormatError(f"layer {k}: weights must be a nonempty list of rows")
        if not isinstance(biases, list):
            raise NetworkFormatError(f"layer {k}: biases must be a list")
        if len(biases) != len(rows):
            raise ShapeMismatchError(f"layer {k}: {len(rows)} weight rows but {len(biases)} biases")
        for r, row in enumerate(rows):
            if len(row) != width:
                raise ShapeMismatchError(
                    f"layer {k}, row {r}: has {len(row)} columns, expected {width}"
                )
        weights = tuple(
            tuple(_parse_number(v, f"layer {k}, weight[{r}][{c}]") for c, v in enumerate(row))
            for r, row in enumerate(rows)
        )
        bias = tuple(_parse_number(v, f"layer {k}, bias[{r}]") for r, v in enumerate(biases))
        layers.append(Layer(weights, bias))
        width = len(rows)
    if width != 1:
        raise ShapeMismatchError(f"final layer must have exactly one row, got {width}")
    return Network(n, tuple(layers))


def serialize_network(net: Network) -> bytes:
    doc = {
        "input_dim": net.input_dim,
        "layers": [
            {
                "weights": [[dump_rational(v) for v in row] for row in lay.weights],
                "biases": [dump_rational(v) for v in lay.biases],
            }
            for lay in net.layers
        ],
    }
    return (json.dumps(doc, indent=1) + "\n").encode()


def load_network(path) -> Network:
    with open(path, "rb") as fh:
        return parse_network(fh.read())
