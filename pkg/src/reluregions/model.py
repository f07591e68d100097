"""Exact network model: rationals, affine functions, networks and activation patterns.

Neurons are indexed layer-major: all neurons of the first hidden layer in row
order, then the second hidden layer, and so on.  Activation patterns are tuples
of 0/1 over that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "integer_size",
    "rational_size",
    "matrix_size",
    "AffineFunction",
    "Layer",
    "Network",
    "ModelError",
    "DimensionError",
    "encoding_size",
    "evaluate",
    "pattern_at",
    "preactivations_at",
    "preactivation_affine",
    "layer_preactivations",
    "affine_map_of_pattern",
    "coefficient_bound",
    "max_entry_size",
]


class ModelError(ValueError):
    """Invalid network construction."""


class DimensionError(ModelError):
    """Input or pattern length does not match the network."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a canonical Fraction.

    Floats are rejected; every number in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


# -- encoding sizes -----------------------------------------------------------

def integer_size(k: int) -> int:
    """Bit size ceil(log2(k+1)) of a nonnegative integer."""
    if k < 0:
        raise ValueError("integer encoding size is defined for k >= 0")
    return k.bit_length()


def rational_size(q) -> int:
    """Encoding size of a number.

    Nonnegative integers use the integer size; every other value uses the
    fraction size ``1 + size(|p|) + size(q)`` of its reduced form.
    """
    q = as_rational(q)
    if q.denominator == 1 and q.numerator >= 0:
        return integer_size(q.numerator)
    return 1 + integer_size(abs(q.numerator)) + integer_size(q.denominator)


def matrix_size(rows: Sequence[Sequence]) -> int:
    n = len(rows)
    m = len(rows[0]) if n else 0
    return n * m + sum(rational_size(v) for row in rows for v in row)


# -- affine functions ---------------------------------------------------------

@dataclass(frozen=True)
class AffineFunction:
    """``x -> coefficients . x + constant`` with exact coefficients.

    Equality and hashing are structural, which makes function dedup a set
    operation.
    """

    coefficients: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(as_rational(c) for c in self.coefficients)
        )
        object.__setattr__(self, "constant", as_rational(self.constant))

    @classmethod
    def zero(cls, dim: int) -> "AffineFunction":
        return cls((Fraction(0),) * dim, Fraction(0))

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "AffineFunction":
        coeffs = [Fraction(0)] * dim
        coeffs[i] = Fraction(1)
        return cls(tuple(coeffs), Fraction(0))

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.dim:
            raise DimensionError(f"expected {self.dim} inputs, got {len(x)}")
        return sum((c * as_rational(v) for c, v in zip(self.coefficients, x)), self.constant)

    def __add__(self, other: "AffineFunction") -> "AffineFunction":
        return AffineFunction(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
            self.constant + other.constant,
        )

    def __sub__(self, other: "AffineFunction") -> "AffineFunction":
        return self + other.scaled(-1)

    def __neg__(self) -> "AffineFunction":
        return self.scaled(-1)

    def scaled(self, s) -> "AffineFunction":
        s = as_rational(s)
        return AffineFunction(tuple(s * c for c in self.coefficients), s * self.constant)

    def is_constant(self) -> bool:
        return not any(self.coefficients)

    def is_zero(self) -> bool:
        return self.is_constant() and self.constant == 0

    def integer_row(self) -> tuple[list[int], int]:
        """Positive multiple ``(a, b)`` of the function with integer entries."""
        den = lcm(*(c.denominator for c in self.coefficients), self.constant.denominator)
        return [int(c * den) for c in self.coefficients], int(self.constant * den)

    def __str__(self) -> str:
        terms = [f"{c}*x{i + 1}" for i, c in enumerate(self.coefficients) if c]
        if self.constant or not terms:
            terms.append(str(self.constant))
        return " + ".join(terms).replace("+ -", "- ")


# -- networks -----------------------------------------------------------------

@dataclass(frozen=True)
class Layer:
    weights: tuple[tuple[Fraction, ...], ...]
    biases: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(tuple(as_rational(v) for v in row) for row in self.weights)
        b = tuple(as_rational(v) for v in self.biases)
        if len(w) != len(b):
            raise ModelError(f"layer has {len(w)} weight rows but {len(b)} biases")
        if not w:
            raise ModelError("layer has no neurons")
        width = len(w[0])
        if any(len(row) != width for row in w):
            raise ModelError("ragged weight matrix")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def n_out(self) -> int:
        return len(self.weights)

    @property
    def n_in(self) -> int:
        return len(self.weights[0])


@dataclass(frozen=True)
class Network:
    """Layered ReLU network ``T_{d+1} o relu o ... o relu o T_1`` with scalar output."""

    input_dim: int
    layers: tuple[Layer, ...]
    _offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        layers = tuple(
            lay if isinstance(lay, Layer) else Layer(*lay) for lay in self.layers
        )
        if not layers:
            raise ModelError("network needs at least one layer")
        if self.input_dim < 1:
            raise ModelError("input dimension must be positive")
        width = self.input_dim
        for k, lay in enumerate(layers):
            if lay.n_in != width:
                raise ModelError(
                    f"layer {k}: expects {lay.n_in} inputs but previous width is {width}"
                )
            width = lay.n_out
        if width != 1:
            raise ModelError(f"output layer must have one row, got {width}")
        offsets = [0]
        for lay in layers[:-1]:
            offsets.append(offsets[-1] + lay.n_out)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "_offsets", tuple(offsets))

    @classmethod
    def from_lists(cls, input_dim: int, layers: Iterable) -> "Network":
        return cls(input_dim, tuple(Layer(tuple(map(tuple, w)), tuple(b)) for w, b in layers))

    @property
    def hidden(self) -> tuple[Layer, ...]:
        return self.layers[:-1]

    @property
    def depth(self) -> int:
        """Number of hidden layers ``d``."""
        return len(self.layers) - 1

    @property
    def size(self) -> int:
        """Number of hidden neurons ``s(N)``."""
        return self._offsets[-1]

    @property
    def widths(self) -> tuple[int, ...]:
        return (self.input_dim,) + tuple(lay.n_out for lay in self.layers)

    def neuron_layer(self, i: int) -> tuple[int, int]:
        """Map a global neuron index to (hidden layer index, row)."""
        if not 0 <= i < self.size:
            raise IndexError(f"neuron index {i} out of range for s(N)={self.size}")
        for k in range(self.depth - 1, -1, -1):
            if i >= self._offsets[k]:
                return k, i - self._offsets[k]
        raise AssertionError("unreachable")

    def layer_slice(self, k: int) -> slice:
        start = self._offsets[k]
        return slice(start, start + self.layers[k].n_out)


def encoding_size(net: Network) -> int:
    return sum(
        matrix_size(lay.weights) + matrix_size([[b] for b in lay.biases])
        for lay in net.layers
    )


def max_entry_size(net: Network) -> int:
    return max(
        rational_size(v)
        for lay in net.layers
        for v in (*(e for row in lay.weights for e in row), *lay.biases)
    )


def coefficient_bound(net: Network) -> int:
    """Bound ``36 d^2 n_max^2 <A_max>`` on the size of realized coefficients.

    ``d`` is clamped to at least 1 so the bound stays positive for purely
    affine networks.
    """
    d = max(net.depth, 1)
    n_max = max(net.widths)
    return 36 * d * d * n_max * n_max * max_entry_size(net)


# -- evaluation ---------------------------------------------------------------

def _check_input(net: Network, x: Sequence) -> list[Fraction]:
    if len(x) != net.input_dim:
        raise DimensionError(f"network expects {net.input_dim} inputs, got {len(x)}")
    return [as_rational(v) for v in x]


def _forward(net: Network, x: Sequence):
    """Yield pre-activation vectors of every layer (hidden and output)."""
    z = _check_input(net, x)
    for k, lay in enumerate(net.layers):
        pre = [sum((w * v for w, v in zip(row, z)), b) for row, b in zip(lay.weights, lay.biases)]
        yield pre
        z = [v if v > 0 else Fraction(0) for v in pre]


def evaluate(net: Network, x: Sequence) -> Fraction:
    *_, out = _forward(net, x)
    return out[0]


def preactivations_at(net: Network, x: Sequence) -> list[Fraction]:
    pres = list(_forward(net, x))[:-1]
    return [v for pre in pres for v in pre]


def pattern_at(net: Network, x: Sequence) -> tuple[int, ...]:
    """Activation pattern at ``x``; zero pre-activation counts as inactive."""
    return tuple(1 if v > 0 else 0 for v in preactivations_at(net, x))


def _check_pattern(net: Network, pattern: Sequence[int]) -> tuple[int, ...]:
    if len(pattern) != net.size:
        raise DimensionError(f"pattern length {len(pattern)} != s(N) = {net.size}")
    return tuple(int(bool(b)) for b in pattern)


def layer_preactivations(net: Network, k: int, inputs: Sequence[AffineFunction]) -> list[AffineFunction]:
    """Pre-activation functions of layer ``k`` given its (masked) input functions."""
    n = net.input_dim
    out = []
    for row, b in zip(net.layers[k].weights, net.layers[k].biases):
        coeffs = [Fraction(0)] * n
        const = b
        for w, f in zip(row, inputs):
            if w:
                const += w * f.constant
                for j, c in enumerate(f.coefficients):
                    if c:
                        coeffs[j] += w * c
        out.append(AffineFunction(tuple(coeffs), const))
    return out


def _masked_pass(net: Network, pattern: tuple[int, ...], upto_layer: int):
    n = net.input_dim
    z = [AffineFunction.coordinate(n, j) for j in range(n)]
    zero = AffineFunction.zero(n)
    for k in range(upto_layer):
        pre = layer_preactivations(net, k, z)
        bits = pattern[net.layer_slice(k)]
        z = [f if bit else zero for f, bit in zip(pre, bits)]
    return z


def preactivation_affine(net: Network, pattern: Sequence[int], i: int) -> AffineFunction:
    """Affine pre-activation of neuron ``i`` under ``pattern``.

    Upstream neurons are masked by the pattern; the neuron's own bit and
    everything downstream are irrelevant.
    """
    pattern = _check_pattern(net, pattern)
    k, row = net.neuron_layer(i)
    z = _masked_pass(net, pattern, k)
    return layer_preactivations(net, k, z)[row]


def affine_map_of_pattern(net: Network, pattern: Sequence[int]) -> AffineFunction:
    """The network collapsed to one affine map under ``pattern`` (no feasibility check)."""
    pattern = _check_pattern(net, pattern)
    z = _masked_pass(net, pattern, net.depth)
    return layer_preactivations(net, net.depth, z)[0]
