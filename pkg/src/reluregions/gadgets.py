"""Reduction gadgets and example networks with known region counts.

Layer layouts (they fix the neuron order seen in activation patterns):

* ``T_n``: one hidden layer; coordinate ``i`` owns neurons
  ``4i..4i+3`` = ``relu(-x_i), relu(x_i), relu(2x_i-1), relu(2x_i-2)`` with
  output weights ``-1, -1, 1, -1``.
* ``T_{n,eps}``: the ``T_n`` layer, then one neuron ``relu(eps + T_n)``.
* ``N_phi``: layer 1 holds the ``T_n`` neurons followed by one neuron per
  clause, ``relu(1 - sum_{J+} x_j - sum_{J-} (1 - x_j))``; layer 2 is the
  single neuron ``relu(T_n + eps - sum clauses)``.
* ``N_phi^(K,L)``: for ``K >= 2`` layer 1 also gets ``relu(x_1), relu(-x_1)``
  and layer 2 gets ``K - 1`` neurons ``relu(2(n+m)(x_1 - k))``; extra layers
  carry identity pairs ``relu(t), relu(-t)``.
* ``N_phi*``: layer 1 as in ``N_phi``; layer 2 ``a = relu(eps + T_n)`` and
  ``b = relu(1 - (n+1) eps - sum clauses)``; layer 3 the min gate
  ``relu(b - a), relu(b), relu(-b)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import DimensionError, Layer, ModelError, Network, as_rational

__all__ = [
    "CnfFormula",
    "DimacsError",
    "parse_dimacs",
    "brute_force_models",
    "build_T",
    "build_T_eps",
    "build_N_phi",
    "build_N_phi_KL",
    "build_N_phi_star",
    "amplify",
    "build_arrangement_network",
    "subtract",
    "pad_to_depth",
    "min_gate",
    "max_gate",
    "build_zanotti",
    "build_fig2",
    "identity_network",
]

F = Fraction


class DimacsError(ValueError):
    """Malformed DIMACS input."""


class GadgetError(ValueError):
    """Invalid gadget parameters."""


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables ``1..num_vars``; each clause is ``(J+, J-)``."""

    num_vars: int
    clauses: tuple[tuple[frozenset, frozenset], ...] = ()

    def __post_init__(self):
        if self.num_vars < 1:
            raise GadgetError("a formula needs at least one variable")
        cl = []
        for pos, neg in self.clauses:
            pos, neg = frozenset(pos), frozenset(neg)
            if pos & neg:
                raise GadgetError(f"clause has a variable in both signs: {sorted(pos & neg)}")
            for j in pos | neg:
                if not 1 <= j <= self.num_vars:
                    raise GadgetError(f"variable {j} out of range 1..{self.num_vars}")
            cl.append((pos, neg))
        object.__setattr__(self, "clauses", tuple(cl))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, bits: Sequence[int]) -> bool:
        return all(
            any(bits[j - 1] for j in pos) or any(not bits[j - 1] for j in neg)
            for pos, neg in self.clauses
        )

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.m}"]
        for pos, neg in self.clauses:
            lits = sorted(pos) + [-j for j in sorted(neg)]
            lines.append(" ".join(map(str, lits)) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad header {line!r}") from None
            if header[0] < 1 or header[1] < 0:
                raise DimacsError(f"line {lineno}: bad header {line!r}")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: {tok!r} is not a literal") from None
            if lit == 0:
                clauses.append(_clause(current, header[0], lineno))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        clauses.append(_clause(current, header[0], "end"))
    return CnfFormula(header[0], tuple(clauses))


def _clause(lits, n, where):
    pos, neg = set(), set()
    for lit in lits:
        if abs(lit) > n:
            raise DimacsError(f"line {where}: variable {abs(lit)} out of range 1..{n}")
        (pos if lit > 0 else neg).add(abs(lit))
    if pos & neg:
        raise DimacsError(f"line {where}: tautological clause (contains x and not x)")
    return frozenset(pos), frozenset(neg)


def brute_force_models(cnf: CnfFormula) -> int:
    """Number of satisfying 0-1 assignments."""
    return sum(cnf.satisfied_by(bits) for bits in itertools.product((0, 1), repeat=cnf.num_vars))


# -- building blocks -----------------------------------------------------------

def _unit(n, i, scale=1):
    row = [F(0)] * n
    row[i] = F(scale)
    return row


def _t_layer(n):
    """Rows, biases and output weights of the ``T_n`` hidden layer."""
    rows, bias, out = [], [], []
    for i in range(n):
        for s, b, w in ((-1, 0, -1), (1, 0, -1), (2, -1, 1), (2, -2, -1)):
            rows.append(_unit(n, i, s))
            bias.append(F(b))
            out.append(F(w))
    return rows, bias, out


def _clause_layer(cnf: CnfFormula):
    n = cnf.num_vars
    rows, bias = [], []
    for pos, neg in cnf.clauses:
        row = [F(0)] * n
        for j in pos:
            row[j - 1] = F(-1)
        for j in neg:
            row[j - 1] = F(1)
        rows.append(row)
        bias.append(F(1 - len(neg)))
    return rows, bias


def build_T(n: int) -> Network:
    if n < 1:
        raise GadgetError("n must be at least 1")
    rows, bias, out = _t_layer(n)
    return Network(n, (Layer(rows, bias), Layer((out,), (F(0),))))


def build_T_eps(n: int, eps=F(1, 3)) -> Network:
    eps = as_rational(eps)
    if n < 1:
        raise GadgetError("n must be at least 1")
    if not 0 < eps < F(1, 2):
        raise GadgetError("eps must satisfy 0 < eps < 1/2")
    rows, bias, out = _t_layer(n)
    return Network(n, (Layer(rows, bias), Layer((out,), (eps,)), Layer(((F(1),),), (F(0),))))


def phi_epsilon(cnf: CnfFormula) -> Fraction:
    return F(1, cnf.num_vars + 1)


def star_epsilon(cnf: CnfFormula) -> Fraction:
    n, m = cnf.num_vars, cnf.m
    return F(1, 2 + n + n * m)


def _phi_layers(cnf: CnfFormula):
    """First layer of ``N_phi`` plus the row of its layer-2 neuron."""
    n, m = cnf.num_vars, cnf.m
    trows, tbias, tout = _t_layer(n)
    crows, cbias = _clause_layer(cnf)
    first = Layer(trows + crows, tbias + cbias)
    second_row = tout + [F(-1)] * m
    return first, second_row


def build_N_phi(cnf: CnfFormula) -> Network:
    first, row = _phi_layers(cnf)
    eps = phi_epsilon(cnf)
    return Network(cnf.num_vars, (first, Layer((row,), (eps,)), Layer(((F(1),),), (F(0),))))


def _identity_pair_layer(width_in, outputs):
    """Hidden layer holding ``relu(t), relu(-t)`` for each affine output ``t``.

    ``outputs`` is a list of ``(weights, bias)`` over the previous layer.
    """
    rows, bias = [], []
    for w, b in outputs:
        rows.append(list(w))
        bias.append(b)
        rows.append([-v for v in w])
        bias.append(-b)
    return Layer(rows, bias)


def _pair_readout(k):
    """Weights recovering ``t`` from a pair layer: ``relu(t) - relu(-t)``."""
    w = []
    for _ in range(k):
        w += [F(1), F(-1)]
    return w


def build_N_phi_KL(cnf: CnfFormula, K: int = 1, L: int = 2) -> Network:
    """``N_phi`` extended to ``K`` regions on unsatisfiable input and padded to ``L`` hidden layers."""
    if K < 1 or L < 2:
        raise GadgetError("need K >= 1 and L >= 2")
    n, m = cnf.num_vars, cnf.m
    first, row = _phi_layers(cnf)
    eps = phi_epsilon(cnf)
    width1 = first.n_out
    if K >= 2:
        # relu(x_1) and relu(-x_1) appended to layer 1
        first = Layer(
            list(first.weights) + [_unit(n, 0, 1), _unit(n, 0, -1)],
            list(first.biases) + [F(0), F(0)],
        )
    w1 = first.n_out
    rows2 = [row + [F(0)] * (w1 - width1)]
    bias2 = [eps]
    scale = 2 * (n + m)
    for k in range(2, K + 1):
        r = [F(0)] * w1
        r[width1] = F(scale)
        r[width1 + 1] = F(-scale)
        rows2.append(r)
        bias2.append(F(-scale * k))
    second = Layer(rows2, bias2)
    readout = [F(1)] + [F(-1)] * (K - 1)
    layers = [first, second]
    out_w, out_b = readout, F(0)
    for _ in range(L - 2):
        pad = _identity_pair_layer(len(out_w), [(out_w, out_b)])
        layers.append(pad)
        out_w, out_b = _pair_readout(1), F(0)
    layers.append(Layer((out_w,), (out_b,)))
    return Network(n, tuple(layers))


def build_N_phi_star(cnf: CnfFormula, L: int = 3) -> Network:
    """``min(T_{n,eps}, relu(1 - (n+1) eps - sum clauses))``, padded to ``L`` hidden layers."""
    if L < 3:
        raise GadgetError("need L >= 3")
    for pos, neg in cnf.clauses:
        if not pos and not neg:
            raise GadgetError("empty clause")
    n, m = cnf.num_vars, cnf.m
    eps = star_epsilon(cnf)
    trows, tbias, tout = _t_layer(n)
    crows, cbias = _clause_layer(cnf)
    first = Layer(trows + crows, tbias + cbias)
    a_row = tout + [F(0)] * m
    b_row = [F(0)] * (4 * n) + [F(-1)] * m
    second = Layer((a_row, b_row), (eps, 1 - (n + 1) * eps))
    third = Layer(((F(-1), F(1)), (F(0), F(1)), (F(0), F(-1))), (F(0), F(0), F(0)))
    out_w, out_b = [F(-1), F(1), F(-1)], F(0)
    layers = [first, second, third]
    for _ in range(L - 3):
        layers.append(_identity_pair_layer(len(out_w), [(out_w, out_b)]))
        out_w, out_b = _pair_readout(1), F(0)
    layers.append(Layer((out_w,), (out_b,)))
    return Network(n, tuple(layers))


def _block_diag(mats, widths_in):
    rows = []
    off = 0
    total = sum(widths_in)
    for mat, w in zip(mats, widths_in):
        for r in mat:
            row = [F(0)] * total
            row[off:off + w] = r
            rows.append(row)
        off += w
    return rows


def amplify(net: Network, k: int) -> Network:
    """``sum_i f(x_i)`` over ``k`` disjoint copies of the input."""
    if k < 1:
        raise GadgetError("k must be at least 1")
    layers = []
    for idx, lay in enumerate(net.layers):
        if idx == len(net.layers) - 1:
            row = []
            for _ in range(k):
                row += list(lay.weights[0])
            layers.append(Layer((row,), (k * lay.biases[0],)))
        else:
            rows = _block_diag([lay.weights] * k, [lay.n_in] * k)
            layers.append(Layer(rows, list(lay.biases) * k))
    return Network(net.input_dim * k, tuple(layers))


def build_arrangement_network(hyperplanes: Iterable, orient) -> Network:
    """``sum_i relu(w_i . x)`` with each ``w_i`` flipped so ``w_i . x* > 0``."""
    ws = []
    for h in hyperplanes:
        if len(h) == 2 and isinstance(h[0], (list, tuple)):
            h, b = h
            if as_rational(b) != 0:
                raise GadgetError("arrangement hyperplanes must pass through the origin")
        ws.append(tuple(as_rational(v) for v in h))
    x = [as_rational(v) for v in orient]
    if not ws:
        raise GadgetError("need at least one hyperplane")
    n = len(x)
    rows = []
    for w in ws:
        if len(w) != n:
            raise DimensionError("hyperplane and orienting point dimensions differ")
        if not any(w):
            raise GadgetError("zero normal vector")
        s = sum(a * b for a, b in zip(w, x))
        if s == 0:
            raise GadgetError("orienting point lies on a hyperplane")
        rows.append(list(w) if s > 0 else [-v for v in w])
    for a, b in itertools.combinations(rows, 2):
        if _proportional(a, b):
            raise GadgetError("duplicate hyperplane")
    return Network(n, (Layer(rows, [F(0)] * len(rows)), Layer(([F(1)] * len(rows),), (F(0),))))


def _proportional(a, b) -> bool:
    i = next(j for j, v in enumerate(a) if v)
    if not b[i]:
        return False
    r = b[i] / a[i]
    return all(r * u == v for u, v in zip(a, b))


def identity_network(n: int, coefficients=None) -> Network:
    """The linear map ``c . x`` as a network with one hidden layer of identity pairs."""
    c = [F(1)] * n if coefficients is None else [as_rational(v) for v in coefficients]
    hidden = _identity_pair_layer(n, [(c, F(0))])
    return Network(n, (hidden, Layer((_pair_readout(1),), (F(0),))))


def pad_to_depth(net: Network, depth: int) -> Network:
    """Same function with ``depth`` hidden layers (identity pairs before the output)."""
    if depth < net.depth:
        raise GadgetError("cannot reduce depth")
    if depth == net.depth:
        return net
    out = net.layers[-1]
    layers = list(net.layers[:-1])
    w, b = list(out.weights[0]), out.biases[0]
    for _ in range(depth - net.depth):
        layers.append(_identity_pair_layer(len(w), [(w, b)]))
        w, b = _pair_readout(1), F(0)
    layers.append(Layer((w,), (b,)))
    return Network(net.input_dim, tuple(layers))


def subtract(a: Network, b: Network) -> Network:
    """``f_a - f_b``, computing both networks side by side."""
    if a.input_dim != b.input_dim:
        raise DimensionError(f"input dimensions differ: {a.input_dim} vs {b.input_dim}")
    d = max(a.depth, b.depth, 1)
    a, b = pad_to_depth(a, d), pad_to_depth(b, d)
    layers = [Layer(list(a.layers[0].weights) + list(b.layers[0].weights), list(a.layers[0].biases) + list(b.layers[0].biases))]
    for k in range(1, d):
        la, lb = a.layers[k], b.layers[k]
        rows = _block_diag([la.weights, lb.weights], [la.n_in, lb.n_in])
        layers.append(Layer(rows, list(la.biases) + list(lb.biases)))
    oa, ob = a.layers[-1], b.layers[-1]
    row = list(oa.weights[0]) + [-v for v in ob.weights[0]]
    layers.append(Layer((row,), (oa.biases[0] - ob.biases[0],)))
    return Network(a.input_dim, tuple(layers))


def min_gate(a, b):
    """Neuron rows and readout for ``min(a, b)``; ``a, b`` are ``(weights, bias)``.

    Returns ``(rows, biases, readout)``: ``-relu(b - a) + relu(b) - relu(-b)``.
    """
    (wa, ba), (wb, bb) = a, b
    rows = [[y - x for x, y in zip(wa, wb)], list(wb), [-v for v in wb]]
    bias = [bb - ba, bb, -bb]
    return rows, bias, [F(-1), F(1), F(-1)]


def max_gate(a, b):
    """``max(a, b) = relu(b - a) + relu(a) - relu(-a)``, same shape as ``min_gate``."""
    (wa, ba), (wb, bb) = a, b
    rows = [[y - x for x, y in zip(wa, wb)], list(wa), [-v for v in wa]]
    bias = [bb - ba, ba, -ba]
    return rows, bias, [F(1), F(1), F(-1)]


def build_zanotti() -> Network:
    """``min(y, max(-1, -x), max(3 - 2x, -x))`` on inputs ``(x, y)``.

    Layer 1: ``relu(y), relu(-y), relu(x), relu(-x), relu(x-1), relu(3-x)``,
    giving ``max(-1,-x) = relu(-x) - relu(x) + relu(x-1)`` and
    ``max(3-2x,-x) = relu(-x) - relu(x) + relu(3-x)``.  Layer 2: the min of
    those two plus a copy of ``y``; layer 3: the min with ``y``.
    """
    L1 = Layer(
        ([0, 1], [0, -1], [1, 0], [-1, 0], [1, 0], [-1, 0]),
        (0, 0, 0, 0, -1, 3),
    )
    u = ([0, 0, -1, 1, 1, 0], F(0))
    v = ([0, 0, -1, 1, 0, 1], F(0))
    rows, bias, ro = min_gate(u, v)
    y = ([1, -1, 0, 0, 0, 0], F(0))
    rows2 = rows + [y[0], [-t for t in y[0]]]
    L2 = Layer(rows2, bias + [0, 0])
    w = (ro + [0, 0], F(0))
    yy = ([0, 0, 0, 1, -1], F(0))
    rows3, bias3, ro3 = min_gate(yy, w)
    L3 = Layer(rows3, bias3)
    return Network(2, (L1, L2, L3, Layer((ro3,), (0,))))


def build_fig2() -> Network:
    """``relu(x) + relu(-y) - relu(x - y) + min(relu(x-2), relu(y-2)) - 2 min(relu(x-1), relu(y-1))``.

    Layer 1: ``relu(x), relu(-y), relu(x-y), relu(x-2), relu(y-2), relu(x-1), relu(y-1)``;
    layer 2: identity pair for ``g = relu(x) + relu(-y) - relu(x-y)`` and the two min gates.
    """
    L1 = Layer(
        ([1, 0], [0, -1], [1, -1], [1, 0], [0, 1], [1, 0], [0, 1]),
        (0, 0, 0, -2, -2, -1, -1),
    )
    g = ([1, 1, -1, 0, 0, 0, 0], F(0))
    e = lambda k: [F(int(i == k)) for i in range(7)]
    r1, b1, ro1 = min_gate((e(3), F(0)), (e(4), F(0)))
    r2, b2, ro2 = min_gate((e(5), F(0)), (e(6), F(0)))
    pair = _identity_pair_layer(7, [g])
    rows = list(pair.weights) + r1 + r2
    bias = list(pair.biases) + b1 + b2
    L2 = Layer(rows, bias)
    out = [F(1), F(-1)] + ro1 + [-2 * v for v in ro2]
    return Network(2, (L1, L2, Layer((out,), (0,))))
