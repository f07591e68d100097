"""Networks with one hidden layer.

Neurons whose hyperplanes coincide are grouped into classes.  A class adds a
breakpoint to the network function unless its members cancel, in which case
it contributes an affine term.  The surviving hyperplanes form the effective
arrangement, whose open cells are exactly the connected regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .census import _int_row, _margin_lp, _value, count_regions
from .model import AffineFunction, ModelError, Network
from .report import CensusReport

__all__ = [
    "DepthError",
    "HyperplaneClass",
    "EffectiveArrangement",
    "group_hyperplanes",
    "class_cancels",
    "is_affine_shallow",
    "effective_arrangement",
    "count_arrangement_cells",
    "arrangement_cells",
    "shallow_census",
]


class DepthError(ModelError):
    """The operation needs a network with exactly one hidden layer."""


@dataclass(frozen=True)
class Member:
    neuron: int
    scale: Fraction
    out_weight: Fraction


@dataclass
class HyperplaneClass:
    """Neurons whose ``(w, b)`` are nonzero multiples of one representative."""

    weights: tuple[Fraction, ...]
    bias: Fraction
    members: list[Member] = field(default_factory=list)

    @property
    def positive(self) -> list[Member]:
        return [m for m in self.members if m.scale > 0]

    @property
    def negative(self) -> list[Member]:
        return [m for m in self.members if m.scale < 0]

    def sums(self) -> tuple[Fraction, Fraction]:
        """``(sum over I+ of a_i c_i, sum over I- of a_i c_i)``."""
        plus = sum((m.out_weight * m.scale for m in self.positive), Fraction(0))
        minus = sum((m.out_weight * m.scale for m in self.negative), Fraction(0))
        return plus, minus

    def affine(self) -> AffineFunction:
        return AffineFunction(self.weights, self.bias)


@dataclass(frozen=True)
class EffectiveArrangement:
    dimension: int
    hyperplanes: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()

    def __len__(self):
        return len(self.hyperplanes)


def _require_shallow(net: Network):
    if net.depth != 1:
        raise DepthError(
            f"network has {net.depth} hidden layers; this needs exactly one (use `count` for deep networks)"
        )


def group_hyperplanes(net: Network) -> tuple[list[HyperplaneClass], list[int]]:
    """Classes in order of their first neuron, plus the degenerate neurons
    (zero weight row, constant output)."""
    _require_shallow(net)
    hidden, out = net.layers
    a = out.weights[0]
    classes: list[HyperplaneClass] = []
    index: dict[tuple, HyperplaneClass] = {}
    degenerate = []
    for i, (w, b) in enumerate(zip(hidden.weights, hidden.biases)):
        lead = next((j for j, v in enumerate(w) if v), None)
        if lead is None:
            degenerate.append(i)
            continue
        # first nonzero weight scaled to 1: a key shared by proportional rows
        key = tuple(v / w[lead] for v in w) + (b / w[lead],)
        cls = index.get(key)
        if cls is None:
            s = 1 if w[lead] > 0 else -1
            cls = HyperplaneClass(tuple(v * s for v in w), b * s)
            index[key] = cls
            classes.append(cls)
        scale = w[lead] / cls.weights[lead]
        cls.members.append(Member(i, scale, a[i]))
    return classes, degenerate


def class_cancels(cls: HyperplaneClass) -> bool:
    plus, minus = cls.sums()
    return plus == minus


def is_affine_shallow(net: Network) -> bool:
    """The one-region decision: affine iff every class cancels."""
    classes, _ = group_hyperplanes(net)
    return all(class_cancels(c) for c in classes)


def effective_arrangement(net: Network) -> EffectiveArrangement:
    classes, _ = group_hyperplanes(net)
    return EffectiveArrangement(
        net.input_dim,
        tuple((c.weights, c.bias) for c in classes if not class_cancels(c)),
    )


def arrangement_cells(arr: EffectiveArrangement) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Every open cell as ``(sign vector, interior point)``; signs are +1/-1.

    Depth-first over the hyperplanes in order; a branch is pruned as soon as
    its strict system has no solution.
    """
    n = arr.dimension
    hs = [tuple(w) + (b,) for w, b in arr.hyperplanes]
    cells = []
    signs: list[int] = []
    rows: list = []

    def visit(i, x):
        if i == len(hs):
            cells.append((tuple(signs), x))
            return
        h = hs[i]
        v = _value(h, x)
        for s in (1, -1):
            row = _int_row(h, s > 0, n)
            if v * s > 0:
                w = x
            else:
                w = _margin_lp(rows + [row], [True] * (len(rows) + 1), x, n)
                if w is None:
                    continue
            signs.append(s)
            rows.append(row)
            visit(i + 1, w)
            rows.pop()
            signs.pop()

    visit(0, (Fraction(0),) * n)
    return cells


def count_arrangement_cells(arr: EffectiveArrangement) -> int:
    return len(arrangement_cells(arr))


def _cell_functions(net: Network, classes, degenerate, cells) -> set:
    """The network's affine function on each cell, read off the sign vector."""
    n = net.input_dim
    hidden, out = net.layers
    a = out.weights[0]
    base = AffineFunction((Fraction(0),) * n, out.biases[0])
    for i in degenerate:
        base = base + AffineFunction((Fraction(0),) * n, a[i] * max(hidden.biases[i], Fraction(0)))
    live = []
    for c in classes:
        plus, minus = c.sums()
        if plus == minus:
            base = base + c.affine().scaled(plus)
        else:
            live.append((c.affine(), plus, minus))
    funcs = set()
    for signs, _ in cells:
        f = base
        for (h, plus, minus), s in zip(live, signs):
            f = f + h.scaled(plus if s > 0 else minus)
        funcs.add(f)
    return funcs


def shallow_census(net: Network, *, workers: int = 1, limits=None) -> CensusReport:
    """Counts for Definitions 1-4 and 6; connected regions are the cells of
    the effective arrangement."""
    classes, degenerate = group_hyperplanes(net)
    report = count_regions(net, (1, 2), workers=workers, limits=limits)
    arr = EffectiveArrangement(
        net.input_dim,
        tuple((c.weights, c.bias) for c in classes if not class_cancels(c)),
    )
    cells = arrangement_cells(arr)
    note = "one hidden layer: open and convex regions are the arrangement cells"
    report.set(3, len(cells), "effective-arrangement-cells", note=note)
    report.set(4, len(cells), "effective-arrangement-cells")
    report.set(5, None, "none", False, "not computed: closed connected regions have no certified procedure")
    report.set(6, len(_cell_functions(net, classes, degenerate, cells)), "cell-function-dedup")
    report.entries = dict(sorted(report.entries.items()))
    return report
