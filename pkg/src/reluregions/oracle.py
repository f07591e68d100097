"""Checks that do not go through the census engine.

``line_census`` is an exact one-dimensional sweep built only on network
evaluation; ``sample_lower_bounds`` gives sound lower bounds in any
dimension; ``family_formula`` holds the closed-form counts of the gadget
families.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .model import AffineFunction, DimensionError, Network, affine_map_of_pattern, evaluate, preactivations_at
from .report import CensusReport

__all__ = ["PiecewiseLine", "piecewise_line", "line_census", "sample_lower_bounds", "family_formula"]


@dataclass(frozen=True)
class PiecewiseLine:
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[AffineFunction, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need one more piece than breakpoints")


def _interior_points(lo, hi):
    if lo is None and hi is None:
        return Fraction(0), Fraction(1)
    if lo is None:
        return hi - 2, hi - 1
    if hi is None:
        return lo + 1, lo + 2
    w = hi - lo
    return lo + w / 3, lo + 2 * w / 3


def _intervals(bps):
    ends = [None] + list(bps) + [None]
    return list(zip(ends[:-1], ends[1:]))


def _refined_breakpoints(net: Network) -> list[Fraction]:
    """Every point where some neuron's pre-activation changes sign."""
    if net.input_dim != 1:
        raise DimensionError("the line oracle needs a network with one input")
    bps: list[Fraction] = []
    for k in range(net.depth):
        sl = net.layer_slice(k)
        new = set(bps)
        for lo, hi in _intervals(bps):
            p, q = _interior_points(lo, hi)
            vp = preactivations_at(net, [p])[sl]
            vq = preactivations_at(net, [q])[sl]
            for a, b in zip(vp, vq):
                slope = (b - a) / (q - p)
                if slope:
                    root = p - a / slope
                    if (lo is None or root > lo) and (hi is None or root < hi):
                        new.add(root)
        bps = sorted(new)
    return bps


def _fit(net, lo, hi):
    p, q = _interior_points(lo, hi)
    fp, fq = evaluate(net, [p]), evaluate(net, [q])
    slope = (fq - fp) / (q - p)
    return AffineFunction((slope,), fp - slope * p)


def piecewise_line(net: Network) -> PiecewiseLine:
    """The network's function as maximal affine pieces."""
    bps = _refined_breakpoints(net)
    pieces = [_fit(net, lo, hi) for lo, hi in _intervals(bps)]
    kept_bps, kept = [], [pieces[0]]
    for bp, piece in zip(bps, pieces[1:]):
        if piece != kept[-1]:
            kept_bps.append(bp)
            kept.append(piece)
    return PiecewiseLine(tuple(kept_bps), tuple(kept))


def _pattern(net, x):
    return tuple(1 if v > 0 else 0 for v in preactivations_at(net, [x]))


def line_census(net: Network) -> CensusReport:
    """Exact counts for all six definitions of a network with one input.

    On a line, open and closed connected regions and convex regions all
    coincide with the maximal affine pieces.
    """
    bps = _refined_breakpoints(net)
    line = piecewise_line(net)
    open_patterns = {_pattern(net, _interior_points(lo, hi)[0]) for lo, hi in _intervals(bps)}
    all_patterns = open_patterns | {_pattern(net, b) for b in bps}
    report = CensusReport()
    report.set(1, len(all_patterns), "line-sweep")
    report.set(2, len(open_patterns), "line-sweep")
    for d in (3, 4, 5):
        report.set(d, len(line.pieces), "line-sweep")
    report.set(6, len(set(line.pieces)), "line-sweep")
    return report


def sample_lower_bounds(
    net: Network,
    trials: int,
    seed: int = 0,
    box: int = 4,
    max_denominator: int = 64,
) -> tuple[int, int]:
    """``(lb_R1, lb_R6)`` from random rational points in ``[-box, box]^n``.

    A point with no zero pre-activation sits inside a full-dimensional region,
    so only such points contribute functions to the second bound.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    patterns = set()
    functions = set()
    for _ in range(trials):
        x = []
        for _ in range(net.input_dim):
            den = rng.randint(1, max_denominator)
            x.append(Fraction(rng.randint(-box * den, box * den), den))
        pres = preactivations_at(net, x)
        pattern = tuple(1 if v > 0 else 0 for v in pres)
        patterns.add(pattern)
        if all(pres):
            functions.add(affine_map_of_pattern(net, pattern))
    return len(patterns), len(functions)


def family_formula(name: str, **params) -> int:
    """Closed-form region counts.

    ``generic(m, n)``: cells of m generic hyperplanes in R^n.
    ``central_generic(m, n)``: same for hyperplanes through one point.
    ``t_eps(n)``: 1 + 4^n.  ``gadget(k, n)``: 1 + k 2^n.  ``amplify(m, k)``: m^k.
    """
    try:
        if name == "generic":
            m, n = params["m"], params["n"]
            return sum(comb(m, i) for i in range(n + 1))
        if name == "central_generic":
            m, n = params["m"], params["n"]
            if m == 0:
                return 1
            return 2 * sum(comb(m - 1, i) for i in range(n))
        if name == "t_eps":
            return 1 + 2 ** (2 * params["n"])
        if name == "gadget":
            return 1 + params["k"] * 2 ** params["n"]
        if name == "amplify":
            return params["m"] ** params["k"]
    except KeyError as exc:
        raise ValueError(f"family {name!r} needs parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown family {name!r}")
