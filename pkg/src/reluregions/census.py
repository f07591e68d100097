"""Region counting for networks of any depth.

The enumerator walks activation patterns depth first in layer-major order,
branch 1 before branch 0, and keeps one witness point for every partial
pattern.  A branch whose sign agrees with the witness needs no LP; the other
branch is settled by a margin LP ("maximize t with every constraint holding
with slack t") started from the witness.  While every constraint so far
involves a single coordinate, the region is an open box and all decisions
are made by interval arithmetic.

Two walks exist: ``proper`` keeps full-dimensional regions only (all
constraints strict, identically zero pre-activations dropped); ``all`` keeps
every nonempty activation region (only active constraints strict).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Sequence

from . import lp
from .model import (
    AffineFunction,
    DimensionError,
    Network,
    affine_map_of_pattern,
    coefficient_bound,
)
from .report import CensusReport

__all__ = [
    "RegionRecord",
    "RegionGraph",
    "Limits",
    "ResourceLimitExceeded",
    "BoundExceedsCap",
    "enumerate_regions",
    "proper_regions",
    "count_regions",
    "k_region_decide",
    "k_region_decision",
    "Decision",
    "region_graph",
    "networks_equivalent",
    "search_affine_piece",
    "exhaustive_search",
    "algorithm2_bound",
]

OPEN_PROBLEM = "not computed: open problem for general networks"
SHALLOW_DEF3 = "one hidden layer: open connected regions are convex, so R3 = R4"


class ResourceLimitExceeded(RuntimeError):
    """A configured ceiling on patterns or LPs was hit."""


class BoundExceedsCap(RuntimeError):
    """The exhaustive coefficient sweep is larger than the allowed cap."""


@dataclass(frozen=True)
class Limits:
    max_patterns: int | None = None
    max_lps: int | None = None


@dataclass(frozen=True)
class RegionRecord:
    pattern: tuple[int, ...]
    dim: int
    affine: AffineFunction
    witness: tuple[Fraction, ...] | None = None


# -- small exact helpers -------------------------------------------------------

def _size(q: Fraction) -> int:
    p, d = q.numerator, q.denominator
    if d == 1 and p >= 0:
        return p.bit_length()
    return 1 + abs(p).bit_length() + d.bit_length()


def _layer_pre(layer, z, n):
    """Affine pre-activations (tuples ``coeffs + (const,)``) of a layer."""
    out = []
    zero = Fraction(0)
    for row, bias in zip(layer.weights, layer.biases):
        acc = [zero] * n + [bias]
        for w, f in zip(row, z):
            if w and f is not None:
                for j in range(n + 1):
                    if f[j]:
                        acc[j] += w * f[j]
        out.append(tuple(acc))
    return out


def _int_row(h, active: bool, n: int):
    """Integer row ``(a, b)`` of ``a.x <= b`` for the sign condition on ``h``."""
    L = lcm(*(c.denominator for c in h))
    ints = [c.numerator * (L // c.denominator) for c in h]
    if active:
        return [-v for v in ints[:n]], ints[n]
    return ints[:n], -ints[n]


def _value(h, x):
    n = len(x)
    v = h[n]
    for j in range(n):
        if h[j]:
            v += h[j] * x[j]
    return v


def _as_affine(h) -> AffineFunction:
    return AffineFunction(h[:-1], h[-1])


def _margin_lp(rows, strict, x, n):
    """Maximize a common slack over the strict rows, starting from ``x``.

    Variables are shifted so that ``x`` is the origin and scaled by the common
    denominator of ``x``; every number handed to the kernel is an integer.
    Returns a point meeting all rows (strict ones strictly) or ``None``.
    """
    Q = lcm(*(v.denominator for v in x)) if n else 1
    X = [int(v * Q) for v in x]
    S = [Q * b - sum(a[j] * X[j] for j in range(n) if a[j]) for a, b in rows]
    T0 = min([Q] + [s for s, st in zip(S, strict) if st])
    A, B = [], []
    for (a, _), s, st in zip(rows, S, strict):
        if st:
            A.append(a + [1])
            B.append(s - T0)
        else:
            A.append(a + [0])
            B.append(s)
    A.append([0] * n + [1])
    B.append(Q - T0)
    status, D, v, _, obj = lp.solve_int(A, B, [False] * len(A), [0] * n + [1])
    if status != 0 or T0 * D + obj <= 0:
        return None
    return tuple(Fraction(X[j] * D + v[j], Q * D) for j in range(n))


def _box_point(lo, hi):
    pt = []
    for a, b in zip(lo, hi):
        if a is None and b is None:
            pt.append(Fraction(0))
        elif a is None:
            pt.append(b - 1)
        elif b is None:
            pt.append(a + 1)
        else:
            pt.append((a + b) / 2)
    return tuple(pt)


def _box_range(h, lo, hi, n):
    """Min and max of ``h`` over the closed box (``None`` when unbounded)."""
    mn = mx = h[n]
    for j in range(n):
        c = h[j]
        if not c:
            continue
        low, high = (lo[j], hi[j]) if c > 0 else (hi[j], lo[j])
        mn = None if mn is None or low is None else mn + c * low
        mx = None if mx is None or high is None else mx + c * high
    return mn, mx


# -- the search ----------------------------------------------------------------

@dataclass
class _Stats:
    patterns: int = 0
    lps: int = 0
    max_size: int = 0


@dataclass
class _Leaf:
    bits: tuple[int, ...]
    function: tuple
    rows: tuple
    strict: tuple
    witness: tuple
    collapsed: bool = False
    pres: tuple = ()


def _flat(pres, count):
    return tuple(f for layer in pres for f in layer)[:count]


class _Search:
    def __init__(
        self,
        net: Network,
        proper: bool,
        limits: Limits | None = None,
        use_box: bool = True,
        collapse: bool = False,
    ):
        self.net = net
        self.n = n = net.input_dim
        self.proper = proper
        self.use_box = proper and use_box
        self.collapse = proper and collapse
        self.limits = limits or Limits()
        self.stats = _Stats()
        self.where = []
        for k, lay in enumerate(net.hidden):
            self.where.extend((k, r) for r in range(lay.n_out))
        coords = [tuple(Fraction(int(i == j)) for j in range(n)) + (Fraction(0),) for i in range(n)]
        self.coords = coords
        self._lp_base = 0

    # bookkeeping
    def _track(self, fs):
        best = self.stats.max_size
        for f in fs:
            for q in f:
                if q:
                    s = _size(q)
                    if s > best:
                        best = s
        self.stats.max_size = best

    def _check_limits(self):
        lim = self.limits
        if lim.max_patterns is not None and self.stats.patterns > lim.max_patterns:
            raise ResourceLimitExceeded(f"more than {lim.max_patterns} patterns visited")
        if lim.max_lps is not None and lp.counter.calls - self._lp_base > lim.max_lps:
            raise ResourceLimitExceeded(f"more than {lim.max_lps} LPs solved")

    def _pres_for_layer(self, k, pres, bits):
        if k == 0:
            z = self.coords
        else:
            sl = self.net.layer_slice(k - 1)
            z = [f if b else None for f, b in zip(pres[k - 1], bits[sl])]
        out = _layer_pre(self.net.layers[k], z, self.n)
        self._track(out)
        return out

    def run(self, prefix: Sequence[int] = (), stop_depth: int | None = None) -> Iterator:
        """Yield leaves (or frontier prefixes when ``stop_depth`` is set)."""
        self._lp_base = lp.counter.calls
        n = self.n
        box = ((None,) * n, (None,) * n) if self.use_box else None
        yield from self._visit(0, [], [], [], (Fraction(0),) * n, box, [], tuple(prefix), stop_depth)
        self.stats.lps = lp.counter.calls - self._lp_base

    def _children(self, h, rows, strict, x, box):
        """Feasible branches ``(bit, row or None, witness, box)`` for neuron pre-activation ``h``."""
        n = self.n
        if not any(h[:n]):
            const = h[n]
            return [(1 if const > 0 else 0, None, x, box)]
        out = []
        if box is not None:
            lo, hi = box
            nz = [j for j in range(n) if h[j]]
            if len(nz) == 1:
                j = nz[0]
                c = h[j]
                tau = -h[n] / c
                for bit in (1, 0):
                    lower = (c > 0) == (bit == 1)
                    nlo, nhi = list(lo), list(hi)
                    tight = False
                    if lower:
                        if nlo[j] is None or tau > nlo[j]:
                            nlo[j] = tau
                            tight = True
                    else:
                        if nhi[j] is None or tau < nhi[j]:
                            nhi[j] = tau
                            tight = True
                    if nlo[j] is not None and nhi[j] is not None and nlo[j] >= nhi[j]:
                        continue
                    if not tight:
                        out.append((bit, None, x, box))
                        continue
                    nbox = (tuple(nlo), tuple(nhi))
                    out.append((bit, _int_row(h, bit == 1, n), _box_point(*nbox), nbox))
                return out
            mn, mx = _box_range(h, lo, hi, n)
            can_on = mx is None or mx > 0
            can_off = mn is None or mn < 0
            if not (can_on and can_off):
                return [(1 if can_on else 0, None, x, box)]
            hv = _value(h, x)
            for bit in (1, 0):
                row = _int_row(h, bit == 1, n)
                if (bit == 1 and hv > 0) or (bit == 0 and hv < 0):
                    out.append((bit, row, x, None))
                else:
                    w = _margin_lp(rows + [row], [True] * (len(rows) + 1), x, n)
                    out.append((bit, row, w, None))
            return out

        hv = _value(h, x)
        for bit in (1, 0):
            row = _int_row(h, bit == 1, n)
            st = True if self.proper else bit == 1
            if bit == 1:
                free = hv > 0
            else:
                free = hv < 0 if self.proper else hv <= 0
            if free:
                out.append((bit, row, x, None))
                continue
            w = _margin_lp(rows + [row], strict + [st], x, n)
            if w is not None:
                out.append((bit, row, w, None))
        return out

    def _next_layer_dead(self, k, r, bits, pres, x, box) -> bool:
        """True if every neuron of layer ``k+1`` is inactive on the whole box,
        whatever the states of the still unassigned neurons ``r..`` of layer ``k``.

        Unassigned inputs are relaxed soundly: ``w relu(h) <= w h`` or ``<= 0``
        for ``w < 0`` and ``w relu(h) <= w max(0, max h)`` for ``w > 0``.  For
        negative weights several choices of which neurons keep ``w h`` are
        tried: those positive at the witness, and each one on its own.
        """
        n = self.n
        lo, hi = box
        start = self.net.layer_slice(k).start
        cur = pres[k]
        nxt = self.net.layers[k + 1]

        def add(expr, w, f):
            for t in range(n + 1):
                if f[t]:
                    expr[t] += w * f[t]

        for row, bias in zip(nxt.weights, nxt.biases):
            base = [Fraction(0)] * n + [bias]
            extra = Fraction(0)
            negatives = []
            for j, w in enumerate(row):
                if not w:
                    continue
                f = cur[j]
                if j < r:
                    if bits[start + j]:
                        add(base, w, f)
                elif w < 0:
                    negatives.append((w, f))
                else:
                    _, mx = _box_range(f, lo, hi, n)
                    if mx is None:
                        return False
                    if mx > 0:
                        extra += w * mx
            choices = [[(w, f) for w, f in negatives if _value(f, x) > 0]]
            choices += [[pair] for pair in negatives]
            for chosen in choices:
                expr = list(base)
                for w, f in chosen:
                    add(expr, w, f)
                _, mx = _box_range(expr, lo, hi, n)
                if mx is not None and mx + extra <= 0:
                    break
            else:
                return False
        return True

    def _dead_output(self, k) -> Fraction:
        """Network output when every neuron of hidden layer ``k`` is inactive."""
        z = [Fraction(0)] * self.net.layers[k].n_out
        for lay in self.net.layers[k + 1:]:
            pre = [sum((w * v for w, v in zip(row, z)), b) for row, b in zip(lay.weights, lay.biases)]
            z = [v if v > 0 else Fraction(0) for v in pre]
        return pre[0]

    def _visit(self, i, bits, rows, strict, x, box, pres, prefix, stop_depth):
        net = self.net
        self.stats.patterns += 1
        self._check_limits()
        if stop_depth is not None and i == stop_depth:
            yield tuple(bits)
            return
        if i == net.size:
            if net.depth == 0:
                z = self.coords
            else:
                sl = net.layer_slice(net.depth - 1)
                z = [f if b else None for f, b in zip(pres[-1], bits[sl])]
            func = _layer_pre(net.layers[-1], z, self.n)[0]
            self._track([func])
            yield _Leaf(tuple(bits), func, tuple((tuple(a), b) for a, b in rows), tuple(strict), x, False, _flat(pres, len(bits)))
            return
        k, r = self.where[i]
        pushed = False
        if r == 0:
            pres.append(self._pres_for_layer(k, pres, bits))
            pushed = True
        h = pres[k][r]
        if (
            self.collapse
            and box is not None
            and k + 1 < net.depth
            and sum(1 for c in h[:-1] if c) > 1
            and self._next_layer_dead(k, r, bits, pres, x, box)
        ):
            func = (Fraction(0),) * self.n + (self._dead_output(k + 1),)
            yield _Leaf(tuple(bits), func, tuple((tuple(a), b) for a, b in rows), tuple(strict), x, True, _flat(pres, len(bits)))
            if pushed:
                pres.pop()
            return
        replay = i < len(prefix)
        mark = lp.counter.calls
        kids = self._children(h, rows, strict, x, box)
        if replay:
            # a replayed prefix was already paid for by the frontier pass
            self._lp_base += lp.counter.calls - mark
            kids = [c for c in kids if c[0] == prefix[i]]
        for bit, row, w, nbox in kids:
            if w is None:
                continue
            bits.append(bit)
            if row is not None:
                rows.append(row)
                strict.append(True if self.proper else bit == 1)
            yield from self._visit(i + 1, bits, rows, strict, w, nbox, pres, prefix, stop_depth)
            if row is not None:
                rows.pop()
                strict.pop()
            bits.pop()
        if pushed:
            pres.pop()


# -- parallel driver -----------------------------------------------------------

def _subtree_job(args):
    net, proper, prefix, limits, collapse = args
    s = _Search(net, proper, limits, collapse=collapse)
    leaves = list(s.run(prefix))
    # nodes on the prefix path were counted by the frontier pass
    return leaves, s.stats.patterns - len(prefix), s.stats.lps, s.stats.max_size


def _collect(
    net: Network,
    proper: bool,
    workers: int = 1,
    limits: Limits | None = None,
    collapse: bool = False,
):
    """All leaves of one walk plus statistics, identical for any worker count."""
    limits = limits or Limits()
    if workers <= 1 or net.size < 4:
        s = _Search(net, proper, limits, collapse=collapse)
        leaves = list(s.run())
        return leaves, s.stats
    depth = min(net.size, max(2, (4 * workers).bit_length()))
    front = _Search(net, proper, limits, collapse=collapse)
    items = list(front.run(stop_depth=depth))
    prefixes = [it for it in items if isinstance(it, tuple)]
    stats = _Stats(front.stats.patterns - len(prefixes), front.stats.lps, front.stats.max_size)
    jobs = [(net, proper, p, limits, collapse) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = iter(list(pool.map(_subtree_job, jobs)))
    leaves = []
    for it in items:
        if not isinstance(it, tuple):
            leaves.append(it)
            continue
        sub, pats, lps, size = next(results)
        leaves.extend(sub)
        stats.patterns += pats
        stats.lps += lps
        stats.max_size = max(stats.max_size, size)
    if limits.max_patterns is not None and stats.patterns > limits.max_patterns:
        raise ResourceLimitExceeded(f"more than {limits.max_patterns} patterns visited")
    if limits.max_lps is not None and stats.lps > limits.max_lps:
        raise ResourceLimitExceeded(f"more than {limits.max_lps} LPs solved")
    return leaves, stats


def _leaf_dim(leaf: _Leaf, n: int) -> int:
    if not leaf.rows:
        return n
    A = [list(a) for a, _ in leaf.rows]
    b = [v for _, v in leaf.rows]
    return lp._dim_int(n, A, b, [False] * len(A))


def enumerate_regions(net: Network, proper: bool = False) -> Iterator[RegionRecord]:
    """Every nonempty activation region once, in depth-first order.

    With ``proper=True`` only full-dimensional regions are produced.
    """
    n = net.input_dim
    for leaf in _Search(net, proper).run():
        dim = n if proper else _leaf_dim(leaf, n)
        yield RegionRecord(leaf.bits, dim, _as_affine(leaf.function), leaf.witness)


def proper_regions(net: Network) -> list[RegionRecord]:
    return list(enumerate_regions(net, proper=True))


# -- Definition 4 --------------------------------------------------------------

class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _share_facet(p: _Leaf, q: _Leaf, n: int) -> bool:
    rows = p.rows + q.rows
    A = [list(a) for a, _ in rows]
    b = [v for _, v in rows]
    return lp._dim_int(n, A, b, [False] * len(A), min_dim=n - 1) == n - 1


def _meet_on(p: _Leaf, q: _Leaf, key, n: int) -> bool:
    """Do the closures of ``p`` and ``q`` meet in an (n-1)-dimensional part of
    the hyperplane ``key``?  One LP: a relative interior point on the
    hyperplane with every other row strictly satisfied."""
    a0, b0 = key
    neg = (tuple(-v for v in a0), -b0)
    A, B, eq = [list(a0) + [0]], [b0], [True]
    for row in p.rows + q.rows:
        k = _row_key(row)
        if k == key or k == neg:
            continue
        A.append(list(row[0]) + [1])
        B.append(row[1])
        eq.append(False)
    A.append([0] * n + [1])
    B.append(1)
    eq.append(False)
    status, _, _, _, obj = lp.solve_int(A, B, eq, [0] * n + [1])
    return status == 0 and obj > 0


@dataclass
class RegionGraph:
    """Proper regions joined when they realize the same function and their
    closures meet in an (n-1)-dimensional set."""

    nodes: list
    edges: list = field(default_factory=list)
    components: list = field(default_factory=list)


def _opposite(key):
    return tuple(-v for v in key[0]), -key[1]


def _row_key(row):
    a, b = row
    g = gcd(*a, b)
    return tuple(v // g for v in a), b // g


def _cross(net: Network, leaf: _Leaf, hkeys, key, memo):
    """Pattern on the far side of the facet ``key`` of ``leaf``.

    Pre-activations are continuous, so a neuron keeps its sign unless its
    affine function on the far side vanishes on the whole facet (then it
    takes its sign beyond the facet) or is constant.  Layers before the
    first change reuse the leaf's own functions.  ``None`` if nothing changes.
    """
    n = net.input_dim
    a, b = key
    opp = _opposite(key)
    bits = leaf.bits
    size = len(bits)
    out = []
    changed = False
    z = None
    for k, layer in enumerate(net.hidden):
        start = len(out)
        if start == size:
            break
        if not changed:
            for g in range(start, min(start + layer.n_out, size)):
                hk = hkeys[g]
                out.append(1 if hk == key else 0 if hk == opp else bits[g])
            changed = tuple(out) != bits[: len(out)]
            if changed:
                z = [h if bit else None for h, bit in zip(leaf.pres[start:len(out)], out[start:])]
            continue
        prefix = tuple(out)
        hs = memo.get(prefix)
        if hs is None:
            hs = memo[prefix] = _layer_pre(layer, z, n)
        z = []
        for h in hs[: size - start]:
            if not any(h[:n]):
                bit = 1 if h[n] > 0 else 0
            else:
                lead = next(j for j in range(n) if a[j])
                lam = h[lead] / a[lead]
                if all(h[j] == lam * a[j] for j in range(n)) and h[n] == -lam * b:
                    bit = 1 if lam > 0 else 0
                else:
                    bit = bits[len(out)]
            out.append(bit)
            z.append(h if bit else None)
    return tuple(out) if changed else None


def _region_graph(net: Network, leaves: list[_Leaf]) -> RegionGraph:
    """Union-find over regions with equal functions that share a facet.

    Two full-dimensional polyhedra with disjoint interiors can only meet in
    an (n-1)-dimensional set lying on a hyperplane that carries a defining
    row of each, with opposite orientations.  Only such pairs are tested,
    closest activation patterns first.
    """
    n = net.input_dim
    memo: dict[tuple, list] = {}
    groups: dict[tuple, list[int]] = {}
    for idx, leaf in enumerate(leaves):
        groups.setdefault(leaf.function, []).append(idx)
    uf = _UnionFind(len(leaves))
    edges = []
    if len(groups) == 1:
        # one affine function everywhere: the whole space is a single region
        for idx in range(1, len(leaves)):
            uf.union(0, idx)
        groups = {}
    for members in groups.values():
        if len(members) < 2:
            continue
        keys = {m: {_row_key(r) for r in leaves[m].rows} for m in members}
        by_key: dict[tuple, list[int]] = {}
        for m in members:
            for key in keys[m]:
                by_key.setdefault(key, []).append(m)

        def attempt(m, o, key):
            if uf.find(m) != uf.find(o) and _meet_on(leaves[m], leaves[o], key, n):
                uf.union(m, o)
                edges.append((min(m, o), max(m, o)))
                return True
            return False

        # the region across each facet, found by a forward pass
        index = {leaves[m].bits: m for m in members}
        short = sorted({len(leaves[m].bits) for m in members if leaves[m].collapsed})
        extending: dict[int, dict] = {}
        for m in members:
            leaf = leaves[m]
            hkeys = [_row_key(_int_row(h, False, n)) if any(h[:n]) else None for h in leaf.pres]
            for key in keys[m]:
                opp = _opposite(key)
                rm = uf.find(m)
                if all(uf.find(o) == rm for o in by_key.get(opp, ())):
                    continue
                bits = _cross(net, leaf, hkeys, key, memo)
                if bits is None:
                    continue
                if leaf.collapsed:
                    L = len(bits)
                    if L not in extending:
                        extending[L] = {}
                        for q in members:
                            if len(leaves[q].bits) >= L:
                                extending[L].setdefault(leaves[q].bits[:L], []).append(q)
                    found = extending[L].get(tuple(bits), [])
                else:
                    o = index.get(tuple(bits))
                    if o is None:
                        # a collapsed leaf stands for every pattern extending its bits
                        o = next((index[t] for t in (tuple(bits[:k]) for k in short) if t in index), None)
                    found = [] if o is None else [o]
                for o in found:
                    if opp in keys[o]:
                        attempt(m, o, key)
        # every remaining facet-sharing pair lies across some key
        if len({uf.find(m) for m in members}) == 1:
            continue
        masks = {m: (sum(1 << i for i, v in enumerate(leaves[m].bits) if v), len(leaves[m].bits)) for m in members}
        cand = []
        for key in by_key:
            opp = _opposite(key)
            if key > opp or opp not in by_key:
                continue
            for m in by_key[key]:
                rm = uf.find(m)
                pm, lm = masks[m]
                for o in by_key[opp]:
                    if uf.find(o) == rm:
                        continue
                    po, lo_ = masks[o]
                    d = ((pm ^ po) & ((1 << min(lm, lo_)) - 1)).bit_count() + abs(lm - lo_)
                    cand.append((d, m, o, key))
        cand.sort()
        for _, m, o, key in cand:
            attempt(m, o, key)
    comps = {}
    for idx in range(len(leaves)):
        comps.setdefault(uf.find(idx), []).append(idx)
    return RegionGraph(list(range(len(leaves))), edges, sorted(comps.values()))


# -- public counters -----------------------------------------------------------

def count_regions(
    net: Network,
    defs: Sequence[int] = (1, 2, 4, 6),
    *,
    workers: int = 1,
    limits: Limits | None = None,
) -> CensusReport:
    """Exact counts for Definitions 1, 2, 4 and 6.

    Definition 3 is reported only for one hidden layer, where it equals
    Definition 4; otherwise it and Definition 5 are marked not computed.
    """
    defs = sorted(set(defs))
    for d in defs:
        if d not in (1, 2, 3, 4, 5, 6):
            raise ValueError(f"unknown definition {d}")
    report = CensusReport(coefficient_bound=coefficient_bound(net))
    if 1 in defs:
        leaves, stats = _collect(net, False, workers, limits)
        report.set(1, len(leaves), "pattern-enumeration")
        report.patterns_visited += stats.patterns
        report.lps_solved += stats.lps
        report.max_coefficient_size = max(report.max_coefficient_size, stats.max_size)
    shallow3 = 3 in defs and net.depth == 1
    want4 = 4 in defs or shallow3
    if 2 in defs or 6 in defs or want4:
        # collapsing merges proper regions, so only when R2 is not wanted
        leaves, stats = _collect(net, True, workers, limits, collapse=2 not in defs)
        collapsed = any(leaf.collapsed for leaf in leaves)
        report.patterns_visited += stats.patterns
        report.max_coefficient_size = max(report.max_coefficient_size, stats.max_size)
        mark = lp.counter.calls
        if 2 in defs:
            report.set(2, len(leaves), "proper-pattern-enumeration")
        if 6 in defs:
            report.set(6, len({leaf.function for leaf in leaves}), "function-dedup" + ("+subtree-collapse" if collapsed else ""))
        if want4:
            graph = _region_graph(net, leaves)
            method = "union-find-facet-merge" + ("+subtree-collapse" if collapsed else "")
            if 4 in defs:
                report.set(4, len(graph.components), method)
            if shallow3:
                report.set(3, len(graph.components), method, note=SHALLOW_DEF3)
        report.lps_solved += stats.lps + lp.counter.calls - mark
    for d in (3, 5):
        if d in defs and d not in report.entries:
            report.set(d, None, "none", False, OPEN_PROBLEM)
    report.entries = dict(sorted(report.entries.items()))
    return report


def region_graph(net: Network) -> RegionGraph:
    leaves, _ = _collect(net, True)
    return _region_graph(net, leaves)


def _probe_points(net: Network, limit: int = 8192):
    """Generic points next to the lattice of single-coordinate first-layer breakpoints."""
    n = net.input_dim
    roots = [set() for _ in range(n)]
    for row, b in zip(net.layers[0].weights, net.layers[0].biases):
        nz = [j for j, w in enumerate(row) if w]
        if len(nz) == 1:
            roots[nz[0]].add(-b / row[nz[0]])
    axes = [sorted(r) or [Fraction(0)] for r in roots]
    total = 1
    for a in axes:
        total *= len(a)
    if total > limit:
        return
    delta = [Fraction(1, 1024 + 17 * j) for j in range(n)]
    for combo in itertools.product(*axes):
        yield tuple(c + d for c, d in zip(combo, delta))


def _probe_lower_bound(net: Network, definition: int, K: int) -> tuple[int, int]:
    """Regions certified by probe points alone, counting up to ``K + 1``,
    and the largest coefficient size among the functions formed."""
    from .model import preactivations_at

    seen = set()
    size = 0
    for x in _probe_points(net):
        pres = preactivations_at(net, x)
        if not all(pres):
            continue
        pattern = tuple(1 if v > 0 else 0 for v in pres)
        if definition in (1, 2):
            key = pattern
        else:
            key = affine_map_of_pattern(net, pattern)
            size = max([size] + [_size(q) for q in key.coefficients + (key.constant,) if q])
        seen.add(key)
        if len(seen) > K:
            break
    return len(seen), size


@dataclass(frozen=True)
class Decision:
    """Answer to "more than K regions?" with the bound that certifies it.

    ``bound`` is a lower bound on the count when ``answer`` is true and the
    exact count when it is false.
    """

    answer: bool
    bound: int
    method: str
    max_coefficient_size: int = 0


def k_region_decision(
    net: Network,
    K: int,
    definition: int = 4,
    *,
    limits: Limits | None = None,
    probe: bool = True,
) -> Decision:
    """Decide whether the Definition-``definition`` count exceeds ``K``.

    Generic probe points near the first-layer breakpoint lattice are tried
    first; each lies in a full-dimensional region, so distinct patterns or
    functions found there are certified.  Counts for Definitions 1, 2 and 6
    only grow during the walk, so the walk stops at ``K + 1``.  For
    Definition 4 the walk stops once ``K + 1`` distinct functions are seen
    (each function needs its own region); otherwise the full region graph is
    built.
    """
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise ValueError("K must be a positive integer")
    if definition not in (1, 2, 4, 6):
        raise ValueError("definition must be one of 1, 2, 4, 6")
    size = 0
    if probe:
        found, size = _probe_lower_bound(net, definition, K)
        if found > K:
            return Decision(True, found, "probe-points", size)
    search = _Search(net, proper=definition != 1, limits=limits, collapse=definition in (4, 6))
    seen = set()
    leaves = []

    def done(answer, bound, method):
        return Decision(answer, bound, method, max(size, search.stats.max_size))

    for leaf in search.run():
        leaves.append(leaf)
        if definition in (1, 2):
            if len(leaves) > K:
                return done(True, len(leaves), "pattern-walk")
        else:
            seen.add(leaf.function)
            if len(seen) > K:
                return done(True, len(seen), "distinct-functions")
    if definition in (1, 2):
        return done(False, len(leaves), "pattern-walk")
    if definition == 6:
        return done(False, len(seen), "distinct-functions")
    count = len(_region_graph(net, leaves).components)
    return done(count > K, count, "union-find-facet-merge")


def k_region_decide(net: Network, K: int, definition: int = 4, *, limits: Limits | None = None, probe: bool = True) -> bool:
    """True iff the Definition-``definition`` count exceeds ``K``."""
    return k_region_decision(net, K, definition, limits=limits, probe=probe).answer


def networks_equivalent(a: Network, b: Network, *, probe: bool = True) -> bool:
    """True iff both networks compute the same function.

    The difference network computes the zero function iff every proper region
    realizes the zero function; the walk stops at the first one that does not.
    """
    from .gadgets import subtract
    from .model import evaluate

    if a.input_dim != b.input_dim:
        raise DimensionError(f"input dimensions differ: {a.input_dim} vs {b.input_dim}")
    diff = subtract(a, b)
    if probe:
        for x in _probe_points(diff):
            if evaluate(diff, x):
                return False
    for leaf in _Search(diff, proper=True, collapse=True).run():
        if any(leaf.function):
            return False
    return True


# -- the two faithful algorithms -----------------------------------------------

def search_affine_piece(net: Network, phi: AffineFunction, _cache: dict | None = None) -> int:
    """1 iff ``phi`` is realized on some full-dimensional activation region.

    Loops over every pattern in ``{0,1}^s``; ``_cache`` lets repeated calls
    share the per-pattern region data.
    """
    if phi.dim != net.input_dim:
        raise DimensionError("phi has the wrong input dimension")
    table = _cache.get("table") if _cache is not None else None
    if table is None:
        table = _pattern_table(net)
        if _cache is not None:
            _cache["table"] = table
    for func, proper in table:
        if func == phi and proper:
            return 1
    return 0


def _pattern_table(net: Network):
    n = net.input_dim
    table = []
    for bits in itertools.product((0, 1), repeat=net.size):
        func = affine_map_of_pattern(net, bits)
        table.append((func, lp.region_status(net, bits) == n))
    return table


def algorithm2_bound(net: Network) -> int:
    """``U = 2^M`` for the coefficient bound ``M``."""
    return 1 << coefficient_bound(net)


def exhaustive_search(net: Network, cap: int, bound: int | None = None) -> int:
    """Count affine regions by sweeping every candidate function.

    Candidates are ``a_i / b_i`` with ``|a_i| <= U``, ``1 <= b_i <= U`` and
    ``gcd(a_i, b_i) = 1``.  ``U`` is the value of ``algorithm2_bound``; a
    smaller ``bound`` may be passed to run a truncated sweep, which only sees
    functions whose coefficients fit under it.
    """
    U = algorithm2_bound(net) if bound is None else bound
    if U > cap:
        raise BoundExceedsCap(f"U = 2^{U.bit_length() - 1} exceeds cap {cap}")
    n = net.input_dim
    cache: dict = {}
    values = [Fraction(a, b) for b in range(1, U + 1) for a in range(-U, U + 1) if gcd(a, b) == 1]
    count = 0
    for combo in itertools.product(values, repeat=n + 1):
        phi = AffineFunction(combo[:n], combo[n])
        count += search_affine_piece(net, phi, cache)
    return count
