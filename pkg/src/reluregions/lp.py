"""Exact rational linear programming and the polyhedral tests built on it.

The pivoting itself lives in a kernel module: the compiled ``_lpcore``
extension when it is importable, otherwise the pure-Python ``_simplex``.
Set ``RELUREGIONS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Literal, Sequence

from . import _simplex
from .model import AffineFunction, DimensionError, Network, as_rational, preactivation_affine

if os.environ.get("RELUREGIONS_PURE_PYTHON"):
    _kernel = None
else:
    try:
        from . import _lpcore as _kernel
    except ImportError:  # extension not built
        _kernel = None

BACKEND = "compiled" if _kernel is not None else "python"
_solve = _kernel.solve if _kernel is not None else _simplex.solve

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
_STATUS = {0: OPTIMAL, 1: INFEASIBLE, 2: UNBOUNDED}
EMPTY = -1


class LpCounter:
    """Running count of kernel calls; read by census reports."""

    def __init__(self):
        self.calls = 0


counter = LpCounter()


def use_backend(name: str) -> None:
    """Switch kernels at runtime (``"python"`` or ``"compiled"``)."""
    global _solve, BACKEND
    if name == "python":
        _solve = _simplex.solve
    elif name == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled LP kernel is not available")
        _solve = _kernel.solve
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


def solve_int(A, b, eq, c):
    """Raw kernel call on integer data."""
    counter.calls += 1
    return _solve(A, b, eq, c)


# -- constraint systems -------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: Literal["<=", "="]
    rhs: Fraction


@dataclass(frozen=True)
class LinearConstraintSystem:
    """Constraints ``a.x <= b`` or ``a.x = b`` over free variables in R^dimension."""

    dimension: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        cons = []
        for con in self.constraints:
            if not isinstance(con, Constraint):
                coeffs, rel, rhs = con
                con = Constraint(tuple(as_rational(v) for v in coeffs), rel, as_rational(rhs))
            if len(con.coefficients) != self.dimension:
                raise DimensionError(
                    f"constraint has {len(con.coefficients)} coefficients, expected {self.dimension}"
                )
            if con.relation not in ("<=", "="):
                raise ValueError(f"unknown relation {con.relation!r}")
            cons.append(con)
        object.__setattr__(self, "constraints", tuple(cons))

    def __add__(self, other: "LinearConstraintSystem") -> "LinearConstraintSystem":
        if other.dimension != self.dimension:
            raise DimensionError("systems live in different dimensions")
        return LinearConstraintSystem(self.dimension, self.constraints + other.constraints)

    def contains(self, x: Sequence) -> bool:
        for con in self.constraints:
            lhs = sum(a * as_rational(v) for a, v in zip(con.coefficients, x))
            if con.relation == "<=" and lhs > con.rhs:
                return False
            if con.relation == "=" and lhs != con.rhs:
                return False
        return True

    def integer_data(self):
        A, b, eq, scale = [], [], [], []
        for con in self.constraints:
            L = lcm(*(c.denominator for c in con.coefficients), con.rhs.denominator)
            A.append([int(c * L) for c in con.coefficients])
            b.append(int(con.rhs * L))
            eq.append(con.relation == "=")
            scale.append(L)
        return A, b, eq, scale


@dataclass(frozen=True)
class LpOutcome:
    """Result of an exact LP.

    ``dual`` holds one multiplier per constraint with ``A^T dual = objective``
    and ``b . dual = value``; multipliers of ``<=`` rows are nonnegative for
    maximization and nonpositive for minimization.
    """

    status: str
    value: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None


def lp_solve(
    system: LinearConstraintSystem,
    objective: Sequence,
    sense: Literal["max", "min"] = "max",
) -> LpOutcome:
    if len(objective) != system.dimension:
        raise DimensionError("objective length does not match the system dimension")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    obj = [as_rational(v) for v in objective]
    if sense == "min":
        obj = [-v for v in obj]
    Lc = lcm(*(v.denominator for v in obj)) if obj else 1
    c = [int(v * Lc) for v in obj]
    A, b, eq, scale = system.integer_data()
    status, D, x_num, y_num, _ = solve_int(A, b, eq, c)
    if status != 0:
        return LpOutcome(_STATUS[status])
    x = tuple(Fraction(v, D) for v in x_num)
    y = [Fraction(v * L, D * Lc) for v, L in zip(y_num, scale)]
    value = sum((a * v for a, v in zip(obj, x)), Fraction(0))
    if sense == "min":
        value = -value
        y = [-v for v in y]
    return LpOutcome(OPTIMAL, value, x, tuple(y))


# -- dimension ----------------------------------------------------------------

def rank(rows: list[list[Fraction]]) -> int:
    """Exact rank by Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / pr[col]
                rows[i] = [u - f * v for u, v in zip(rows[i], pr)]
        r += 1
    return r


def _dim_int(n: int, A: list[list[int]], b: list[int], eq: list[bool], min_dim: int = 0) -> int:
    """Affine dimension of ``{x: A x <= b, eq rows tight}`` on integer data.

    With ``min_dim > 0`` the search stops as soon as the dimension is known
    to be below ``min_dim``; the value returned is then only an upper bound.
    """
    eq = list(eq)
    while True:
        if min_dim > 0:
            bound = n - rank([[Fraction(v) for v in A[i]] for i in range(len(A)) if eq[i]])
            if bound < min_dim:
                return bound
        ineq = [i for i in range(len(A)) if not eq[i]]
        if not ineq:
            if A and solve_int(A, b, eq, [0] * n)[0] == 1:
                return EMPTY
            return n - rank([[Fraction(v) for v in A[i]] for i in range(len(A))])
        rows = [A[i] + ([0] if eq[i] else [1]) for i in range(len(A))]
        rows.append([0] * n + [1])
        status, D, x_num, y_num, obj = solve_int(rows, b + [1], eq + [False], [0] * n + [1])
        if status == 1:
            return EMPTY
        if obj < 0:
            return EMPTY
        if obj > 0:
            return n - rank([[Fraction(v) for v in A[i]] for i in range(len(A)) if eq[i]])
        for i in ineq:
            if y_num[i] > 0:
                eq[i] = True


def polyhedron_dim(system: LinearConstraintSystem) -> int:
    """Dimension of the polyhedron, ``-1`` when it is empty.

    Implicit equalities are found one batch per LP: maximizing a common slack
    ``t`` over all inequalities either proves strict feasibility (``t > 0``)
    or, at ``t = 0``, the rows with positive dual multiplier are tight on the
    whole polyhedron.
    """
    A, b, eq, _ = system.integer_data()
    return _dim_int(system.dimension, A, b, eq)


# -- activation regions -------------------------------------------------------

def pattern_system(net: Network, pattern: Sequence[int]) -> tuple[LinearConstraintSystem, list[AffineFunction]]:
    """Closed polyhedron ``P_a`` and the pre-activation functions that define it."""
    pres = [preactivation_affine(net, pattern, i) for i in range(net.size)]
    cons = []
    for bit, h in zip(pattern, pres):
        if bit:
            cons.append(Constraint(tuple(-c for c in h.coefficients), "<=", h.constant))
        else:
            cons.append(Constraint(h.coefficients, "<=", -h.constant))
    return LinearConstraintSystem(net.input_dim, tuple(cons)), pres


def region_status(net: Network, pattern: Sequence[int]) -> int:
    """Dimension of the activation region ``S_a``, or ``EMPTY`` (-1)."""
    if len(pattern) != net.size:
        raise DimensionError(f"pattern length {len(pattern)} != s(N) = {net.size}")
    system, pres = pattern_system(net, pattern)
    dim = polyhedron_dim(system)
    if dim == EMPTY:
        return EMPTY
    for bit, h in zip(pattern, pres):
        if bit:
            out = lp_solve(system, h.coefficients, "max")
            if out.status == OPTIMAL and out.value + h.constant <= 0:
                return EMPTY
    return dim


def closure_intersection_dim(net: Network, a: Sequence[int], b: Sequence[int]) -> int:
    sa, _ = pattern_system(net, a)
    sb, _ = pattern_system(net, b)
    return polyhedron_dim(sa + sb)
