"""Property-based checks over random small networks and LPs."""

from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from oracles import brute_force_patterns
from reluregions import lp
from reluregions._simplex import solve as python_solve
from reluregions.census import count_regions, enumerate_regions, k_region_decide
from reluregions.lp import OPTIMAL, LinearConstraintSystem, lp_solve
from reluregions.model import Network, evaluate
from reluregions.netio import parse_network, serialize_network
from reluregions.oracle import line_census
from reluregions.shallow import is_affine_shallow, shallow_census

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small = st.integers(-2, 2)
rational = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def networks(draw, max_dim=2, max_depth=3, max_width=3, entries=small):
    n = draw(st.integers(1, max_dim))
    depth = draw(st.integers(1, max_depth))
    layers, w_in = [], n
    for _ in range(depth):
        w = draw(st.integers(1, max_width))
        rows = [[draw(entries) for _ in range(w_in)] for _ in range(w)]
        layers.append((rows, [draw(entries) for _ in range(w)]))
        w_in = w
    layers.append(([[draw(entries) for _ in range(w_in)]], [draw(entries)]))
    return Network.from_lists(n, layers)


@st.composite
def integer_lps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 5))
    coef = st.integers(-4, 4)
    A = [[draw(coef) for _ in range(n)] for _ in range(m)]
    b = [draw(coef) for _ in range(m)]
    eq = [draw(st.booleans()) and i == 0 for i in range(m)]
    c = [draw(coef) for _ in range(n)]
    return A, b, eq, c


@pytest.mark.skipif(lp._kernel is None, reason="compiled kernel not built")
@SETTINGS
@given(integer_lps())
def test_kernels_agree(data):
    A, b, eq, c = data
    assert lp._kernel.solve(A, b, eq, c) == python_solve(A, b, eq, c)


@SETTINGS
@given(integer_lps())
def test_lp_certificates(data):
    A, b, eq, c = data
    rows = tuple((a, "=" if e else "<=", r) for a, r, e in zip(A, b, eq))
    system = LinearConstraintSystem(len(c), rows)
    out = lp_solve(system, c)
    if out.status != OPTIMAL:
        return
    assert system.contains(out.witness)
    for j in range(len(c)):
        assert sum(y * a[j] for y, a in zip(out.dual, A)) == c[j]
    assert sum(y * r for y, r in zip(out.dual, b)) == out.value
    assert all(y >= 0 for y, e in zip(out.dual, eq) if not e)


@SETTINGS
@given(networks(max_depth=2, max_width=3))
def test_walk_matches_brute_force(net):
    assume(net.size <= 7)
    assert sorted(r.pattern for r in enumerate_regions(net)) == sorted(brute_force_patterns(net))


@SETTINGS
@given(networks(max_dim=3))
def test_hierarchy(net):
    r = count_regions(net)
    assert r[6] <= r[4] <= r[2] <= r[1]
    assert r.max_coefficient_size <= r.coefficient_bound


@SETTINGS
@given(networks())
def test_collapse_agrees(net):
    full = count_regions(net, (2, 4, 6))
    collapsed = count_regions(net, (4, 6))
    assert (full[4], full[6]) == (collapsed[4], collapsed[6])


@settings(max_examples=15, deadline=None)
@given(networks())
def test_workers_agree(net):
    assert count_regions(net, workers=1).to_dict()["counts"] == count_regions(net, workers=2).to_dict()["counts"]


@SETTINGS
@given(networks(max_dim=1))
def test_line_oracle(net):
    ours, ref = count_regions(net), line_census(net)
    for d in (1, 2, 4, 6):
        assert ours[d] == ref[d]


@SETTINGS
@given(networks(entries=rational))
def test_netio_round_trip(net):
    assert parse_network(serialize_network(net)) == net


@SETTINGS
@given(networks(max_dim=3, max_depth=1, max_width=5))
def test_shallow_agrees_with_general_census(net):
    general = count_regions(net)
    mine = shallow_census(net)
    for d in (1, 2, 4, 6):
        assert mine[d] == general[d]
    assert is_affine_shallow(net) == (general[6] == 1)


@SETTINGS
@given(networks(), st.integers(1, 4), st.sampled_from((1, 2, 4, 6)))
def test_decide_agrees_with_count(net, K, d):
    assert k_region_decide(net, K, d) == (count_regions(net, (d,))[d] > K)


@SETTINGS
@given(networks(max_dim=2), st.lists(st.tuples(rational, rational), min_size=1, max_size=5))
def test_region_functions_match_evaluation(net, points):
    leaves = list(enumerate_regions(net, proper=True))
    for rec in leaves:
        assert rec.affine(rec.witness) == evaluate(net, rec.witness)
