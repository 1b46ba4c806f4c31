import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from helpers import complete, cycle, path, petersen
from listpack.cover import cover_graph, identity_cover
from listpack.fcp import (
    DualWitness,
    FractionalColouring,
    format_value,
    fractional_chromatic_number,
    max_weight_independent_set,
    packing_lower_bound,
    reference_max_weight,
    verify_certificates,
)
from listpack.fixtures import build_q3_cover, random_graph
from listpack.graph import Graph
from oracles import alpha, edges_of, fractional_chromatic_float, max_weight


def test_mwis_small():
    s, w = max_weight_independent_set(complete(3), [1, 1, 1])
    assert w == 1 and len(s) == 1
    s, w = max_weight_independent_set(cycle(5), [1] * 5)
    assert w == 2 and Graph.is_independent(cycle(5), s)


def test_mwis_q3_cover_graph():
    h = cover_graph(build_q3_cover())
    s, w = max_weight_independent_set(h, [1] * 16)
    assert w == 5 and h.is_independent(s)
    assert alpha(16, sorted(edges_of(h))) == 5


def test_mwis_rejects_negative():
    with pytest.raises(ValueError):
        max_weight_independent_set(path(2), [1, -1])


@given(st.integers(1, 9), st.integers(0, 10**6))
def test_mwis_matches_brute_force(n, seed):
    rng = random.Random(seed)
    g = random_graph(n, 0.4, rng)
    w = [F(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(n)]
    s, best = max_weight_independent_set(g, w)
    want = max_weight(n, sorted(edges_of(g)), w)
    assert best == want == reference_max_weight(g, w)
    assert g.is_independent(s) and sum(w[v - 1] for v in s) == best


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_chif_cliques(n):
    assert fractional_chromatic_number(complete(n))[0] == n


@pytest.mark.parametrize("g,want", [(cycle(5), F(5, 2)), (cycle(7), F(7, 3)), (petersen(), F(5, 2))])
def test_chif_vertex_transitive(g, want):
    value, primal, dual = fractional_chromatic_number(g)
    assert value == want == F(g.vertex_count, alpha(g.vertex_count, sorted(edges_of(g))))
    assert primal.value == dual.value == value


def test_chif_empty_and_edgeless():
    assert fractional_chromatic_number(Graph(0))[0] == 0
    assert fractional_chromatic_number(Graph(4))[0] == 1


def test_q3_cover_graph_value():
    value, primal, dual = fractional_chromatic_number(cover_graph(build_q3_cover()))
    assert value == F(16, 5)
    assert verify_certificates(cover_graph(build_q3_cover()), primal, dual).ok


@pytest.mark.parametrize("use_pool", [True, False])
def test_pool_and_pricing_agree(use_pool):
    g = random_graph(12, 0.4, random.Random(7))
    want = fractional_chromatic_number(g, use_pool=not use_pool)[0]
    assert fractional_chromatic_number(g, use_pool=use_pool)[0] == want


@given(st.integers(1, 8), st.floats(0.2, 0.8), st.integers(0, 10**6))
def test_chif_matches_float_oracle(n, p, seed):
    g = random_graph(n, p, random.Random(seed))
    value, primal, dual = fractional_chromatic_number(g)
    assert abs(float(value) - fractional_chromatic_float(n, sorted(edges_of(g)))) < 1e-7
    assert dual.value <= primal.value


def test_verify_k2_certificates():
    g = path(2)
    p = FractionalColouring((({1}, 1), ({2}, 1)))
    d = DualWitness({1: 1, 2: 1})
    rep = verify_certificates(g, p, d)
    assert rep.ok and rep.details["primal_value"] == rep.details["dual_value"] == 2


def test_uniform_fifth_dual_on_q3_cover():
    h = cover_graph(build_q3_cover())
    d = DualWitness({v: F(1, 5) for v in h.vertices})
    p = fractional_chromatic_number(h)[1]
    rep = verify_certificates(h, p, d)
    assert rep.ok and d.value == F(16, 5)


def test_tampered_primal_reported():
    g = cycle(5)
    _, p, d = fractional_chromatic_number(g)
    cut = FractionalColouring(tuple((s - {1}, w) for s, w in p.sets))
    rep = verify_certificates(g, cut, d)
    assert not rep.ok and any("vertex 1" in v for v in rep.violations)


def test_bad_dual_and_dependent_set_reported():
    g = path(2)
    rep = verify_certificates(g, FractionalColouring((({1, 2}, 1),)), DualWitness({1: 2, 2: 1}))
    assert any("not independent" in v for v in rep.violations)
    assert any("dual weight 2" in v for v in rep.violations)


def test_packing_lower_bound_cases():
    hit, dual = packing_lower_bound(build_q3_cover(), 3)
    assert hit and dual.value == F(16, 5)
    hit, _ = packing_lower_bound(identity_cover(complete(3), 3), 3)
    assert not hit


def test_format_value():
    assert format_value(F(8369, 2092)) == "4+1/2092"
    assert format_value(F(4)) == "4"
    assert format_value(F(5, 2)) == "2+1/2"
