import itertools
import math
import random
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from helpers import complete, path
from listpack.caterpillar import (
    BalanceError,
    BalancedFamily,
    balanced_triangle_family,
    caterpillar_family,
    caterpillar_packing,
    check_cyclic_shift_infeasible,
    check_fully_balanced,
    extend_clique_colourings,
    init_clique_family,
    shifted_triangle,
)
from listpack.cover import identity_cover, random_cover
from listpack.fixtures import figure2_cover, figure2_decomposition
from listpack.graph import CaterpillarDecomposition, Graph
from listpack.packing import validate_packing
from oracles import marginals

THIRD_VERTEX_ONE_TUPLES = {(3, 2, 1, 4), (4, 2, 1, 2), (2, 3, 1, 3), (4, 3, 1, 2), (2, 4, 1, 3), (3, 4, 1, 4)}

# rows (c(a), c(b)) in table order
ROWS = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]
C1 = [3, 2, 3, 1, 2, 1]
C2 = [3, 2, 3, 1, 1, 2]
C3 = [{2}, {2, 3}, {3, 1}, {3}, {1}, {1, 2}]


def triangle_with_bd(pairs):
    c = identity_cover(complete(3), 3)
    m = dict(c.matchings)
    m[(2, 3)] = pairs
    return c.with_matchings(m)


def edge_family():
    return BalancedFamily(2, Counter({(a, b, 0): 1 for a, b in ROWS}))


def column(c, order):
    f = extend_clique_colourings(c, order, 3, edge_family())
    assert f.size == 6 and check_fully_balanced(f, order + [3])
    table = {col[:2]: col[2] for col in f.colourings}
    return [table[r] for r in ROWS]


# -- balance checker -----------------------------------------------------------------------------


def test_single_vertex_balance():
    f = BalancedFamily(2, Counter({(a,): 2 for a in (1, 2, 3)}))
    assert check_fully_balanced(f, [1])


def test_rainbow_edge_is_balanced():
    assert check_fully_balanced(edge_family(), [1, 2])


def test_duplicate_swapped_in_breaks_balance():
    cols = edge_family().colourings.copy()
    del cols[(1, 2, 0)]
    cols[(1, 3, 0)] += 1
    assert not check_fully_balanced(BalancedFamily(2, cols), [1, 2])


# -- local extension table -------------------------------------------------------------------------


def test_extension_identity_matching():
    assert column(triangle_with_bd([(1, 1), (2, 2), (3, 3)]), [1, 2]) == C1


def test_extension_transposed_matching():
    assert column(triangle_with_bd([(1, 2), (2, 1), (3, 3)]), [1, 2]) == C2


@pytest.mark.parametrize("order", [[1, 2], [2, 1]])
def test_extension_shift_matching_within_alternatives(order):
    got = column(triangle_with_bd([(b, b % 3 + 1) for b in (1, 2, 3)]), order)
    assert all(x in alts for x, alts in zip(got, C3))


def test_extension_rejects_unbalanced_input():
    cols = edge_family().colourings.copy()
    del cols[(1, 2, 0)]
    cols[(1, 3, 0)] += 1
    with pytest.raises(BalanceError):
        extend_clique_colourings(identity_cover(complete(3), 3), [1, 2], 3, BalancedFamily(2, cols))


def test_extension_rejects_partial_matching():
    c = triangle_with_bd([(1, 1)])
    with pytest.raises(BalanceError):
        extend_clique_colourings(c, [1, 2], 3, edge_family())


# -- initialisation --------------------------------------------------------------------------------


def test_init_k2():
    f = init_clique_family(identity_cover(path(2), 2), [1, 2])
    assert f.colourings == Counter({(1, 2): 1, (2, 1): 1})


def test_init_k3_identity_is_rainbow():
    f = init_clique_family(identity_cover(complete(3), 3), [1, 2, 3])
    assert set(f.colourings) == set(itertools.permutations((1, 2, 3)))
    assert set(f.colourings.values()) == {1}


def test_init_first_clique_of_ten_vertex_instance():
    f = init_clique_family(figure2_cover(), [1, 2, 3, 4], 3)
    assert f.size == 24
    got = {col[:4] for col in f.colourings if col[2] == 1}
    assert got == THIRD_VERTEX_ONE_TUPLES


@given(st.integers(0, 10**6))
def test_init_random_k4_fully_balanced(seed):
    rng = random.Random(seed)
    c = random_cover(complete(4), 4, rng, full=True)
    order = rng.sample([1, 2, 3, 4], 4)
    f = init_clique_family(c, order)
    assert f.size == 24
    assert check_fully_balanced(f, order)
    assert set(f.colour_counts().values()) == {6}
    assert all(c.is_proper(col) for col in f.colourings)


# -- driver ---------------------------------------------------------------------------------------------


def test_p1_path():
    c = identity_cover(path(3), 2)
    d = caterpillar_packing(c, CaterpillarDecomposition(1, ((1, 2), (2, 3))))
    assert d.weights == {(1, 2, 1): F(1, 2), (2, 1, 2): F(1, 2)}


def test_p2_identity_caterpillar():
    g = Graph.from_edges(5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])
    c = identity_cover(g, 3)
    f = caterpillar_family(c, CaterpillarDecomposition(2, ((1, 2, 3), (2, 3, 4), (3, 4, 5))))
    assert f.size == 6 and set(f.colour_counts().values()) == {2}


def test_ten_vertex_pathwidth3_instance():
    c = figure2_cover()
    f = caterpillar_family(c, figure2_decomposition())
    assert f.size == 24 and len(f.colourings) == 24
    assert set(f.colour_counts().values()) == {6}
    assert {col[:4] for col in f.colourings if col[2] == 1} == THIRD_VERTEX_ONE_TUPLES
    rep = validate_packing(c, f.distribution())
    assert rep.ok and set(rep.details["probabilities"].values()) == {F(1, 4)}


def test_debug_mode_checks_every_active_set(monkeypatch):
    monkeypatch.setenv("LISTPACK_DEBUG", "1")
    assert caterpillar_family(figure2_cover(), figure2_decomposition()).size == 24


def test_driver_rejects_wrong_fold():
    with pytest.raises(BalanceError):
        caterpillar_packing(identity_cover(path(3), 3), CaterpillarDecomposition(1, ((1, 2), (2, 3))))


@given(st.integers(1, 3), st.integers(0, 4), st.integers(0, 10**6))
def test_random_caterpillars_are_exact(p, extra, seed):
    rng = random.Random(seed)
    sets = [tuple(range(1, p + 2))]
    for i in range(extra):
        keep = rng.sample(sets[-1], p)
        sets.append(tuple(keep) + (p + 2 + i,))
    n = p + 1 + extra
    edges = {tuple(sorted(e)) for a in sets for e in itertools.combinations(a, 2) if rng.random() < 0.8}
    g = Graph.from_edges(n, sorted(edges))
    c = random_cover(g, p + 1, rng, full=rng.random() < 0.5)
    d = caterpillar_packing(c, CaterpillarDecomposition(p, tuple(sets)))
    assert len(d.weights) <= math.factorial(p + 1)
    assert set(marginals(c.sizes, d.weights).values()) == {F(1, p + 1)}
    assert all(c.is_proper(col) for col in d.weights)


# -- shifted triangle ------------------------------------------------------------------------------------


def test_cyclic_shift_small_cases():
    assert check_cyclic_shift_infeasible(3)
    assert check_cyclic_shift_infeasible(4)
    assert not check_cyclic_shift_infeasible(3, shift=False)
    assert not check_cyclic_shift_infeasible(4, shift=False)


def test_identity_family_is_balanced_on_every_edge():
    fam = balanced_triangle_family(4, shift=False)
    c = shifted_triangle(4, shift=False)
    assert sum(fam.values()) == 4 * 3 * 2
    for col in fam:
        assert c.is_proper(col)
    for u, v in ((1, 2), (1, 3), (2, 3)):
        pairs = Counter()
        for col, m in fam.items():
            pairs[(col[u - 1], col[v - 1])] += m
        assert len(pairs) == 12 and set(pairs.values()) == {2}


def test_multiset_reading_only_blocks_three():
    assert check_cyclic_shift_infeasible(3, distinct=False)
    assert not check_cyclic_shift_infeasible(4, distinct=False)
