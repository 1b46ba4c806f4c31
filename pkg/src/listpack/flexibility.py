"""Weighted flexibility along a degeneracy order.

With lists of size ``deg+(v) + 2`` the last vertex of the order has a 2-list;
each of its colours is taken with probability 1/2, the matched colours are
removed from its neighbours (each loses exactly one, keeping the profile
exact) and the rest of the graph is handled recursively.
"""
from __future__ import annotations

from fractions import Fraction

from ._config import debug
from .cover import CorrespondenceCover, delete_colours, lift_colouring, maximise_matchings, restrict_cover
from .graph import Graph, VertexOrder, degeneracy_order
from .packing import (
    EpsilonProfile,
    PackingDistribution,
    PackingError,
    check_packing,
    monotonicity_lift,
)

HALF = Fraction(1, 2)


def _cover_key(c: CorrespondenceCover) -> tuple:
    return (c.sizes, tuple(sorted((e, tuple(sorted(p))) for e, p in c.matchings.items())))


def _reorder(c: CorrespondenceCover, order) -> CorrespondenceCover:
    """Relabel so that ``order[i]`` becomes vertex ``i + 1``."""
    pos = {v: i + 1 for i, v in enumerate(order)}
    base = Graph.from_edges(c.n, [(pos[u], pos[v]) for u, v in c.base.edges])
    matchings = {}
    for (u, v), pairs in c.matchings.items():
        matchings[(pos[u], pos[v])] = pairs
    return CorrespondenceCover(base, tuple(c.size(v) for v in order), matchings)


def _case_bounds(c: CorrespondenceCover, d: PackingDistribution) -> list:
    """Violations of the per-colour lower bounds at the top recursion level."""
    n = c.n
    probs = d.marginals(c.sizes)
    out = []
    nbrs = c.base.neighbours(n)
    for (u, y), p in probs.items():
        fwd = sum(1 for w in c.base.neighbours(u) if w > u)
        if u == n:
            want, exact = HALF, True
        elif u in nbrs and c.partner(u, y, n) is None:
            want, exact = Fraction(1, 2**fwd), False
        else:
            want, exact = Fraction(1, 2 ** (fwd + 1)), False
        if (exact and p != want) or p < want:
            out.append(f"colour {y} at position {u}: {p} below {want}")
    return out


def _flexible(c: CorrespondenceCover, memo: dict, strict: bool) -> PackingDistribution:
    n = c.n
    if n == 0:
        return PackingDistribution.point(())
    key = _cover_key(c)
    if key in memo:
        return memo[key]
    c = maximise_matchings(c)
    if c.size(n) != 2:
        raise PackingError(f"last vertex has a list of size {c.size(n)}, expected 2")
    rest = restrict_cover(c, range(1, n))
    acc = {}
    for x in (1, 2):
        removals = []
        for u in c.base.neighbours(n):
            z = c.partner(n, x, u)
            if z is not None:
                removals.append((u, z))
        sub, index_map = delete_colours(rest, removals)
        d = _flexible(sub, memo, strict)
        for col, w in d.weights.items():
            full = lift_colouring(col, index_map) + (x,)
            acc[full] = acc.get(full, Fraction(0)) + HALF * w
    out = PackingDistribution(acc)
    if strict:
        bad = _case_bounds(c, out)
        if bad:
            raise PackingError("flexibility bound violated: " + bad[0])
    memo[key] = out
    return out


def flexibility_profile(order: VertexOrder) -> EpsilonProfile:
    return EpsilonProfile({v: Fraction(1, 2 ** (k + 1)) for v, k in order.forward_degrees.items()})


def degenerate_flexible_distribution(c: CorrespondenceCover, order: VertexOrder) -> PackingDistribution:
    """Distribution with ``P(y in I) >= 2^-(deg+(v)+1)`` for lists of size exactly ``deg+(v) + 2``."""
    if sorted(order.order) != list(c.base.vertices):
        raise PackingError("order is not a permutation of the cover's vertices")
    check = VertexOrder.of(c.base, order.order)
    if check.forward_degrees != order.forward_degrees:
        raise PackingError("forward degrees do not match the cover's graph")
    for v, k in order.forward_degrees.items():
        if c.size(v) != k + 2:
            raise PackingError(f"vertex {v} has list size {c.size(v)}, expected {k + 2}")
    work = _reorder(maximise_matchings(c), order.order)
    d = _flexible(work, {}, debug())
    back = {v: i for i, v in enumerate(order.order)}
    out = d.map(lambda col: tuple(col[back[v]] for v in c.base.vertices))
    return check_packing(c, out, flexibility_profile(order), what="flexible distribution")


def flexible_for_degeneracy(c: CorrespondenceCover, d: int, order: VertexOrder = None) -> PackingDistribution:
    """Distribution with every colour at probability at least ``2^-(d+1)``
    for a cover with lists of size at least ``d + 2`` of a d-degenerate graph."""
    order = degeneracy_order(c.base) if order is None else order
    if order.max_forward_degree > d:
        raise PackingError(f"graph is not {d}-degenerate along the order (forward degree {order.max_forward_degree})")
    small = [v for v in c.base.vertices if c.size(v) < d + 2]
    if small:
        raise PackingError(f"vertex {small[0]} has fewer than {d + 2} colours")
    target = [order.forward_degrees[v] + 2 for v in c.base.vertices]
    out = monotonicity_lift(c, target, lambda sub: degenerate_flexible_distribution(sub, order))
    eps = EpsilonProfile.constant(c.n, Fraction(1, 2 ** (d + 1)))
    return check_packing(c, out, eps, what="flexible distribution")
