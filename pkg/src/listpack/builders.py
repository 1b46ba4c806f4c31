"""Packings built by peeling off a vertex set whose members see at most one
vertex outside it, then gluing with ``compose_packing``.
"""
from __future__ import annotations

from typing import Callable, Optional

from .cover import CorrespondenceCover, restrict_cover
from .graph import EliminationForest, Graph, LayerPartition, validate_layer_partition
from .packing import (
    PackingDistribution,
    PackingError,
    check_packing,
    compose_packing,
    lp_oracle,
    monotonicity_lift,
    product_of,
    uniform_single_vertex,
)

LayerOracle = Callable[[int, CorrespondenceCover], PackingDistribution]


def by_components(oracle):
    """Wrap a cover oracle so it runs once per connected component."""

    def run(c: CorrespondenceCover) -> PackingDistribution:
        comps = c.base.components()
        if len(comps) == 1:
            return oracle(c)
        parts = [(comp, oracle(restrict_cover(c, comp))) for comp in comps]
        return product_of(parts, c.n)

    return run


default_oracle = by_components(lp_oracle)


def layered_packing(c: CorrespondenceCover, lp: LayerPartition, layer_oracle: Optional[LayerOracle] = None) -> PackingDistribution:
    """Pack layer by layer; the last layer is glued onto a packing of the rest.

    ``layer_oracle(i, cover)`` packs the cover induced on layer ``i`` (1-based),
    after boundary deletions.
    """
    rep = validate_layer_partition(c.base, lp)
    if not rep.ok:
        raise PackingError(f"invalid layer partition: {rep.violations[0]}")
    if layer_oracle is None:
        layer_oracle = lambda i, cov: default_oracle(cov)
    return check_packing(c, _layered(c, list(lp.layers), layer_oracle), what="layered packing")


def _layered(c, layers, layer_oracle):
    m = len(layers)
    if m == 1:
        return layer_oracle(1, c)
    last = layers[-1]
    rest = sorted(v for layer in layers[:-1] for v in layer)
    index = {v: i + 1 for i, v in enumerate(rest)}
    sub_layers = [[index[v] for v in layer] for layer in layers[:-1]]
    outer = _layered(restrict_cover(c, rest), sub_layers, layer_oracle)
    return compose_packing(c, last, outer, lambda cov: layer_oracle(m, cov))


def treedepth_packing(c: CorrespondenceCover, f: EliminationForest) -> PackingDistribution:
    """Packing for lists of size at least the forest depth.

    Each component is cut down to exact lists of its subtree depth, its root
    is coloured uniformly and the rest is packed recursively.
    """
    f.validate(c.base)
    depth = f.depth
    small = [v for v in c.base.vertices if c.size(v) < depth]
    if small:
        raise PackingError(f"vertex {small[0]} has a list smaller than the forest depth {depth}")
    return check_packing(c, _treedepth(c, f), what="treedepth packing")


def _treedepth(c: CorrespondenceCover, f: EliminationForest) -> PackingDistribution:
    if c.n == 0:
        return PackingDistribution.point(())
    roots = f.roots
    if len(roots) > 1:
        parts = []
        for r in roots:
            keep = f.subtree(r)
            parts.append((keep, _treedepth(restrict_cover(c, keep), f.restrict(keep))))
        return product_of(parts, c.n)
    if c.n == 1:
        return uniform_single_vertex(c)
    (root,) = roots
    d = f.depth

    def exact(cov: CorrespondenceCover) -> PackingDistribution:
        outer = uniform_single_vertex(restrict_cover(cov, [root]))
        rest = [v for v in cov.base.vertices if v != root]
        sub_forest = f.restrict(rest)
        return compose_packing(cov, rest, outer, lambda inner: _treedepth(inner, sub_forest))

    return monotonicity_lift(c, [d] * c.n, exact)


def cartesian_packing(
    c: CorrespondenceCover,
    g1: Graph,
    g2: Graph,
    k1: int,
    g1_oracle=None,
) -> PackingDistribution:
    """Packing of a cover of ``g1 x g2`` with ``|L(a, b)| >= k1 + deg(b)``.

    ``g1_oracle`` must pack every cover of ``g1`` with lists of size exactly
    ``k1``. Vertices are numbered ``(a - 1) * |V(g2)| + b``.
    """
    if c.n != g1.vertex_count * g2.vertex_count:
        raise PackingError("cover size does not match the product")
    if g1_oracle is None:
        g1_oracle = default_oracle
    n2 = g2.vertex_count
    for v in c.base.vertices:
        b = (v - 1) % n2 + 1
        if c.size(v) < k1 + g2.degree(b):
            raise PackingError(f"list at vertex {v} is smaller than {k1} + deg({b})")
    return check_packing(c, _cartesian(c, g1, g2, k1, g1_oracle), what="product packing")


def _cartesian(c, g1: Graph, g2: Graph, k1: int, g1_oracle) -> PackingDistribution:
    n1, n2 = g1.vertex_count, g2.vertex_count
    target = [k1 + g2.degree((v - 1) % n2 + 1) for v in c.base.vertices]

    def exact(cov: CorrespondenceCover) -> PackingDistribution:
        if n2 == 1:
            return g1_oracle(cov)
        b0 = min(g2.vertices, key=lambda b: (-g2.degree(b), b))
        column = [(a - 1) * n2 + b0 for a in range(1, n1 + 1)]
        base_cover = restrict_cover(cov, column)
        outer = monotonicity_lift(base_cover, [k1] * n1, g1_oracle)
        rest = [v for v in cov.base.vertices if (v - 1) % n2 + 1 != b0]
        g2_rest = g2.induced(b for b in g2.vertices if b != b0)
        return compose_packing(cov, rest, outer, lambda inner: _cartesian(inner, g1, g2_rest, k1, g1_oracle))

    return monotonicity_lift(c, target, exact)


def tree_product_packing(c: CorrespondenceCover, g1: Graph, tree: Graph, k1: int, g1_oracle=None) -> PackingDistribution:
    """Packing of a ``(k1 + 1)``-fold-or-larger cover of ``g1 x tree``.

    The copies of ``g1`` are layered in breadth-first order of the tree, so
    each copy sees at most one earlier copy.
    """
    if g1_oracle is None:
        g1_oracle = default_oracle
    if len(tree.edges) != tree.vertex_count - 1 or len(tree.components()) != 1:
        raise PackingError("second factor is not a tree")
    n2 = tree.vertex_count
    small = [v for v in c.base.vertices if c.size(v) < k1 + 1]
    if small:
        raise PackingError(f"list at vertex {small[0]} is smaller than {k1 + 1}")
    order = [1]
    seen = {1}
    for b in order:
        for nb in sorted(tree.neighbours(b)):
            if nb not in seen:
                seen.add(nb)
                order.append(nb)
    layers = [[(a - 1) * n2 + b for a in g1.vertices] for b in order]

    def layer_oracle(i, cov):
        return monotonicity_lift(cov, [k1] * cov.n, g1_oracle)

    def run(cov):
        return layered_packing(cov, LayerPartition(tuple(layers)), layer_oracle)

    return check_packing(c, monotonicity_lift(c, [k1 + 1] * c.n, run), what="tree product packing")
