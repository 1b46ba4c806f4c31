"""Correspondence covers.

A colour is a pair ``(v, a)`` with ``a`` a 1-based index into the list of
``v``. A colouring is a tuple ``(c_1, ..., c_n)`` of such indices. Each base
edge ``uv`` with ``u < v`` carries a set of pairs ``(a, b)`` meaning colour
``a`` of ``u`` conflicts with colour ``b`` of ``v``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .graph import Graph
from .report import Report


class CoverError(ValueError):
    pass


def _key(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CorrespondenceCover:
    base: Graph
    sizes: tuple
    matchings: dict = field(default_factory=dict)
    values: Optional[tuple] = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != self.base.vertex_count:
            raise CoverError("one list size per vertex is required")
        norm = {}
        for (u, v), pairs in self.matchings.items():
            if u > v:
                u, v = v, u
                pairs = [(b, a) for a, b in pairs]
            pairs = frozenset((int(a), int(b)) for a, b in pairs)
            if (u, v) in norm:
                pairs = pairs | norm[(u, v)]
            if pairs:
                norm[(u, v)] = pairs
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "matchings", norm)

    @property
    def n(self) -> int:
        return self.base.vertex_count

    def size(self, v: int) -> int:
        return self.sizes[v - 1]

    def matching(self, u: int, v: int) -> frozenset:
        """Pairs ``(a, b)`` with ``a`` in ``L(u)`` and ``b`` in ``L(v)``."""
        pairs = self.matchings.get(_key(u, v), frozenset())
        if u < v:
            return pairs
        return frozenset((b, a) for a, b in pairs)

    def partner(self, u: int, a: int, v: int) -> Optional[int]:
        """Colour of ``L(v)`` matched to colour ``a`` of ``u``, if any."""
        return self._partners.get((u, v), {}).get(a)

    @cached_property
    def _partners(self) -> dict:
        out = {}
        for (u, v), pairs in self.matchings.items():
            fw = out.setdefault((u, v), {})
            bw = out.setdefault((v, u), {})
            for a, b in pairs:
                fw[a] = b
                bw[b] = a
        return out

    def is_k_fold(self, k: Optional[int] = None) -> bool:
        if not self.sizes:
            return True
        k = self.sizes[0] if k is None else k
        return all(s == k for s in self.sizes)

    def is_proper(self, colouring: Sequence[int]) -> bool:
        if len(colouring) != self.n:
            return False
        for v, a in enumerate(colouring, 1):
            if not 1 <= a <= self.sizes[v - 1]:
                return False
        for (u, v), pairs in self.matchings.items():
            if (colouring[u - 1], colouring[v - 1]) in pairs:
                return False
        return True

    def offsets(self) -> list:
        """Flattened id of colour ``(v, 1)`` is ``offsets[v - 1]``."""
        out = [0]
        for s in self.sizes[:-1]:
            out.append(out[-1] + s)
        return out[: self.n]

    def colour_count(self) -> int:
        return sum(self.sizes)

    def conflict_matrix(self) -> np.ndarray:
        """Boolean matrix of matching edges over flattened colour ids."""
        off = self.offsets()
        total = self.colour_count()
        m = np.zeros((total, total), dtype=np.bool_)
        for (u, v), pairs in self.matchings.items():
            for a, b in pairs:
                x, y = off[u - 1] + a - 1, off[v - 1] + b - 1
                m[x, y] = m[y, x] = True
        return m

    def with_matchings(self, matchings: dict) -> "CorrespondenceCover":
        return CorrespondenceCover(self.base, self.sizes, matchings, self.values)


def identity_cover(g: Graph, k) -> CorrespondenceCover:
    """Cover with identity matchings; ``k`` is a fold size or per-vertex sizes."""
    sizes = [k] * g.vertex_count if isinstance(k, int) else list(k)
    matchings = {}
    for u, v in g.edges:
        m = min(sizes[u - 1], sizes[v - 1])
        matchings[(u, v)] = [(a, a) for a in range(1, m + 1)]
    return CorrespondenceCover(g, tuple(sizes), matchings)


def validate_cover(c: CorrespondenceCover) -> Report:
    """Check list sizes, that matchings sit on base edges and are matchings."""
    rep = Report()
    for v, s in enumerate(c.sizes, 1):
        if s < 1:
            rep.add(f"list of vertex {v} is empty")
    for (u, v), pairs in sorted(c.matchings.items()):
        if not c.base.has_edge(u, v):
            rep.add(f"matching on non-edge {u}-{v}")
            continue
        left, right = set(), set()
        for a, b in sorted(pairs):
            if not (1 <= a <= c.size(u) and 1 <= b <= c.size(v)):
                rep.add(f"pair ({a},{b}) on edge {u}-{v} is outside the lists")
            if a in left or b in right:
                rep.add(f"edge {u}-{v}: not a matching at pair ({a},{b})")
            left.add(a)
            right.add(b)
    return rep


def list_cover_from_assignment(g: Graph, lists) -> CorrespondenceCover:
    """List assignment as a cover; equal colour values are matched."""
    if isinstance(lists, Mapping):
        lists = [lists[v] for v in g.vertices]
    values = tuple(tuple(sorted(set(l))) for l in lists)
    if len(values) != g.vertex_count:
        raise CoverError("one list per vertex is required")
    matchings = {}
    for u, v in g.edges:
        iu = {x: i for i, x in enumerate(values[u - 1], 1)}
        pairs = [(iu[x], j) for j, x in enumerate(values[v - 1], 1) if x in iu]
        matchings[(u, v)] = pairs
    return CorrespondenceCover(g, tuple(len(l) for l in values), matchings, values)


def _complete_edge(pairs, ku: int, kv: int) -> frozenset:
    left = {a for a, _ in pairs}
    right = {b for _, b in pairs}
    free_u = [a for a in range(1, ku + 1) if a not in left]
    free_v = [b for b in range(1, kv + 1) if b not in right]
    return frozenset(pairs) | frozenset(zip(free_u, free_v))


def complete_matchings(c: CorrespondenceCover) -> CorrespondenceCover:
    """Extend every matching to a perfect one; needs equal list sizes per edge."""
    out = {}
    for u, v in c.base.edges:
        if c.size(u) != c.size(v):
            raise CoverError(f"edge {u}-{v} joins lists of sizes {c.size(u)} and {c.size(v)}")
        out[(u, v)] = _complete_edge(c.matching(u, v), c.size(u), c.size(v))
    return c.with_matchings(out)


def maximise_matchings(c: CorrespondenceCover, edges: Optional[Iterable] = None) -> CorrespondenceCover:
    """Grow matchings to size ``min(|L(u)|, |L(v)|)`` by pairing leftovers in order."""
    out = dict(c.matchings)
    todo = c.base.edges if edges is None else [_key(*e) for e in edges]
    for u, v in todo:
        out[(u, v)] = _complete_edge(c.matching(u, v), c.size(u), c.size(v))
    return c.with_matchings(out)


def restrict_cover(c: CorrespondenceCover, keep: Iterable[int]) -> CorrespondenceCover:
    """Cover of the induced subgraph, relabelled in increasing id order."""
    kept = sorted(set(keep))
    index = {v: i + 1 for i, v in enumerate(kept)}
    sub = c.base.induced(kept)
    matchings = {}
    for (u, v), pairs in c.matchings.items():
        if u in index and v in index:
            matchings[(index[u], index[v])] = pairs
    values = None if c.values is None else tuple(c.values[v - 1] for v in kept)
    return CorrespondenceCover(sub, tuple(c.size(v) for v in kept), matchings, values)


def delete_colours(c: CorrespondenceCover, removals: Iterable) -> tuple:
    """Drop colours ``(v, a)`` and compact the surviving indices in order.

    Returns ``(cover, index_map)`` where ``index_map[v - 1][b - 1]`` is the
    original index of new colour ``b`` at ``v``.
    """
    gone = {}
    for v, a in removals:
        if not 1 <= a <= c.size(v):
            raise CoverError(f"colour {a} is not in the list of vertex {v}")
        gone.setdefault(v, set()).add(a)
    index_map = []
    renumber = []
    for v in c.base.vertices:
        kept = [a for a in range(1, c.size(v) + 1) if a not in gone.get(v, ())]
        if not kept:
            raise CoverError(f"deleting colours would empty the list of vertex {v}")
        index_map.append(tuple(kept))
        renumber.append({a: i for i, a in enumerate(kept, 1)})
    matchings = {}
    for (u, v), pairs in c.matchings.items():
        ru, rv = renumber[u - 1], renumber[v - 1]
        matchings[(u, v)] = [(ru[a], rv[b]) for a, b in pairs if a in ru and b in rv]
    values = None
    if c.values is not None:
        values = tuple(tuple(c.values[v][a - 1] for a in index_map[v]) for v in range(c.n))
    sizes = tuple(len(m) for m in index_map)
    return CorrespondenceCover(c.base, sizes, matchings, values), tuple(index_map)


def lift_colouring(colouring: Sequence[int], index_map: Sequence[Sequence[int]]) -> tuple:
    return tuple(index_map[v][a - 1] for v, a in enumerate(colouring))


def cover_graph(c: CorrespondenceCover) -> Graph:
    """The flattened graph H: list cliques plus matching edges.

    Colour ``(v, a)`` gets id ``offsets[v - 1] + a`` (lists laid out in vertex order).
    """
    off = c.offsets()
    edges = []
    for v in c.base.vertices:
        base = off[v - 1]
        edges.extend((base + a, base + b) for a, b in itertools.combinations(range(1, c.size(v) + 1), 2))
    for (u, v), pairs in c.matchings.items():
        edges.extend((off[u - 1] + a, off[v - 1] + b) for a, b in pairs)
    return Graph.from_edges(c.colour_count(), edges)


def colour_of_id(c: CorrespondenceCover, x: int) -> tuple:
    """Inverse of the cover-graph numbering."""
    for v, s in enumerate(c.sizes, 1):
        if x <= s:
            return v, x
        x -= s
    raise CoverError("colour id out of range")


def random_cover(g: Graph, sizes, rng: random.Random, *, full: bool = False, density: float = 0.7) -> CorrespondenceCover:
    """Random cover; each edge gets a random matching.

    With ``full`` the matchings have size ``min(|L(u)|, |L(v)|)``; otherwise
    each pair of a random maximum matching is kept with probability ``density``.
    """
    sizes = [sizes] * g.vertex_count if isinstance(sizes, int) else list(sizes)
    matchings = {}
    for u, v in g.sorted_edges():
        ku, kv = sizes[u - 1], sizes[v - 1]
        left = rng.sample(range(1, ku + 1), ku)
        right = rng.sample(range(1, kv + 1), kv)
        pairs = list(zip(left, right))
        if not full:
            pairs = [p for p in pairs if rng.random() < density]
        matchings[(u, v)] = pairs
    return CorrespondenceCover(g, tuple(sizes), matchings)
