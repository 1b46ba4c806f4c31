"""Simple undirected graphs and the orderings/decompositions built on them.

Vertex ids are 1-based throughout. Product vertices are numbered row-major,
``(a - 1) * |V(g2)| + b``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .report import Report

MAX_PATHWIDTH_VERTICES = 24
MAX_TREEDEPTH_VERTICES = 16


class GraphError(ValueError):
    pass


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            for x in (u, v):
                if not 1 <= x <= self.vertex_count:
                    raise GraphError(f"endpoint {x} out of range 1..{self.vertex_count}")
            norm.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    @cached_property
    def _adj(self) -> tuple:
        nbrs = [set() for _ in range(self.vertex_count + 1)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbours(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def bitmasks(self) -> list:
        """Neighbour masks with bit ``v - 1`` standing for vertex ``v``."""
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
        return masks

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph relabelled to ``1..|keep|`` in increasing id order."""
        kept = sorted(set(keep))
        index = {v: i + 1 for i, v in enumerate(kept)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(kept), edges)

    def components(self) -> list:
        seen = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = []
            stack = [s]
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def induced_edges(self, vs: Iterable[int]) -> list:
        keep = set(vs)
        return [e for e in self.sorted_edges() if e[0] in keep and e[1] in keep]

    def is_independent(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(not self.has_edge(a, b) for a, b in itertools.combinations(vs, 2))


def parse_dimacs(text) -> Graph:
    """Parse the DIMACS edge format (``p edge n m`` header, ``e u v`` lines)."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise GraphError(f"line {lineno}: malformed header {line!r}") from None
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: malformed edge {line!r}")
            u, v = int(parts[1]), int(parts[2])
            if u == v:
                raise GraphError(f"line {lineno}: self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"line {lineno}: endpoint out of range in {line!r}")
            edges.append((u, v))
        else:
            raise GraphError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphError("missing 'p edge' header")
    return Graph.from_edges(n, edges)


def to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.vertex_count} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- orderings -----------------------------------------------------------------


@dataclass(frozen=True)
class VertexOrder:
    order: tuple
    forward_degrees: dict

    @classmethod
    def of(cls, g: Graph, order: Sequence[int]) -> "VertexOrder":
        order = tuple(order)
        if sorted(order) != list(g.vertices):
            raise GraphError("order is not a permutation of the vertices")
        pos = {v: i for i, v in enumerate(order)}
        fwd = {v: sum(1 for u in g.neighbours(v) if pos[u] > pos[v]) for v in order}
        return cls(order, fwd)

    @property
    def max_forward_degree(self) -> int:
        return max(self.forward_degrees.values(), default=0)

    def position(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}


def degeneracy_order(g: Graph) -> VertexOrder:
    """Smallest-last order: repeatedly remove a minimum-degree vertex.

    The removal sequence itself is returned, so every vertex has at most
    ``degeneracy(g)`` neighbours later in the order. Ties go to the smallest id.
    """
    deg = {v: g.degree(v) for v in g.vertices}
    alive = set(g.vertices)
    order = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        order.append(v)
        alive.remove(v)
        for u in g.neighbours(v):
            if u in alive:
                deg[u] -= 1
    return VertexOrder.of(g, order)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    n2 = g2.vertex_count
    edges = []
    for a in g1.vertices:
        for b1, b2 in g2.edges:
            edges.append((product_id(a, b1, n2), product_id(a, b2, n2)))
    for b in g2.vertices:
        for a1, a2 in g1.edges:
            edges.append((product_id(a1, b, n2), product_id(a2, b, n2)))
    return Graph.from_edges(g1.vertex_count * n2, edges)


def product_id(a: int, b: int, n2: int) -> int:
    return (a - 1) * n2 + b


def product_pair(v: int, n2: int) -> tuple:
    return (v - 1) // n2 + 1, (v - 1) % n2 + 1


# -- caterpillars ----------------------------------------------------------------


@dataclass(frozen=True)
class CaterpillarDecomposition:
    """Active sets ``A_1 .. A_{n-p}`` of a p-caterpillar, in construction order.

    Only the order inside ``A_1`` is meaningful; later sets are compared as sets.
    """

    p: int
    active_sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "active_sets", tuple(tuple(a) for a in self.active_sets))

    @property
    def interfaces(self) -> tuple:
        return tuple(
            tuple(v for v in a if v in set(b))
            for a, b in zip(self.active_sets, self.active_sets[1:])
        )

    @property
    def vertices(self) -> list:
        return list(derive_orders(self)[0])

    def problems(self, g: Optional[Graph] = None) -> list:
        errs = []
        if self.p < 0:
            errs.append("width must be nonnegative")
        if not self.active_sets:
            errs.append("no active sets")
            return errs
        seen = set()
        for i, a in enumerate(self.active_sets, 1):
            if len(a) != self.p + 1 or len(set(a)) != len(a):
                errs.append(f"A_{i} does not have {self.p + 1} distinct vertices")
            if i == 1:
                seen |= set(a)
                continue
            prev = set(self.active_sets[i - 2])
            new = set(a) - prev
            if len(set(a) & prev) != self.p or len(new) != 1:
                errs.append(f"A_{i} does not share exactly {self.p} vertices with A_{i - 1}")
                continue
            (w,) = new
            if w in seen:
                errs.append(f"vertex {w} re-enters at A_{i}")
            seen.add(w)
        if g is not None:
            if seen != set(g.vertices):
                errs.append("active sets do not cover exactly the vertices of the graph")
            sets = [set(a) for a in self.active_sets]
            for u, v in g.sorted_edges():
                if not any(u in s and v in s for s in sets):
                    errs.append(f"edge {u}-{v} lies in no active set")
                    break
        return errs

    def validate(self, g: Optional[Graph] = None) -> None:
        errs = self.problems(g)
        if errs:
            raise GraphError("invalid caterpillar decomposition: " + "; ".join(errs))

    def supergraph(self, n: Optional[int] = None) -> Graph:
        """The completed p-caterpillar: every active set made a clique."""
        verts = {v for a in self.active_sets for v in a}
        n = n if n is not None else max(verts)
        edges = set()
        for a in self.active_sets:
            edges.update(_edge(u, v) for u, v in itertools.combinations(a, 2))
        return Graph(n, frozenset(edges))


def derive_orders(d: CaterpillarDecomposition) -> tuple:
    """Entry order, reverse-construction order and its opposite (leave order).

    In the leave order every ``A_i \\ A_{i+1}`` is the lowest element of ``A_i``.
    The last active set is listed in reverse entry order inside the reverse
    construction order.
    """
    d.validate()
    sets = d.active_sets
    forward = list(sets[0])
    for prev, cur in zip(sets, sets[1:]):
        forward.extend(v for v in cur if v not in set(prev))
    pos = {v: i for i, v in enumerate(forward)}
    reverse = sorted(sets[-1], key=lambda v: -pos[v])
    for i in range(len(sets) - 2, -1, -1):
        (gone,) = set(sets[i]) - set(sets[i + 1])
        reverse.append(gone)
    return tuple(forward), tuple(reverse), tuple(reversed(reverse))


def _alive_count(mask: int, masks: list) -> int:
    count = 0
    m = mask
    while m:
        b = m & -m
        v = b.bit_length() - 1
        if masks[v] & ~mask:
            count += 1
        m ^= b
    return count


def vertex_separation(g: Graph, order: Sequence[int]) -> int:
    masks = g.bitmasks()
    placed = 0
    worst = 0
    for v in order[:-1]:
        placed |= 1 << (v - 1)
        worst = max(worst, _alive_count(placed, masks))
    return worst


def _layout_within(g: Graph, p: int) -> Optional[list]:
    n = g.vertex_count
    masks = g.bitmasks()
    full = (1 << n) - 1
    failed = set()
    order = []

    def dfs(placed: int) -> bool:
        if placed == full:
            return True
        if placed in failed:
            return False
        for v in range(n):
            bit = 1 << v
            if placed & bit:
                continue
            nxt = placed | bit
            if nxt != full and _alive_count(nxt, masks) > p:
                continue
            order.append(v + 1)
            if dfs(nxt):
                return True
            order.pop()
        failed.add(placed)
        return False

    return order if dfs(0) else None


def caterpillar_from_layout(g: Graph, order: Sequence[int], p: int) -> CaterpillarDecomposition:
    """Embed ``g`` into a p-caterpillar whose entry order is ``order``.

    The vertex leaving at each step is the earliest-placed vertex with no
    neighbour still to come.
    """
    order = list(order)
    n = len(order)
    if p + 1 > n:
        raise GraphError("width too large for the number of vertices")
    pos = {v: i for i, v in enumerate(order)}
    last_nbr = {v: max((pos[u] for u in g.neighbours(v)), default=-1) for v in order}
    active = list(order[: p + 1])
    sets = [tuple(active)]
    for t in range(p + 1, n):
        dead = [v for v in active if last_nbr[v] < t]
        if not dead:
            raise GraphError(f"layout has vertex separation above {p}")
        leave = min(dead, key=lambda v: pos[v])
        active.remove(leave)
        active.append(order[t])
        sets.append(tuple(active))
    return CaterpillarDecomposition(p, tuple(sets))


def pathwidth_decompose_small(g: Graph, limit: Optional[int] = None) -> Optional[CaterpillarDecomposition]:
    """Minimum-width caterpillar embedding by iterative deepening over layouts.

    Returns ``None`` when the pathwidth exceeds ``limit``. Among optimal
    layouts the lexicographically smallest is used.
    """
    n = g.vertex_count
    if n > MAX_PATHWIDTH_VERTICES:
        raise GraphError(f"pathwidth search is limited to {MAX_PATHWIDTH_VERTICES} vertices")
    if n == 0:
        raise GraphError("empty graph")
    top = n - 1 if limit is None else min(limit, n - 1)
    for p in range(0, top + 1):
        layout = _layout_within(g, p)
        if layout is not None:
            return caterpillar_from_layout(g, layout, p)
    return None


# -- elimination forests ---------------------------------------------------------


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest given by ``parent[v]`` (``None`` marks a root)."""

    parent: dict

    @cached_property
    def children(self) -> dict:
        ch = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                ch[p].append(v)
        return {v: sorted(c) for v, c in ch.items()}

    @property
    def roots(self) -> list:
        return sorted(v for v, p in self.parent.items() if p is None)

    def ancestors(self, v: int) -> list:
        out = []
        seen = {v}
        p = self.parent[v]
        while p is not None:
            if p in seen:
                raise GraphError("parent map has a cycle")
            seen.add(p)
            out.append(p)
            p = self.parent[p]
        return out

    @property
    def depth(self) -> int:
        return max((len(self.ancestors(v)) + 1 for v in self.parent), default=0)

    def subtree(self, v: int) -> list:
        out = []
        stack = [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return sorted(out)

    def problems(self, g: Graph) -> list:
        errs = []
        if set(self.parent) != set(g.vertices):
            errs.append("forest vertices differ from graph vertices")
            return errs
        for v, p in self.parent.items():
            if p is not None and p not in self.parent:
                errs.append(f"parent {p} of {v} is not a vertex")
        if errs:
            return errs
        try:
            anc = {v: set(self.ancestors(v)) for v in self.parent}
        except GraphError as exc:
            return [str(exc)]
        for u, v in g.sorted_edges():
            if u not in anc[v] and v not in anc[u]:
                errs.append(f"edge {u}-{v} is not an ancestor-descendant pair")
        return errs

    def validate(self, g: Graph) -> None:
        errs = self.problems(g)
        if errs:
            raise GraphError("invalid elimination forest: " + "; ".join(errs))

    def restrict(self, keep: Iterable[int]) -> "EliminationForest":
        """Forest on ``keep`` (closed under descendants), relabelled like ``Graph.induced``."""
        kept = sorted(set(keep))
        index = {v: i + 1 for i, v in enumerate(kept)}
        parent = {}
        for v in kept:
            p = self.parent[v]
            while p is not None and p not in index:
                p = self.parent[p]
            parent[index[v]] = index[p] if p is not None else None
        return EliminationForest(parent)


def dfs_forest(g: Graph) -> EliminationForest:
    """Depth-first (Trémaux) spanning forest; valid but not depth-optimal."""
    parent = {}
    for root in g.vertices:
        if root in parent:
            continue
        parent[root] = None
        stack = [(root, iter(sorted(g.neighbours(root))))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if u not in parent:
                    parent[u] = v
                    stack.append((u, iter(sorted(g.neighbours(u)))))
                    break
            else:
                stack.pop()
    return EliminationForest(parent)


def treedepth_forest_small(g: Graph) -> EliminationForest:
    """Exact minimum-depth elimination forest by memoised recursion over subsets."""
    n = g.vertex_count
    if n > MAX_TREEDEPTH_VERTICES:
        raise GraphError(f"exact treedepth is limited to {MAX_TREEDEPTH_VERTICES} vertices")
    masks = g.bitmasks()
    memo = {}

    def split(mask):
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = masks[b.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def td(mask):
        # mask is connected and nonempty
        if mask in memo:
            return memo[mask][0]
        best = None
        m = mask
        while m:
            b = m & -m
            m ^= b
            depth = 1 + max((td(c) for c in split(mask & ~b)), default=0)
            if best is None or depth < best[0]:
                best = (depth, b)
        memo[mask] = best
        return best[0]

    parent = {}

    def build(mask, above):
        td(mask)
        _, b = memo[mask]
        v = b.bit_length()
        parent[v] = above
        for c in split(mask & ~b):
            build(c, v)

    for comp in split((1 << n) - 1):
        build(comp, None)
    return EliminationForest(parent)


# -- layer partitions --------------------------------------------------------------


@dataclass(frozen=True)
class LayerPartition:
    layers: tuple

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(sorted(l)) for l in self.layers))


def validate_layer_partition(g: Graph, lp: LayerPartition) -> Report:
    rep = Report()
    seen = {}
    for i, layer in enumerate(lp.layers, 1):
        if not layer:
            rep.add(f"layer {i} is empty")
        for v in layer:
            if v in seen:
                rep.add(f"vertex {v} appears in layers {seen[v]} and {i}")
            elif not 1 <= v <= g.vertex_count:
                rep.add(f"vertex {v} is not in the graph")
            else:
                seen[v] = i
    missing = set(g.vertices) - set(seen)
    if missing:
        rep.add(f"vertices not covered: {sorted(missing)}")
    if rep.ok:
        for i, layer in enumerate(lp.layers, 1):
            for v in layer:
                back = sorted(u for u in g.neighbours(v) if seen[u] < i)
                if len(back) > 1:
                    rep.add(f"vertex {v} in layer {i} has {len(back)} earlier neighbours {back}")
    return rep
