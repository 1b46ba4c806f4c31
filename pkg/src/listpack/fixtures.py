"""Fixed instances: the hypercube cover, the 45-vertex cover graph, the
pathwidth-3 example and the shifted triangle."""
from __future__ import annotations

import itertools
import random
from typing import Optional

from ._config import BudgetExceeded, budget
from .caterpillar import shifted_triangle
from .cover import CorrespondenceCover, identity_cover
from .graph import CaterpillarDecomposition, Graph, cartesian_product

MAX_CYCLE_VERTICES = 16

# adjacency listing of the 45-vertex cover graph as printed; edges are undirected
APPENDIX_B_ADJACENCY = {
    1: [2, 3, 4, 6, 9, 13, 23, 29, 32, 35, 43],
    2: [3, 4, 7, 10, 14, 17, 24, 30, 33, 37],
    3: [4, 5, 11, 15, 18, 38, 44],
    4: [8, 12, 16, 19, 25, 31, 34, 36, 39, 45],
    5: [3, 6, 7, 8, 9, 13, 20, 24, 30, 33, 37, 44],
    6: [7, 8, 10, 14, 23, 26, 29, 32, 38, 40],
    7: [8, 11, 15, 21, 27, 41, 43],
    8: [12, 16, 22, 25, 28, 31, 34, 39, 42, 45],
    9: [10, 11, 12, 13, 17, 26, 37, 41, 44],
    10: [11, 12, 14, 20, 30, 35, 43],
    11: [12, 15, 18, 21, 27, 29, 38, 40],
    12: [16, 19, 22, 28, 31, 36, 39, 42, 45],
    13: [4, 15, 16, 17, 24, 26, 41],
    14: [15, 16, 20, 27, 33, 40],
    15: [16, 18, 21, 23, 32, 35],
    16: [19, 22, 25, 28, 34, 36, 42],
    17: [18, 19],
    18: [19],
    20: [21, 22],
    21: [22],
    23: [24, 25],
    24: [25],
    26: [27, 28],
    27: [28],
    29: [31],
    30: [31],
    32: [33, 34],
    33: [34],
    35: [36],
    37: [38, 39],
    38: [39],
    40: [41, 42],
    41: [42],
    43: [44, 45],
    44: [45],
}

# two listing slips: 13 is adjacent to 14 (not 4) and 29 to 30. As printed the
# graph has chi_f = 4 and the groups below are not cliques of a cover.
APPENDIX_B_CORRECTIONS = {13: ([4], [14]), 29: ([], [30])}

# colour ids grouped by base vertex: four 4-lists, then 3-lists and one 2-list
APPENDIX_B_LISTS = (
    (1, 2, 3, 4), (5, 6, 7, 8), (9, 10, 11, 12), (13, 14, 15, 16),
    (17, 18, 19), (20, 21, 22), (23, 24, 25), (26, 27, 28), (29, 30, 31),
    (32, 33, 34), (35, 36), (37, 38, 39), (40, 41, 42), (43, 44, 45),
)

FIGURE2_EDGES = (
    (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (3, 6), (4, 5),
    (4, 6), (4, 7), (4, 8), (5, 6), (5, 7), (6, 7), (6, 8), (6, 9), (7, 8), (7, 9),
    (8, 9), (10, 4), (10, 6), (10, 7),
)
FIGURE2_NAMES = {i: f"v{i}" for i in range(1, 10)} | {10: "u"}


def appendix_b_adjacency(printed: bool = False) -> dict:
    adj = {a: list(nbrs) for a, nbrs in APPENDIX_B_ADJACENCY.items()}
    if not printed:
        for a, (drop, add) in APPENDIX_B_CORRECTIONS.items():
            adj[a] = sorted([b for b in adj[a] if b not in drop] + add)
    return adj


def build_appendix_b(printed: bool = False) -> tuple:
    """The 45-vertex graph and its grouping into lists (metadata only).

    ``printed=True`` keeps the listing verbatim, without the two corrections.
    """
    adj = appendix_b_adjacency(printed)
    edges = [(a, b) for a, nbrs in adj.items() for b in nbrs]
    return Graph.from_edges(45, edges), APPENDIX_B_LISTS


def appendix_b_cover() -> CorrespondenceCover:
    """The cover of the 14-vertex base graph whose lists are the groups."""
    h, lists = build_appendix_b()
    owner = {}
    for v, group in enumerate(lists, 1):
        for i, x in enumerate(group, 1):
            owner[x] = (v, i)
    matchings = {}
    for x, y in h.edges:
        (u, a), (v, b) = owner[x], owner[y]
        if u == v:
            continue
        if u > v:
            u, v, a, b = v, u, b, a
        matchings.setdefault((u, v), []).append((a, b))
    base = Graph.from_edges(len(lists), matchings.keys())
    return CorrespondenceCover(base, tuple(len(g) for g in lists), matchings)


def hypercube(d: int) -> Graph:
    g = Graph(1)
    k2 = Graph.from_edges(2, [(1, 2)])
    for _ in range(d):
        g = cartesian_product(k2, g)
    return g


def simple_cycles(g: Graph, induced: bool = False) -> list:
    """Every simple cycle as a frozenset of edges; optionally only chordless ones."""
    if g.vertex_count > MAX_CYCLE_VERTICES:
        raise BudgetExceeded(f"cycle enumeration is limited to {MAX_CYCLE_VERTICES} vertices")
    cap = budget()
    seen = set()
    out = []
    for s in g.vertices:
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for u in sorted(g.neighbours(v)):
                if u == s and len(path) >= 3:
                    edges = frozenset(
                        tuple(sorted(e)) for e in zip(path, path[1:] + [s])
                    )
                    if edges not in seen:
                        seen.add(edges)
                        if induced and not _chordless(g, path, edges):
                            continue
                        out.append(edges)
                        if len(out) > cap:
                            raise BudgetExceeded("too many cycles")
                elif u > s and u not in path:
                    stack.append((u, path + [u]))
    return out


def _chordless(g: Graph, path: list, edges: frozenset) -> bool:
    return all(e in edges for e in g.induced_edges(path))


def find_odd_crossing_matching(g: Graph, size: int, induced: bool = False) -> Optional[tuple]:
    """First matching (lexicographic) meeting every cycle an odd number of times.

    With ``induced`` only chordless cycles are constrained.
    """
    cycles = simple_cycles(g, induced)
    for combo in itertools.combinations(g.sorted_edges(), size):
        ends = [x for e in combo for x in e]
        if len(set(ends)) != len(ends):
            continue
        chosen = set(combo)
        if all(len(chosen & c) % 2 == 1 for c in cycles):
            return combo
    return None


def build_q3_cover() -> CorrespondenceCover:
    """2-fold cover of the cube, crossed on three edges hit oddly by every cycle."""
    q3 = hypercube(3)
    # a long cycle through two adjacent faces meets any such matching evenly,
    # so only chordless cycles can be required to be hit oddly
    special = find_odd_crossing_matching(q3, 3, induced=True)
    if special is None:
        raise RuntimeError("no odd-crossing matching of size 3 in the cube")
    c = identity_cover(q3, 2)
    m = dict(c.matchings)
    for e in special:
        m[e] = [(1, 2), (2, 1)]
    return c.with_matchings(m)


def figure2_graph() -> Graph:
    return Graph.from_edges(10, FIGURE2_EDGES)


def figure2_cover() -> CorrespondenceCover:
    """4-fold cover: identity matchings except ``c(v4) != c(v2) + 1 (mod 4)`` on v2v4."""
    c = identity_cover(figure2_graph(), 4)
    m = dict(c.matchings)
    m[(2, 4)] = [(a, a % 4 + 1) for a in range(1, 5)]
    return c.with_matchings(m)


def figure2_decomposition() -> CaterpillarDecomposition:
    return CaterpillarDecomposition(
        3,
        (
            (1, 2, 3, 4), (2, 3, 4, 5), (3, 4, 5, 6), (4, 5, 6, 7),
            (4, 6, 7, 10), (4, 6, 7, 8), (6, 7, 8, 9),
        ),
    )


def cyclic_shift_cover(q: int = 3) -> CorrespondenceCover:
    return shifted_triangle(q)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < p])


def random_degenerate_graph(n: int, d: int, rng: random.Random) -> Graph:
    """Each vertex joins up to ``d`` earlier ones, so the reversed order has forward degree <= d."""
    edges = []
    for v in range(2, n + 1):
        k = rng.randint(0, min(d, v - 1))
        edges += [(u, v) for u in rng.sample(range(1, v), k)]
    return Graph.from_edges(n, edges)


def random_tree(n: int, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(rng.randint(1, v - 1), v) for v in range(2, n + 1)])
