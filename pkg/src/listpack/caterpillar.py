"""Packings for (p+1)-fold covers of graphs of pathwidth p.

A family is a multiset of ``(p+1)!`` colourings stored as ``{colouring: count}``
with 0 marking uncoloured vertices. An ordered vertex list is fully balanced
when every suffix ``S`` of it restricts the family to ``(p+1)!/(p+1-|S|)!``
distinct colourings of multiplicity ``(p+1-|S|)!`` each.

Extending to a new vertex ``w`` across an ordered clique ``v_1 .. v_s`` works
on suffix restrictions from the back: for a suffix colouring ``tau`` of
``v_{i+1} .. v_s`` the candidate colours ``S_w`` of ``w`` and ``S_i`` of ``v_i``
have the same size, and every ``a`` in ``S_i`` excludes exactly one colour of
``S_w``: its matching partner if that lies in ``S_w``, otherwise a leftover
colour assigned by pairing leftovers on both sides in increasing order.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._config import BudgetExceeded, budget, debug
from .cover import CorrespondenceCover, complete_matchings, identity_cover
from .graph import CaterpillarDecomposition, Graph, derive_orders
from .lp import RevisedSimplex
from .packing import PackingDistribution, check_packing

MAX_WIDTH = 8


class BalanceError(RuntimeError):
    pass


@dataclass(frozen=True)
class BalancedFamily:
    p: int
    colourings: Counter = field(default_factory=Counter)

    @property
    def size(self) -> int:
        return sum(self.colourings.values())

    def restriction(self, vertices: Sequence[int]) -> Counter:
        out = Counter()
        for col, m in self.colourings.items():
            out[tuple(col[v - 1] for v in vertices)] += m
        return out

    def colour_counts(self) -> Counter:
        out = Counter()
        for col, m in self.colourings.items():
            for v, a in enumerate(col, 1):
                if a:
                    out[(v, a)] += m
        return out

    def distribution(self) -> PackingDistribution:
        total = self.size
        return PackingDistribution({col: Fraction(m, total) for col, m in self.colourings.items()})


def _balanced(f: BalancedFamily, vertices: Sequence[int]) -> bool:
    s = len(vertices)
    if s > f.p + 1:
        return False
    mult = math.factorial(f.p + 1 - s)
    distinct = math.factorial(f.p + 1) // mult
    counts = f.restriction(vertices)
    if any(0 in key for key in counts):
        return False
    return len(counts) == distinct and all(m == mult for m in counts.values())


def check_fully_balanced(f: BalancedFamily, s: Sequence[int]) -> bool:
    """True iff every suffix of the ordered list ``s`` is balanced."""
    if f.size != math.factorial(f.p + 1):
        return False
    return all(_balanced(f, s[j:]) for j in range(len(s)))


def _require_full(c: CorrespondenceCover, clique: Sequence[int], new: int) -> None:
    for v in clique:
        if not c.base.has_edge(v, new):
            raise BalanceError(f"{v} and {new} are not adjacent in the cover's graph")
        k = min(c.size(v), c.size(new))
        if len(c.matching(v, new)) != k:
            raise BalanceError(f"matching on {v}-{new} is not full")


def extension_table(c: CorrespondenceCover, clique: Sequence[int], new: int, f: BalancedFamily) -> dict:
    """Map each clique colouring (restricted to ``clique``) to ``{colour of new: count}``."""
    p = f.p
    s = len(clique)
    layer = {(): {z: math.factorial(p) for z in range(1, c.size(new) + 1)}}
    for i in range(s - 1, -1, -1):
        length = s - i  # suffix length including v_i, excluding new
        mult = math.factorial(p - length)
        want = p + 2 - length
        v = clique[i]
        restricted = f.restriction(clique[i:])
        by_tail = {}
        for key in restricted:
            by_tail.setdefault(key[1:], []).append(key[0])
        nxt = {}
        for tail, zs in layer.items():
            S_new = sorted(zs)
            S_v = sorted(by_tail.get(tail, ()))
            if len(S_new) != want or len(S_v) != want:
                raise BalanceError(
                    f"suffix at {v}: expected {want} candidates, found {len(S_v)} and {len(S_new)}"
                )
            excluded = {}
            taken = set()
            for a in S_v:
                z = c.partner(v, a, new)
                if z is not None and z in zs:
                    excluded[a] = z
                    taken.add(z)
            spare_a = [a for a in S_v if a not in excluded]
            spare_z = [z for z in S_new if z not in taken]
            excluded.update(zip(spare_a, spare_z))
            for a in S_v:
                nxt[(a,) + tail] = {z: mult for z in S_new if z != excluded[a]}
        layer = nxt
    return layer


def extend_clique_colourings(c: CorrespondenceCover, clique: Sequence[int], new: int, f: BalancedFamily) -> BalancedFamily:
    """Colour ``new`` so that ``(clique..., new)`` becomes fully balanced.

    ``clique`` must be fully balanced in ``f`` and ``new`` uncoloured.
    """
    clique = list(clique)
    if not check_fully_balanced(f, clique):
        raise BalanceError(f"ordered clique {clique} is not fully balanced before extension")
    _require_full(c, clique, new)
    table = extension_table(c, clique, new, f)
    groups = {}
    for col in sorted(f.colourings):
        if col[new - 1]:
            raise BalanceError(f"vertex {new} is already coloured")
        groups.setdefault(tuple(col[v - 1] for v in clique), []).append(col)
    out = Counter()
    for key, cols in groups.items():
        slots = [z for z, m in sorted(table[key].items()) for _ in range(m)]
        owners = [col for col in cols for _ in range(f.colourings[col])]
        if len(slots) != len(owners):
            raise BalanceError("extension does not match the family's multiplicities")
        for col, z in zip(owners, slots):
            new_col = list(col)
            new_col[new - 1] = z
            out[tuple(new_col)] += 1
    g = BalancedFamily(f.p, out)
    if not check_fully_balanced(g, clique + [new]):
        raise BalanceError(f"extension to {new} is not fully balanced")
    return g


def init_clique_family(c: CorrespondenceCover, order: Sequence[int], p: Optional[int] = None) -> BalancedFamily:
    """``(p+1)!`` colourings of the clique ``order``, fully balanced on it."""
    order = list(order)
    p = len(order) - 1 if p is None else p
    if len(order) > p + 1:
        raise BalanceError("clique larger than p + 1")
    if p > MAX_WIDTH:
        raise BudgetExceeded(f"width {p} exceeds the cap {MAX_WIDTH}")
    first = order[0]
    if c.size(first) != p + 1:
        raise BalanceError(f"list of vertex {first} has size {c.size(first)}, expected {p + 1}")
    fam = Counter()
    for z in range(1, p + 2):
        col = [0] * c.n
        col[first - 1] = z
        fam[tuple(col)] = math.factorial(p)
    f = BalancedFamily(p, fam)
    for j in range(1, len(order)):
        f = extend_clique_colourings(c, order[:j], order[j], f)
    counts = f.colour_counts()
    for v in order:
        for a in range(1, p + 2):
            if counts[(v, a)] != math.factorial(p):
                raise BalanceError(f"colour {a} of vertex {v} appears {counts[(v, a)]} times")
    return f


def caterpillar_cover(c: CorrespondenceCover, d: CaterpillarDecomposition) -> CorrespondenceCover:
    """``c`` moved onto the completed caterpillar, with every matching made perfect."""
    sup = d.supergraph(c.n)
    base = Graph(c.n, sup.edges | c.base.edges)
    return complete_matchings(CorrespondenceCover(base, c.sizes, c.matchings))


def caterpillar_family(c: CorrespondenceCover, d: CaterpillarDecomposition) -> BalancedFamily:
    p = d.p
    if p > MAX_WIDTH:
        raise BudgetExceeded(f"width {p} exceeds the cap {MAX_WIDTH}")
    d.validate(c.base)
    if not c.is_k_fold(p + 1):
        raise BalanceError(f"cover is not {p + 1}-fold")
    full = caterpillar_cover(c, d)
    _, _, leave = derive_orders(d)
    pos = {v: i for i, v in enumerate(leave)}
    ordered = [sorted(a, key=pos.__getitem__) for a in d.active_sets]
    f = init_clique_family(full, ordered[0], p)
    strict = debug()
    for i in range(len(ordered) - 1):
        cur, nxt = set(ordered[i]), ordered[i + 1]
        shared = [v for v in nxt if v in cur]
        (new,) = [v for v in nxt if v not in cur]
        f = extend_clique_colourings(full, shared, new, f)
        if not check_fully_balanced(f, nxt):
            raise BalanceError(f"active set {i + 2} is not fully balanced")
        if strict:
            for j, a in enumerate(ordered[: i + 2], 1):
                if not check_fully_balanced(f, a):
                    raise BalanceError(f"active set {j} lost balance after step {i + 1}")
    counts = f.colour_counts()
    want = math.factorial(p)
    for v in c.base.vertices:
        for a in range(1, p + 2):
            if counts[(v, a)] != want:
                raise BalanceError(f"colour {a} of vertex {v} appears {counts[(v, a)]} times, expected {want}")
    for col in f.colourings:
        if not full.is_proper(col):
            raise BalanceError(f"colouring {col} is not proper")
    return f


def caterpillar_packing(c: CorrespondenceCover, d: CaterpillarDecomposition) -> PackingDistribution:
    """Uniform distribution over the ``(p+1)!`` colourings of the balanced family."""
    f = caterpillar_family(c, d)
    return check_packing(c, f.distribution(), what="caterpillar packing")


# -- the shifted triangle ------------------------------------------------------------


def shifted_triangle(q: int, shift: bool = True) -> CorrespondenceCover:
    """q-fold triangle cover: identity on 12 and 13, ``b = a + 1 mod q`` on 23."""
    tri = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
    c = identity_cover(tri, q)
    if not shift:
        return c
    m = dict(c.matchings)
    m[(2, 3)] = [(a, a % q + 1) for a in range(1, q + 1)]
    return c.with_matchings(m)


def _pair_rows(c: CorrespondenceCover):
    """Row index for every (edge, proper pair) of the triangle cover."""
    rows = {}
    for u, v in ((1, 2), (1, 3), (2, 3)):
        bad = c.matching(u, v)
        for a in range(1, c.size(u) + 1):
            for b in range(1, c.size(v) + 1):
                if (a, b) not in bad:
                    rows[(u, v, a, b)] = len(rows)
    return rows


def _columns(c: CorrespondenceCover, rows: dict) -> list:
    cols = []
    for col in itertools.product(*(range(1, s + 1) for s in c.sizes)):
        if c.is_proper(col):
            idx = [rows[(u, v, col[u - 1], col[v - 1])] for u, v in ((1, 2), (1, 3), (2, 3))]
            cols.append((col, idx))
    return cols


def _lp_feasible(rows: dict, cols: list, rhs: Fraction):
    m = len(rows)
    art = [("a", i) for i in range(m)]
    lp = RevisedSimplex([rhs] * m, art, [1] * m, leaving="bland")
    lp.register(("t", j) for j in range(len(cols)))
    while True:
        y = lp.duals()
        entering = None
        for j, (_, idx) in enumerate(cols):
            if sum((y[r] for r in idx), Fraction(0)) > 0:
                entering = j
                break
        if entering is None:
            break
        lp.enter(("t", entering), {r: 1 for r in cols[entering][1]}, 0)
    if lp.objective() > 0:
        return None
    return {cols[k[1]][0]: x for k, x in lp.values().items() if k[0] == "t" and x}


def _integer_family(rows: dict, cols: list, demand: int) -> Optional[Counter]:
    remaining = [demand] * len(rows)
    uses = {r: [] for r in range(len(rows))}
    for j, (_, idx) in enumerate(cols):
        for r in idx:
            uses[r].append(j)
    chosen = Counter()
    dead = set()

    def dfs() -> bool:
        state = tuple(remaining)
        if state in dead:
            return False
        open_rows = [r for r in range(len(rows)) if remaining[r] > 0]
        if not open_rows:
            return True
        best = None
        for r in open_rows:
            cand = [j for j in uses[r] if all(remaining[t] > 0 for t in cols[j][1])]
            if best is None or len(cand) < len(best[1]):
                best = (r, cand)
        for j in best[1]:
            for t in cols[j][1]:
                remaining[t] -= 1
            chosen[j] += 1
            if dfs():
                return True
            chosen[j] -= 1
            for t in cols[j][1]:
                remaining[t] += 1
        dead.add(state)
        return False

    if not dfs():
        return None
    return Counter({cols[j][0]: k for j, k in chosen.items() if k})


def _distinct_family(rows: dict, cols: list, demand: int) -> Optional[Counter]:
    """Choose a set of columns (each at most once) covering every row ``demand`` times."""
    remaining = [demand] * len(rows)
    uses = {r: [] for r in range(len(rows))}
    for j, (_, idx) in enumerate(cols):
        for r in idx:
            uses[r].append(j)
    state = [None] * len(cols)
    cap = budget()
    nodes = 0

    def usable(j: int) -> bool:
        return state[j] is None and all(remaining[t] > 0 for t in cols[j][1])

    def dfs() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise BudgetExceeded("balanced family search exceeded the budget")
        best = None
        for r in range(len(rows)):
            if remaining[r] == 0:
                continue
            cand = [j for j in uses[r] if usable(j)]
            if len(cand) < remaining[r]:
                return False
            if best is None or len(cand) < len(best):
                best = cand
        if best is None:
            return True
        j = best[0]
        state[j] = True
        for t in cols[j][1]:
            remaining[t] -= 1
        if dfs():
            return True
        for t in cols[j][1]:
            remaining[t] += 1
        state[j] = False
        if dfs():
            return True
        state[j] = None
        return False

    if not dfs():
        return None
    return Counter({cols[j][0]: 1 for j, on in enumerate(state) if on})


def balanced_triangle_family(q: int, shift: bool = True, distinct: bool = True) -> Optional[Counter]:
    """``q(q-1)(q-2)`` colourings of the triangle with every edge seeing each
    proper pair ``q - 2`` times, or ``None`` if there are none.

    By default the colourings must be pairwise different; with
    ``distinct=False`` repeats are allowed.
    """
    if not 3 <= q <= 6:
        raise BudgetExceeded("q must lie in 3..6")
    c = shifted_triangle(q, shift)
    rows = _pair_rows(c)
    cols = _columns(c, rows)
    frac = _lp_feasible(rows, cols, Fraction(1, q * (q - 1)))
    if frac is None:
        return None
    if distinct:
        return _distinct_family(rows, cols, q - 2)
    total = q * (q - 1) * (q - 2)
    scaled = {col: x * total for col, x in frac.items()}
    if all(x.denominator == 1 for x in scaled.values()):
        return Counter({col: int(x) for col, x in scaled.items()})
    return _integer_family(rows, cols, q - 2)


def check_cyclic_shift_infeasible(q: int, shift: bool = True, distinct: bool = True) -> bool:
    """True iff the (shifted) triangle admits no balanced family on all three edges."""
    return balanced_triangle_family(q, shift, distinct) is None
