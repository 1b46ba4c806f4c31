"""Probability distributions on proper colourings and the tools that build them.

All weights are ``Fraction``s. A distribution is stored as a map from
colouring tuples to weights; identical colourings are merged on construction.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from ._config import BudgetExceeded, budget, debug
from .cover import (
    CorrespondenceCover,
    CoverError,
    delete_colours,
    lift_colouring,
    maximise_matchings,
    restrict_cover,
)
from .lp import RevisedSimplex, common_scale
from .report import Report

Oracle = Callable[[CorrespondenceCover], "PackingDistribution"]

JOINT_LIMIT = 64


class PackingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PackingDistribution:
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        merged = {}
        for col, w in self.weights.items():
            w = Fraction(w)
            if w < 0:
                raise PackingError(f"negative weight {w}")
            if w:
                col = tuple(int(a) for a in col)
                merged[col] = merged.get(col, Fraction(0)) + w
        object.__setattr__(self, "weights", merged)

    @classmethod
    def point(cls, colouring: Sequence[int]) -> "PackingDistribution":
        return cls({tuple(colouring): Fraction(1)})

    @classmethod
    def uniform(cls, colourings: Iterable[Sequence[int]]) -> "PackingDistribution":
        """Uniform over the given list; repeats add up."""
        cols = [tuple(c) for c in colourings]
        if not cols:
            raise PackingError("uniform distribution over nothing")
        w = Fraction(1, len(cols))
        acc = {}
        for c in cols:
            acc[c] = acc.get(c, Fraction(0)) + w
        return cls(acc)

    @property
    def support(self) -> list:
        return sorted(self.weights.items())

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self.weights)

    def marginals(self, sizes: Sequence[int]) -> dict:
        probs = {(v, a): Fraction(0) for v, s in enumerate(sizes, 1) for a in range(1, s + 1)}
        for col, w in self.weights.items():
            for v, a in enumerate(col, 1):
                key = (v, a)
                if key in probs:
                    probs[key] += w
                else:
                    probs[key] = w
        return probs

    def map(self, fn: Callable[[tuple], tuple]) -> "PackingDistribution":
        acc = {}
        for col, w in self.weights.items():
            new = fn(col)
            acc[new] = acc.get(new, Fraction(0)) + w
        return PackingDistribution(acc)


@dataclass(frozen=True)
class EpsilonProfile:
    eps: dict

    def __post_init__(self):
        norm = {int(v): Fraction(e) for v, e in self.eps.items()}
        for v, e in norm.items():
            if not 0 <= e <= 1:
                raise PackingError(f"eps({v}) = {e} is outside [0, 1]")
        object.__setattr__(self, "eps", norm)

    @classmethod
    def constant(cls, n: int, eps) -> "EpsilonProfile":
        return cls({v: eps for v in range(1, n + 1)})


@dataclass(frozen=True)
class Infeasible:
    """Farkas-type certificate that no fractional packing exists.

    For every proper colouring I, ``bound + sum(colour_weights[x] for x in I) <= 0``,
    while ``bound + sum(colour_weights[x] / |L(v)|) == value > 0``; also every
    colour weight is nonnegative.
    """

    bound: Fraction
    colour_weights: dict
    value: Fraction

    def __bool__(self) -> bool:
        return False


def validate_packing(c: CorrespondenceCover, d: PackingDistribution, target="fractional") -> Report:
    """Exact per-colour probabilities, checked against ``1/|L(v)|`` or an eps profile.

    In fractional mode equality is required: each colouring meets every list
    once, so probabilities at ``v`` sum to 1 and the lower bounds force equality.
    """
    rep = Report()
    total = d.total()
    if total != 1:
        rep.add(f"weights sum to {total}, not 1")
    broken = False
    for col, w in d.support:
        if len(col) != c.n:
            rep.add(f"colouring {col} has length {len(col)}, expected {c.n}")
            broken = True
        elif any(not 1 <= a <= c.size(v) for v, a in enumerate(col, 1)):
            rep.add(f"colouring {' '.join(map(str, col))} uses a colour outside a list")
            broken = True
        elif not c.is_proper(col):
            rep.add(f"colouring {' '.join(map(str, col))} is not proper for the cover")
    if broken:
        return rep
    probs = d.marginals(c.sizes)
    rep.details["probabilities"] = probs
    if target == "fractional":
        for (v, a), p in sorted(probs.items()):
            want = Fraction(1, c.size(v))
            if p != want:
                rep.add(f"colour {a} at vertex {v} has probability {p}, expected {want}")
    else:
        eps = target.eps if isinstance(target, EpsilonProfile) else {int(k): Fraction(x) for k, x in target.items()}
        for (v, a), p in sorted(probs.items()):
            if p < eps.get(v, 0):
                rep.add(f"colour {a} at vertex {v} has probability {p} < {eps[v]}")
    rep.details["min_probability"] = min(probs.values(), default=None)
    return rep


def check_packing(c: CorrespondenceCover, d: PackingDistribution, target="fractional", what="packing") -> PackingDistribution:
    rep = validate_packing(c, d, target)
    if not rep.ok:
        raise PackingError(f"{what} failed validation: {rep.violations[0]}")
    return d


def _check_budget(c: CorrespondenceCover) -> None:
    space = math.prod(c.sizes)
    if space > budget():
        raise BudgetExceeded(f"transversal space {space} exceeds budget {budget()}")


def transversal_array(c: CorrespondenceCover) -> np.ndarray:
    """All proper colourings, lexicographic, as a ``(count, n)`` array."""
    _check_budget(c)
    return _kernels.transversal_table(c.sizes, c.offsets(), c.conflict_matrix())


def enumerate_transversals(c: CorrespondenceCover) -> Iterator[tuple]:
    for row in transversal_array(c):
        yield tuple(int(a) for a in row)


def mix(parts: Sequence) -> PackingDistribution:
    """Convex combination of ``(weight, distribution)`` pairs."""
    parts = [(Fraction(w), d) for w, d in parts]
    if any(w < 0 for w, _ in parts):
        raise PackingError("mixing weights must be nonnegative")
    s = sum((w for w, _ in parts), Fraction(0))
    if s != 1:
        raise PackingError(f"mixing weights sum to {s}, not 1")
    acc = {}
    for w, d in parts:
        if not w:
            continue
        for col, x in d.weights.items():
            acc[col] = acc.get(col, Fraction(0)) + w * x
    return PackingDistribution(acc)


# -- LP oracle --------------------------------------------------------------------


def _int_sums(table: np.ndarray, Y: list, extra: int) -> np.ndarray:
    """``extra + sum(Y[table[j]])`` for every row, exactly."""
    bound = max((abs(y) for y in Y), default=0) * (table.shape[1] + 1) + abs(extra)
    if bound < _kernels.INT64_SAFE:
        arr = np.asarray(Y, dtype=np.int64)
        return arr[table].sum(axis=1) + extra
    arr = np.asarray(Y, dtype=object)
    return arr[table].sum(axis=1) + extra


def solve_packing_lp(c: CorrespondenceCover):
    """Exact feasibility of the fractional packing LP over all transversals.

    Rows: total weight 1, and for each colour ``x`` of ``v`` the weight of
    transversals through ``x`` minus a surplus equals ``1/|L(v)|``. Phase one
    of a rational simplex with smallest-index pivoting decides feasibility.
    Returns a ``PackingDistribution`` or an ``Infeasible`` certificate.
    """
    table = transversal_array(c)
    off = np.asarray(c.offsets(), dtype=np.int64)
    K = c.colour_count()
    if table.shape[0] == 0 or c.n == 0:
        if c.n == 0:
            return PackingDistribution.point(())
        # no transversal at all: a unit weight on the total row certifies it
        return Infeasible(Fraction(1), {(v, a): Fraction(0) for v in c.base.vertices for a in range(1, c.size(v) + 1)}, Fraction(1))
    ids = table - 1 + off[None, :]  # flattened colour ids per transversal
    rows_of = ids + 1  # row 0 is the total row
    colour_key = [(v, a) for v in c.base.vertices for a in range(1, c.size(v) + 1)]
    b = [Fraction(1)] + [Fraction(1, c.size(v)) for v, _ in colour_key]
    m = K + 1
    art = [("a", i) for i in range(m)]
    lp = RevisedSimplex(b, art, [1] * m, leaving="bland")
    N = table.shape[0]
    lp.register(("t", j) for j in range(N))
    lp.register(("s", x) for x in range(K))
    while True:
        y = lp.duals()
        Y, D = common_scale(y)
        # reduced cost of transversal j is -(y_0 + sum y_x), of surplus x is y_x
        sums = _int_sums(ids, Y[1:], Y[0])
        hits = np.flatnonzero(sums > 0)
        if hits.size:
            j = int(hits[0])
            col = {0: 1}
            for r in rows_of[j]:
                col[int(r)] = 1
            lp.enter(("t", j), col, 0)
            continue
        neg = [x for x in range(K) if Y[1 + x] < 0]
        if neg:
            x = neg[0]
            lp.enter(("s", x), {1 + x: -1}, 0)
            continue
        break
    if lp.objective() > 0:
        y = lp.duals()
        weights = {colour_key[x]: y[1 + x] for x in range(K)}
        value = sum((yy * bb for yy, bb in zip(y, b)), Fraction(0))
        return Infeasible(y[0], weights, value)
    acc = {}
    for key, x in lp.values().items():
        if key[0] == "t" and x:
            acc[tuple(int(a) for a in table[key[1]])] = x
    d = PackingDistribution(acc)
    return check_packing(c, d, what="LP solution")


def verify_infeasible(c: CorrespondenceCover, cert: Infeasible) -> Report:
    """Re-check an infeasibility certificate by enumerating transversals."""
    rep = Report()
    if any(w < 0 for w in cert.colour_weights.values()):
        rep.add("negative colour weight")
    value = cert.bound + sum(
        (w / c.size(v) for (v, _), w in cert.colour_weights.items()), Fraction(0)
    )
    rep.details["value"] = value
    if value != cert.value or value <= 0:
        rep.add(f"certificate value {value} is not positive or disagrees with {cert.value}")
    for col in enumerate_transversals(c):
        tot = cert.bound + sum((cert.colour_weights.get((v, a), 0) for v, a in enumerate(col, 1)), Fraction(0))
        if tot > 0:
            rep.add(f"transversal {col} has certificate weight {tot} > 0")
            break
    return rep


# -- composition tools --------------------------------------------------------------


def _windows(sizes: dict, keep: dict, mode: str) -> list:
    """Sublist choices for ``monotonicity_lift``.

    Returns ``(probability, {v: kept indices})`` pairs such that each colour of
    ``v`` is kept with probability exactly ``keep[v] / sizes[v]``.
    """
    verts = sorted(sizes)
    if not verts:
        return [(Fraction(1), {})]
    joint_count = math.prod(math.comb(sizes[v], keep[v]) for v in verts)
    period = math.lcm(*(sizes[v] for v in verts))
    if mode == "auto":
        mode = "joint" if joint_count <= JOINT_LIMIT or joint_count <= period else "cyclic"
    if mode == "joint":
        if joint_count > budget():
            raise BudgetExceeded(f"{joint_count} sublist choices exceed budget")
        per = [list(itertools.combinations(range(1, sizes[v] + 1), keep[v])) for v in verts]
        w = Fraction(1, joint_count)
        return [(w, dict(zip(verts, combo))) for combo in itertools.product(*per)]
    if mode == "cyclic":
        if period > budget():
            raise BudgetExceeded(f"cyclic period {period} exceeds budget")
        w = Fraction(1, period)
        out = []
        for j in range(period):
            out.append((w, {v: tuple(sorted((j + t) % sizes[v] + 1 for t in range(keep[v]))) for v in verts}))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def monotonicity_lift(c: CorrespondenceCover, target, oracle: Oracle, mode: str = "auto") -> PackingDistribution:
    """Packing of ``c`` from an oracle that only handles exact profile ``target``.

    Sublists of the prescribed sizes are drawn so that each colour survives
    with probability ``s(v)/|L(v)|``; the oracle's packing of each sub-cover
    is lifted back. ``mode`` is ``"joint"`` (all combinations independently),
    ``"cyclic"`` (one shared rotation of consecutive windows) or ``"auto"``.
    """
    target = list(target.values()) if isinstance(target, Mapping) else list(target)
    if len(target) != c.n:
        raise PackingError("profile must give one size per vertex")
    for v, s in enumerate(target, 1):
        if not 1 <= s <= c.size(v):
            raise PackingError(f"target size {s} at vertex {v} not in 1..{c.size(v)}")
    shrink = {v: c.size(v) for v in c.base.vertices if c.size(v) > target[v - 1]}
    if not shrink:
        return oracle(c)
    keep = {v: target[v - 1] for v in shrink}
    parts = []
    cache = {}
    for w, choice in _windows(shrink, keep, mode):
        key = tuple(choice[v] for v in sorted(choice))
        if key not in cache:
            removals = [(v, a) for v in shrink for a in range(1, c.size(v) + 1) if a not in choice[v]]
            sub, index_map = delete_colours(c, removals)
            inner = oracle(sub)
            cache[key] = inner.map(lambda col, m=index_map: lift_colouring(col, m))
        parts.append((w, cache[key]))
    return mix(parts)


def boundary_of(c: CorrespondenceCover, T: Iterable[int]) -> dict:
    """Map each vertex of ``T`` with a neighbour outside ``T`` to that neighbour."""
    T = set(T)
    out = {}
    for u in sorted(T):
        outside = sorted(set(c.base.neighbours(u)) - T)
        if len(outside) > 1:
            raise PackingError(f"vertex {u} has {len(outside)} neighbours outside the inner set")
        if outside:
            out[u] = outside[0]
    return out


def compose_packing(
    c: CorrespondenceCover,
    T: Iterable[int],
    outer: PackingDistribution,
    inner_oracle: Oracle,
    mode: str = "auto",
) -> PackingDistribution:
    """Extend a packing of ``G - T`` to ``G`` when each vertex of ``T`` has at
    most one neighbour outside ``T``.

    ``outer`` colours the restriction of ``c`` to ``V - T`` (relabelled in id
    order). For each outer colouring, each boundary vertex of ``T`` loses the
    colour matched to its outside neighbour's colour; when nothing is matched,
    a colour is removed at random instead. ``inner_oracle`` then packs the
    resulting cover of ``T`` (relabelled likewise).
    """
    T = sorted(set(T))
    Tset = set(T)
    R = [v for v in c.base.vertices if v not in Tset]
    bnd = boundary_of(c, T)
    for u, v in bnd.items():
        if not 2 <= c.size(u) <= c.size(v):
            raise PackingError(
                f"list sizes at {u} ({c.size(u)}) and its outside neighbour {v} ({c.size(v)}) break 2 <= |L(u)| <= |L(v)|"
            )
    # saturate the boundary matchings: every colour of L(u) gets a partner in L(v)
    full = maximise_matchings(c, [(u, v) for u, v in bnd.items()])
    inner_base = restrict_cover(full, T)
    T_index = {u: i for i, u in enumerate(T)}
    R_index = {v: i for i, v in enumerate(R)}
    cache = {}

    def inner_for(deleted: tuple) -> PackingDistribution:
        if deleted not in cache:
            removals = [(T_index[u] + 1, a) for u, a in zip(sorted(bnd), deleted)]
            sub, index_map = delete_colours(inner_base, removals)
            d = inner_oracle(sub)
            cache[deleted] = d.map(lambda col, m=index_map: lift_colouring(col, m))
        return cache[deleted]

    acc = {}
    bnd_vertices = sorted(bnd)
    for outer_col, w_out in outer.weights.items():
        if len(outer_col) != len(R):
            raise PackingError("outer colouring does not match the outer vertex count")
        forced = {}
        free = {}
        for u in bnd_vertices:
            v = bnd[u]
            hit = full.partner(v, outer_col[R_index[v]], u)
            if hit is None:
                free[u] = c.size(u)
            else:
                forced[u] = hit
        for w_sel, choice in _windows(free, {u: free[u] - 1 for u in free}, mode):
            deleted = []
            for u in bnd_vertices:
                if u in forced:
                    deleted.append(forced[u])
                else:
                    (gone,) = set(range(1, free[u] + 1)) - set(choice[u])
                    deleted.append(gone)
            inner = inner_for(tuple(deleted))
            for inner_col, w_in in inner.weights.items():
                col = [0] * c.n
                for v in R:
                    col[v - 1] = outer_col[R_index[v]]
                for u in T:
                    col[u - 1] = inner_col[T_index[u]]
                key = tuple(col)
                acc[key] = acc.get(key, Fraction(0)) + w_out * w_sel * w_in
    return check_packing(c, PackingDistribution(acc), what="composed packing")


def uniform_single_vertex(c: CorrespondenceCover) -> PackingDistribution:
    """Uniform over the list of the only vertex of ``c``."""
    if c.n != 1:
        raise PackingError("expected a one-vertex cover")
    return PackingDistribution.uniform([(a,) for a in range(1, c.size(1) + 1)])


def product_of(parts: Sequence, n: int) -> PackingDistribution:
    """Independent product of distributions on disjoint vertex groups.

    ``parts`` holds ``(vertices, distribution)`` with colourings indexed like
    ``sorted(vertices)``.
    """
    acc = {tuple([0] * n): Fraction(1)}
    for verts, d in parts:
        verts = sorted(verts)
        nxt = {}
        for base, w in acc.items():
            for col, x in d.weights.items():
                new = list(base)
                for v, a in zip(verts, col):
                    new[v - 1] = a
                key = tuple(new)
                nxt[key] = nxt.get(key, Fraction(0)) + w * x
        acc = nxt
    return PackingDistribution(acc)


def lp_oracle(c: CorrespondenceCover) -> PackingDistribution:
    """``solve_packing_lp`` as an oracle: infeasibility is an error."""
    res = solve_packing_lp(c)
    if isinstance(res, Infeasible):
        raise PackingError("cover admits no fractional packing")
    return res
