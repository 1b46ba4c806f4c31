"""Exact fractional chromatic number with self-checking certificates.

The covering LP ``min sum x_S  s.t.  sum_{S ni v} x_S >= 1`` over independent
sets ``S`` is solved by a rational revised simplex. Columns are priced by an
exact maximum-weight independent set search on the integer-scaled duals.
The returned primal and dual are re-verified with a separate, simpler
independent-set search before they are handed out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import _kernels
from ._config import BudgetExceeded
from .cover import CorrespondenceCover, cover_graph
from .graph import Graph
from .lp import RevisedSimplex, common_scale
from .report import Report

MAX_VERTICES = 64
POOL_VERTICES = 20


class CertificateError(RuntimeError):
    pass


@dataclass(frozen=True)
class FractionalColouring:
    sets: tuple  # of (frozenset of vertices, Fraction)

    def __post_init__(self):
        object.__setattr__(
            self, "sets", tuple((frozenset(s), Fraction(w)) for s, w in self.sets)
        )

    @property
    def value(self) -> Fraction:
        return sum((w for _, w in self.sets), Fraction(0))


@dataclass(frozen=True)
class DualWitness:
    vertex_weights: dict

    def __post_init__(self):
        object.__setattr__(
            self, "vertex_weights", {int(v): Fraction(w) for v, w in self.vertex_weights.items()}
        )

    @property
    def value(self) -> Fraction:
        return sum(self.vertex_weights.values(), Fraction(0))


def _weights_list(g: Graph, w) -> list:
    if isinstance(w, Mapping):
        return [Fraction(w.get(v, 0)) for v in g.vertices]
    return [Fraction(x) for x in w]


def max_weight_independent_set(g: Graph, w) -> tuple:
    """Exact maximum-weight independent set by branch and bound.

    ``w`` is a map or a sequence indexed by ``v - 1``. Returns
    ``(sorted vertex tuple, weight)``.
    """
    weights = _weights_list(g, w)
    if any(x < 0 for x in weights):
        raise ValueError("weights must be nonnegative")
    scaled, D = common_scale(weights)
    live = [v for v in g.vertices if scaled[v - 1] > 0]
    live.sort(key=lambda v: (-scaled[v - 1], v))
    if not live:
        return (), Fraction(0)
    index = {v: i for i, v in enumerate(live)}
    adj = []
    for v in live:
        m = 0
        for u in g.neighbours(v):
            if u in index:
                m |= 1 << index[u]
        adj.append(m)
    best, mask = _kernels.mwis_search(adj, [scaled[v - 1] for v in live], -1)
    chosen = tuple(sorted(live[i] for i in range(len(live)) if mask >> i & 1))
    return chosen, Fraction(best, D)


def reference_max_weight(g: Graph, w) -> Fraction:
    """Maximum independent-set weight by plain memoised branching.

    Written separately from the pricing search so that certificate checks
    do not rely on it.
    """
    weights = _weights_list(g, w)
    scaled, D = common_scale(weights)
    masks = g.bitmasks()
    n = g.vertex_count
    memo = {}

    def best(P: int) -> int:
        if P == 0:
            return 0
        if P in memo:
            return memo[P]
        top, deg = -1, -1
        total = 0
        m = P
        while m:
            b = m & -m
            m ^= b
            i = b.bit_length() - 1
            total += scaled[i]
            dd = bin(masks[i] & P).count("1")
            if dd > deg:
                top, deg = i, dd
        if deg == 0:
            res = total
        else:
            res = max(best(P & ~(1 << top)), scaled[top] + best(P & ~(1 << top) & ~masks[top]))
        memo[P] = res
        return res

    return Fraction(best((1 << n) - 1), D)


def _maximal_sets(g: Graph) -> list:
    """All maximal independent sets as bitmasks (Bron-Kerbosch on the complement)."""
    n = g.vertex_count
    masks = g.bitmasks()
    full = (1 << n) - 1
    non = [full & ~masks[i] & ~(1 << i) for i in range(n)]
    out = []

    def bk(R, P, X):
        if not P and not X:
            out.append(R)
            return
        piv_pool = P | X
        pivot = max(
            (i for i in range(n) if piv_pool >> i & 1), key=lambda i: bin(P & non[i]).count("1")
        )
        cand = P & ~non[pivot]
        while cand:
            b = cand & -cand
            cand ^= b
            i = b.bit_length() - 1
            bk(R | b, P & non[i], X & non[i])
            P &= ~b
            X |= b

    bk(0, full, 0)
    return out


def _extend(mask: int, masks: list, n: int) -> int:
    for i in range(n):
        if not mask >> i & 1 and not masks[i] & mask:
            mask |= 1 << i
    return mask


def _set_of(mask: int) -> frozenset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def fractional_chromatic_number(g: Graph, *, use_pool: Optional[bool] = None) -> tuple:
    """Return ``(value, FractionalColouring, DualWitness)``; both certificates are re-verified."""
    n = g.vertex_count
    if n > MAX_VERTICES:
        raise BudgetExceeded(f"fractional chromatic number limited to {MAX_VERTICES} vertices")
    if n == 0:
        return Fraction(0), FractionalColouring(()), DualWitness({})
    masks = g.bitmasks()
    use_pool = n <= POOL_VERTICES if use_pool is None else use_pool
    pool = _maximal_sets(g) if use_pool else None
    initial = [("S", 1 << i) for i in range(n)]
    lp = RevisedSimplex([1] * n, initial, [1] * n, leaving="lex")
    while True:
        y = lp.duals()
        neg = [i for i in range(n) if y[i] < 0]
        if neg:
            lp.enter(("s", neg[0]), {neg[0]: -1}, 0)
            continue
        mask = 0
        if pool is not None:
            best = Fraction(1)
            for m in pool:
                s = sum((y[i] for i in range(n) if m >> i & 1), Fraction(0))
                if s > best:
                    best, mask = s, m
        else:
            Y, D = common_scale(y)
            live = sorted((i for i in range(n) if Y[i] > 0), key=lambda i: (-Y[i], i))
            index = {v: j for j, v in enumerate(live)}
            adj = []
            for i in live:
                a = 0
                m = masks[i]
                while m:
                    b = m & -m
                    m ^= b
                    j = b.bit_length() - 1
                    if j in index:
                        a |= 1 << index[j]
                adj.append(a)
            _, found = _kernels.mwis_search(adj, [Y[i] for i in live], D)
            for j, i in enumerate(live):
                if found >> j & 1:
                    mask |= 1 << i
        if not mask:
            break
        mask = _extend(mask, masks, n)
        key = ("S", mask)
        if key in lp.basis:
            raise CertificateError("priced column is already basic")
        lp.enter(key, {i: 1 for i in range(n) if mask >> i & 1}, 1)
    value = lp.objective()
    primal = FractionalColouring(
        tuple((_set_of(k[1]), x) for k, x in zip(lp.basis, lp.xB) if k[0] == "S" and x)
    )
    y = lp.duals()
    dual = DualWitness({i + 1: y[i] for i in range(n)})
    rep = verify_certificates(g, primal, dual)
    if not rep.ok or rep.details["primal_value"] != value or rep.details["dual_value"] != value:
        raise CertificateError(f"certificates do not confirm {value}: {rep}")
    return value, primal, dual


def verify_certificates(g: Graph, p: FractionalColouring, d: DualWitness) -> Report:
    """Check both certificates from scratch; report their values."""
    rep = Report()
    cover = {v: Fraction(0) for v in g.vertices}
    for s, w in p.sets:
        if w < 0:
            rep.add(f"negative weight {w} on set {sorted(s)}")
        bad = [v for v in s if v not in cover]
        if bad:
            rep.add(f"set {sorted(s)} contains non-vertices {bad}")
            continue
        if not g.is_independent(s):
            rep.add(f"set {sorted(s)} is not independent")
        for v in s:
            cover[v] += w
    for v, tot in cover.items():
        if tot < 1:
            rep.add(f"vertex {v} is covered with weight {tot} < 1")
    extra = [v for v in d.vertex_weights if v not in cover]
    if extra:
        rep.add(f"dual weights on non-vertices {extra}")
    if any(w < 0 for w in d.vertex_weights.values()):
        rep.add("negative dual weight")
    else:
        heaviest = reference_max_weight(g, d.vertex_weights)
        rep.details["dual_max_set_weight"] = heaviest
        if heaviest > 1:
            rep.add(f"an independent set has dual weight {heaviest} > 1")
    rep.details["primal_value"] = p.value
    rep.details["dual_value"] = d.value
    if rep.ok and d.value > p.value:
        rep.add(f"dual value {d.value} exceeds primal value {p.value}")
    return rep


def packing_lower_bound(c: CorrespondenceCover, k: int) -> tuple:
    """``(chi_f(H) > k, DualWitness)`` for the cover graph ``H`` of ``c``."""
    h = cover_graph(c)
    value, _, dual = fractional_chromatic_number(h)
    return value > k, dual


def format_value(x: Fraction) -> str:
    """Integer part plus proper fraction, e.g. ``4+1/2092``."""
    x = Fraction(x)
    whole = x.numerator // x.denominator
    rest = x - whole
    if not rest:
        return str(whole)
    return f"{whole}+{rest.numerator}/{rest.denominator}"
