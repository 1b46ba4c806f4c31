"""Exact rational revised simplex for ``min c.x  s.t.  A x = b, x >= 0``.

The engine keeps an explicit basis inverse in ``Fraction`` arithmetic and
never looks at the whole constraint matrix: callers price columns themselves
(from an explicit list or from an oracle) and hand the entering column over.
The starting basis must be the identity, which both users of this module
have for free (artificial variables, or singleton independent sets).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence


class Unbounded(RuntimeError):
    pass


def common_scale(values: Sequence[Fraction]) -> tuple:
    """Integers ``Y`` and ``D > 0`` with ``values[i] == Y[i] / D``."""
    d = 1
    for x in values:
        d = math.lcm(d, Fraction(x).denominator)
    return [int(Fraction(x) * d) for x in values], d


class RevisedSimplex:
    """Basis bookkeeping for one LP with ``m`` equality rows.

    ``leaving`` selects the ratio-test tie-break: ``"bland"`` (smallest basic
    key) or ``"lex"`` (lexicographic rule on ``[x_B | B^-1]``, which cannot
    cycle whatever the entering rule).
    """

    def __init__(self, b: Sequence, initial: Sequence[Hashable], costs: Sequence, leaving: str = "bland"):
        m = len(b)
        if len(initial) != m or len(costs) != m:
            raise ValueError("identity basis needs one key and cost per row")
        if any(Fraction(x) < 0 for x in b):
            raise ValueError("right-hand side must be nonnegative")
        if leaving not in ("bland", "lex"):
            raise ValueError(f"unknown leaving rule {leaving!r}")
        self.m = m
        self.leaving = leaving
        self.basis = list(initial)
        self.cost = {k: Fraction(c) for k, c in zip(initial, costs)}
        self.xB = [Fraction(x) for x in b]
        one, zero = Fraction(1), Fraction(0)
        self.Binv = [[one if i == j else zero for j in range(m)] for i in range(m)]
        self.order = {k: i for i, k in enumerate(initial)}
        self.pivots = 0

    def duals(self) -> list:
        y = [Fraction(0)] * self.m
        for i, k in enumerate(self.basis):
            c = self.cost[k]
            if c:
                row = self.Binv[i]
                for j in range(self.m):
                    if row[j]:
                        y[j] += c * row[j]
        return y

    def objective(self) -> Fraction:
        return sum((self.cost[k] * x for k, x in zip(self.basis, self.xB)), Fraction(0))

    def reduced_cost(self, column: Mapping[int, Fraction], cost, y: Optional[list] = None) -> Fraction:
        y = self.duals() if y is None else y
        return Fraction(cost) - sum((y[r] * v for r, v in column.items()), Fraction(0))

    def values(self) -> dict:
        return {k: x for k, x in zip(self.basis, self.xB)}

    def register(self, keys: Iterable[Hashable]) -> None:
        """Fix the variable order used by the smallest-index tie-break."""
        for k in keys:
            self._key_rank(k)

    def _key_rank(self, k):
        return self.order.setdefault(k, len(self.order))

    def enter(self, key: Hashable, column: Mapping[int, Fraction], cost) -> Hashable:
        """Pivot ``key`` into the basis; returns the key that left."""
        m = self.m
        d = [Fraction(0)] * m
        for r, v in column.items():
            if v:
                v = Fraction(v)
                for i in range(m):
                    a = self.Binv[i][r]
                    if a:
                        d[i] += a * v
        rows = [i for i in range(m) if d[i] > 0]
        if not rows:
            raise Unbounded(f"column {key!r} is an unbounded direction")
        if self.leaving == "bland":
            best = min(rows, key=lambda i: (self.xB[i] / d[i], self._key_rank(self.basis[i])))
        else:
            best = rows[0]
            for i in rows[1:]:
                if self._lex_less(i, d[i], best, d[best]):
                    best = i
        self._pivot(best, d)
        left = self.basis[best]
        self.basis[best] = key
        self.cost[key] = Fraction(cost)
        self._key_rank(key)
        self.pivots += 1
        return left

    def _lex_less(self, i, di, j, dj) -> bool:
        a = self.xB[i] / di
        b = self.xB[j] / dj
        if a != b:
            return a < b
        ri, rj = self.Binv[i], self.Binv[j]
        for t in range(self.m):
            a = ri[t] / di
            b = rj[t] / dj
            if a != b:
                return a < b
        return False  # identical rows cannot happen for a nonsingular basis

    def _pivot(self, r: int, d: list) -> None:
        piv = d[r]
        row = [x / piv for x in self.Binv[r]]
        xr = self.xB[r] / piv
        self.Binv[r] = row
        self.xB[r] = xr
        nz = [t for t in range(self.m) if row[t]]
        for i in range(self.m):
            f = d[i]
            if i == r or not f:
                continue
            bi = self.Binv[i]
            for t in nz:
                bi[t] -= f * row[t]
            self.xB[i] -= f * xr

