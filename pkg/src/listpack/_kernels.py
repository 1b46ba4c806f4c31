"""Inner loops shared by the numba and pure-Python paths.

Each kernel is written once in the subset of Python that numba can compile.
``use_numba()`` decides per call which variant runs; setting
``LISTPACK_NO_NUMBA=1`` selects the interpreted path, which also handles
inputs that do not fit the int64 fast path (more than 62 vertices, or weight
sums past 2**62).
"""
from types import SimpleNamespace

import numpy as np

from ._config import numba_disabled

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

INT64_SAFE = 2**62


def _build(jit):
    @jit
    def _lowest(mask):
        i = 0
        while ((mask >> i) & 1) == 0:
            i += 1
        return i

    @jit
    def _clique_cover_bound(P, adj, w):
        # vertices come sorted by decreasing weight: the lowest bit of a
        # set is its heaviest member and bounds the clique it starts
        total = 0
        Q = P
        while Q != 0:
            v = _lowest(Q)
            total += w[v]
            Q &= ~(1 << v)
            K = Q & adj[v]
            while K != 0:
                u = _lowest(K)
                Q &= ~(1 << u)
                K &= adj[u]
        return total

    @jit
    def _mwis_search(adj, w, floor, start, stack_p, stack_w, stack_m):
        best = floor
        best_mask = 0
        stack_p[0] = start
        stack_w[0] = 0
        stack_m[0] = 0
        top = 1
        while top > 0:
            top -= 1
            P = stack_p[top]
            cw = stack_w[top]
            cm = stack_m[top]
            if cw > best:
                best = cw
                best_mask = cm
            if P == 0:
                continue
            if cw + _clique_cover_bound(P, adj, w) <= best:
                continue
            v = _lowest(P)
            bit = 1 << v
            stack_p[top] = P & ~bit
            stack_w[top] = cw
            stack_m[top] = cm
            top += 1
            stack_p[top] = P & ~bit & ~adj[v]
            stack_w[top] = cw + w[v]
            stack_m[top] = cm | bit
            top += 1
        return best, best_mask

    @jit
    def _transversal_walk(sizes, offsets, conflict, out, fill):
        n = sizes.shape[0]
        choice = np.zeros(n, dtype=np.int64)
        choice[0] = -1
        v = 0
        found = 0
        while v >= 0:
            choice[v] += 1
            if choice[v] >= sizes[v]:
                v -= 1
                continue
            cv = offsets[v] + choice[v]
            ok = True
            for u in range(v):
                if conflict[offsets[u] + choice[u], cv]:
                    ok = False
                    break
            if not ok:
                continue
            if v == n - 1:
                if fill:
                    for j in range(n):
                        out[found, j] = choice[j] + 1
                found += 1
            else:
                v += 1
                choice[v] = -1
        return found

    return SimpleNamespace(
        lowest=_lowest,
        clique_cover_bound=_clique_cover_bound,
        mwis_search=_mwis_search,
        transversal_walk=_transversal_walk,
    )


PY = _build(lambda fn: fn)
_NB = None


def numba_kernels():
    """Jitted kernel namespace, compiled on first use."""
    global _NB
    if _NB is None:
        _NB = _build(numba.njit)
    return _NB


def use_numba() -> bool:
    return numba is not None and not numba_disabled()


def mwis_search(adj, w, floor, *, force_python=False):
    """Best independent set of weight strictly above ``floor``.

    ``adj`` holds neighbour bitmasks and ``w`` nonnegative integer weights,
    both indexed by vertices sorted by decreasing weight. Returns
    ``(weight, mask)``; ``mask == 0`` with ``weight == floor`` means no set
    beats the floor.
    """
    n = len(w)
    start = (1 << n) - 1
    fast = (
        not force_python
        and use_numba()
        and n <= 62
        and sum(w) < INT64_SAFE
        and abs(floor) < INT64_SAFE
    )
    if fast:
        kernel = numba_kernels().mwis_search
        size = 2 * n + 4
        best, mask = kernel(
            np.asarray(adj, dtype=np.int64),
            np.asarray(w, dtype=np.int64),
            np.int64(floor),
            np.int64(start),
            np.zeros(size, dtype=np.int64),
            np.zeros(size, dtype=np.int64),
            np.zeros(size, dtype=np.int64),
        )
        return int(best), int(mask)
    size = 2 * n + 4
    return PY.mwis_search(list(adj), list(w), floor, start, [0] * size, [0] * size, [0] * size)


def transversal_table(sizes, offsets, conflict, *, force_python=False):
    """All proper colourings as an ``(count, n)`` int64 array of 1-based indices.

    Rows come out in lexicographic order. ``conflict`` is a boolean matrix over
    flattened colour ids (``offsets[v] + index - 1``).
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    conflict = np.asarray(conflict, dtype=np.bool_)
    n = sizes.shape[0]
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if use_numba() and not force_python:
        kernel = numba_kernels().transversal_walk
    else:
        kernel = PY.transversal_walk
    empty = np.zeros((0, n), dtype=np.int64)
    count = kernel(sizes, offsets, conflict, empty, False)
    out = np.zeros((count, n), dtype=np.int64)
    if count:
        kernel(sizes, offsets, conflict, out, True)
    return out
