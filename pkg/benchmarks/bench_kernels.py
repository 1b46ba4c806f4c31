"""Time the jitted kernels against their interpreted twins.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths are run on the same inputs and their outputs compared before any
timing is reported.
"""
import argparse
import random
import time

import numpy as np

from listpack import _kernels
from listpack.cover import random_cover
from listpack.fixtures import build_appendix_b, random_graph


def mwis_case(g, rng):
    w = [rng.randint(1, 50) for _ in g.vertices]
    order = sorted(g.vertices, key=lambda v: (-w[v - 1], v))
    index = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        m = 0
        for u in g.neighbours(v):
            m |= 1 << index[u]
        adj.append(m)
    return adj, [w[v - 1] for v in order]


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    if not _kernels.use_numba():
        print("numba disabled (LISTPACK_NO_NUMBA set or numba missing); nothing to compare")
        return
    _kernels.numba_kernels()

    cases = []
    h, _ = build_appendix_b()
    cases.append(("mwis appendix graph (45)", *mwis_case(h, rng)))
    for n in (30, 40):
        cases.append((f"mwis G({n}, 0.2)", *mwis_case(random_graph(n, 0.2, rng), rng)))
    print(f"{'case':34s} {'numba s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name, adj, w in cases:
        _kernels.mwis_search(adj, w, -1)  # warm the jit
        tn, rn = timed(lambda: _kernels.mwis_search(adj, w, -1), args.repeat)
        tp, rp = timed(lambda: _kernels.mwis_search(adj, w, -1, force_python=True), args.repeat)
        assert rn[0] == rp[0], (name, rn, rp)
        print(f"{name:34s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f}")

    for n, k in ((7, 4), (8, 4)):
        c = random_cover(random_graph(n, 0.5, rng), k, rng, full=True)
        args_t = (c.sizes, c.offsets(), c.conflict_matrix())
        _kernels.transversal_table(*args_t)
        tn, an = timed(lambda: _kernels.transversal_table(*args_t), args.repeat)
        tp, ap_ = timed(lambda: _kernels.transversal_table(*args_t, force_python=True), args.repeat)
        assert np.array_equal(an, ap_)
        name = f"transversals n={n} k={k} ({len(an)} rows)"
        print(f"{name:34s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f}")


if __name__ == "__main__":
    main()
