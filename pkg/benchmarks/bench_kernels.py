"""Time every kernel under each available backend (compiled and pure Python).

    python3 benchmarks/bench_kernels.py [--n 2048] [--repeat 3]

Outputs are checked for equality across backends before timings are printed.
"""
import argparse
import time

import numpy as np

from hopsets._kernels import available_backends
from hopsets.graph import gen_spined_dag, randomize_weights, topological_order
from hopsets.boolmat import BoolMat


def cases(n, seed):
    g = randomize_weights(gen_spined_dag(n, 8 * n, seed), 100, seed)
    s0 = int(topological_order(g)[0])  # head of the spine reaches every vertex
    fwd = g.csr("fwd")
    sources = list(range(0, n, max(1, n // 32)))
    dim = min(n, 512)
    rng = np.random.default_rng(seed)
    a = BoolMat.from_dense(rng.random((dim, dim)) < 0.05).bits
    bound = np.full(n, 10**9, dtype=np.int64)
    # forward and backward distance rows for an annulus scan over 16 radii
    df = rng.integers(0, 2000, size=(8, n))
    db = rng.integers(0, 2000, size=(8, n))
    radii = np.arange(0, 2000, 100, dtype=np.int64)
    lo = np.full(8, 2, dtype=np.int64)
    return {
        "bfs": lambda k, p: k.bfs(p["ptr"], p["idx"], s0, -1),
        "dijkstra": lambda k, p: k.dijkstra(p["ptr"], p["idx"], p["w"], s0, 10**12),
        "dijkstra_many": lambda k, p: k.dijkstra_many(p["ptr"], p["idx"], p["w"], sources, 10**12),
        "dijkstra_rows": lambda k, p: k.dijkstra_rows(p["ptr"], p["idx"], p["w"], np.asarray(sources),
                                                      np.full(len(sources), 500, dtype=np.int64)),
        "trunc_many(y=16)": lambda k, p: k.trunc_many(p["ptr"], p["idx"], p["w"], list(range(n)), 16),
        "bf_hops(h=8)": lambda k, p: k.bf_hops(p["ptr"], p["idx"], p["w"], s0, 8),
        "hops_within": lambda k, p: k.hops_within(p["ptr"], p["idx"], p["w"], s0, bound, n),
        "dial": lambda k, p: k.dial(p["ptr"], p["idx"], p["w"], s0, 10**6),
        "annulus_select": lambda k, p: k.annulus_select(df, db, lo, 16, radii, 1),
        f"bool_matmul(dim={dim})": lambda k, p: k.bool_matmul(a, a),
    }, fwd


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    backends = available_backends()
    table, (ptr, idx, w) = cases(args.n, args.seed)
    prepared = {name: dict(ptr=k.prepare(ptr), idx=k.prepare(idx), w=k.prepare(w)) for name, k in backends.items()}
    names = list(backends)
    print(f"n={args.n}  backends={','.join(names)}  best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{nm:>12}" for nm in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in table.items():
        times, outs = [], []
        for nm in names:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = fn(backends[nm], prepared[nm])
                best = min(best, time.perf_counter() - t0)
            times.append(best)
            outs.append(out)
        agree = all(_same(outs[0], o) for o in outs[1:])
        line = f"{label:<22}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if "python" in names and "cython" in names:
            line += f"   {times[names.index('python')] / times[names.index('cython')]:7.1f}x"
        if not agree:
            line += "   OUTPUT MISMATCH"
        print(line)


if __name__ == "__main__":
    main()
