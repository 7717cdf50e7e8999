"""Time the numba kernels against their numpy/scipy counterparts.

    python3 benchmarks/bench_kernels.py [--nodes 20000] [--attach 4] [--repeat 3]

Each kernel runs once untimed (JIT warm-up) and then ``--repeat`` times; the
best time is reported.  Results of both paths are checked for equality.
"""
import argparse
import time

import numpy as np

from mirrorbench import kernels
from mirrorbench.synth import make_power_law

KERNELS = ("edge_support", "cycle4_count", "clique4_count", "bfs_distances", "shell_sizes")


def best_of(fn, repeat):
    out = fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=20000)
    ap.add_argument("--attach", type=int, default=4)
    ap.add_argument("--sources", type=int, default=200, help="BFS sources for shell_sizes")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    g = make_power_law(args.nodes, args.attach, 0)
    ip, ix = g.indptr, g.indices
    sources = np.arange(min(args.sources, g.n), dtype=np.int64)
    call_args = {
        "edge_support": (ip, ix),
        "cycle4_count": (ip, ix),
        "clique4_count": (ip, ix),
        "bfs_distances": (ip, ix, 0),
        "shell_sizes": (ip, ix, sources),
    }
    print(f"graph: n={g.n} m={g.m}")
    print(f"{'kernel':<16}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for name in KERNELS:
        a = call_args[name]
        t_nb, r_nb = best_of(lambda: getattr(kernels, name + "_nb")(*a), args.repeat)
        t_np, r_np = best_of(lambda: getattr(kernels, name + "_np")(*a), args.repeat)
        print(f"{name:<16}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x  {same(r_nb, r_np)}")


if __name__ == "__main__":
    main()
