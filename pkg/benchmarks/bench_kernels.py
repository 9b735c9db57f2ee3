"""Compare the compiled and pure-Python kernels on identical workloads.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each workload
is timed under both backends and the results are checked for equality.
"""

import argparse
import random
import time

from frobkit import kernels
from frobkit.pushforward import frobenius_pushforward
from frobkit.resolution import minimal_free_resolution
from frobkit.rings import make_quotient_ring

def resolve_golod_pushforward():
    S = make_quotient_ring(2, ["x", "y", "z"], ["x^2", "x*y", "y*z^2"])
    return minimal_free_resolution(frobenius_pushforward(S, 1), 8).ranks()

def dense_elimination(n=160, p=32003, seed=1):
    rng = random.Random(seed)
    rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
    pivots = kernels.rref_mod_p(rows, n, p)
    return len(pivots), rows[0][:4]

WORKLOADS = [("resolution of F_*S, Golod S", resolve_golod_pushforward),
             ("dense rref 160x160 mod 32003", dense_elimination)]

def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        kernels.use_backend("cython")
    except ImportError:
        print("compiled kernels are not built; only the Python backend is available")
        return
    print(f"{'workload':34} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for name, fn in WORKLOADS:
        best, results = {}, {}
        for backend in ("python", "cython"):
            kernels.use_backend(backend)
            times = []
            for _ in range(args.repeat):
                t = time.perf_counter()
                results[backend] = fn()
                times.append(time.perf_counter() - t)
            best[backend] = min(times)
        assert results["python"] == results["cython"], name
        print(f"{name:34} {best['python']:9.3f} {best['cython']:9.3f} "
              f"{best['python'] / best['cython']:7.1f}x")

if __name__ == "__main__":
    main()
