"""Compare the compiled and pure-Python kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]
"""

import argparse
import itertools
import time

import numpy as np

from ppzcsp import kernels
from ppzcsp.generators import GenSpec, uniform_random
from ppzcsp.solver import block_randomness


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def bench_batch(F, trials, repeat):
    flat = kernels.flatten(F)
    perms, uniforms = block_randomness(0, 0, trials, F.n)
    out = {}
    for name in sorted(kernels.BACKENDS):
        t, (ok, _) = best_of(lambda: kernels.ppz_batch(flat, perms, uniforms, backend=name), repeat)
        out[name] = (t, int(ok.sum()))
    return out


def bench_dfs(F, repeat):
    flat = kernels.flatten(F)
    perms = [np.array(p, dtype=np.int64) for p in itertools.permutations(range(F.n))]
    out = {}
    for name in sorted(kernels.BACKENDS):
        t, total = best_of(lambda: sum(kernels.branch_success(flat, p, backend=name) for p in perms), repeat)
        out[name] = (t, total / len(perms))
    return out


def report(title, results, unit):
    print(title)
    base = results.get("python", (None,))[0]
    for name, (t, value) in results.items():
        speed = f"  x{base / t:.1f}" if base and name != "python" else ""
        print(f"  {name:7s} {t * 1e3:9.2f} ms  {unit}={value}{speed}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(sorted(kernels.BACKENDS))}")
    F = uniform_random(GenSpec(3, 3, 12, 40, seed=1))
    report(f"ppz batch, n=12, m=40, {args.trials} trials", bench_batch(F, args.trials, args.repeat), "successes")
    G = uniform_random(GenSpec(3, 3, 6, 14, seed=2))
    report("exact branch DFS, n=6, all 720 orders", bench_dfs(G, args.repeat), "p")


if __name__ == "__main__":
    main()
