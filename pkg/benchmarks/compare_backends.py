#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-numpy fallback.

Times the two hot paths (coupling measurement and full selection) on seeded
instances under every built backend and prints one row per (operation, size).

Usage: python benchmarks/compare_backends.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from mobcover import (
    EmbeddingSet,
    Metric,
    PruneConfig,
    available_backends,
    coupling,
    mob_prune,
    use_backend,
)


def best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def instance(n, L, d, seed=99):
    rng = np.random.Generator(np.random.PCG64(seed))
    return (
        EmbeddingSet(rng.normal(size=(n, d))),
        EmbeddingSet(rng.normal(size=(L, d))),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'operation':<28}{'size':<20}" + "".join(f"{b:>14}" for b in backends)
    print(header)
    print("-" * len(header))

    cases = [(2048, 16, 256), (8192, 16, 256), (16384, 16, 256)]
    for n, L, d in cases:
        v, p = instance(n, L, d)
        times = {}
        for b in backends:
            with use_backend(b):
                times[b] = best_of(
                    lambda: coupling(v, p, Metric.NORMALIZED_EUCLIDEAN), args.repeats
                )
        row = f"{'coupling':<28}{f'N={n} L={L} d={d}':<20}"
        print(row + "".join(f"{times[b] * 1e3:>12.2f}ms" for b in backends))

    for n, L, d in cases:
        v, p = instance(n, L, d)
        cfg = PruneConfig(budget_K=128, budget_Kp=64, fold_k=4)
        times = {}
        for b in backends:
            with use_backend(b):
                times[b] = best_of(lambda: mob_prune(v, p, cfg), args.repeats)
        row = f"{'mob_prune (K=128)':<28}{f'N={n} L={L} d={d}':<20}"
        print(row + "".join(f"{times[b] * 1e3:>12.2f}ms" for b in backends))


if __name__ == "__main__":
    main()
