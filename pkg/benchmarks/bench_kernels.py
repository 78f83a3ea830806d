#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths (all-pairs scores, CSR link scoring) on synthetic
data of benchmark-dataset scale and checks numerical agreement.

Usage:
    python benchmarks/bench_kernels.py [--instances N] [--features F] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from legclf import kernels
from legclf.graph import build_mileg
from legclf.similarity import rank_neighbors


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_pairwise(X, repeats):
    print(f"\npairwise scores ({X.shape[0]} x {X.shape[1]}):")
    print(f"  {'metric':<11} {'numpy':>9} {'numba':>9} {'speedup':>8}  max|diff|")
    for metric in ("euclidean", "manhattan", "cosine"):
        t_np, a = timeit(lambda: kernels.pairwise_scores(X, metric, backend="numpy"), repeats)
        t_nb, b = timeit(lambda: kernels.pairwise_scores(X, metric, backend="numba"), repeats)
        diff = float(np.abs(a - b).max())
        print(f"  {metric:<11} {t_np*1e3:>7.1f}ms {t_nb*1e3:>7.1f}ms {t_np/t_nb:>7.2f}x  {diff:.2e}")


def bench_link_scores(X, labels, repeats):
    n = X.shape[0] - 50
    graph = build_mileg(X[:n], labels[:n], X[n:], "euclidean", 20)
    indptr, indices = graph._csr
    w = 1.0 / np.maximum(graph.degrees.astype(float), 1.0)
    args = (indptr, indices, w, graph.test_ids, graph.class_ids)
    print(f"\nlink scores ({graph.num_test} test x {graph.num_class_nodes} class nodes, "
          f"{indices.size // 2} edges):")
    t_np, a = timeit(lambda: kernels.link_scores(*args, backend="numpy"), repeats)
    t_nb, b = timeit(lambda: kernels.link_scores(*args, backend="numba"), repeats)
    diff = float(np.abs(a - b).max())
    print(f"  {'csr sweep':<11} {t_np*1e3:>7.1f}ms {t_nb*1e3:>7.1f}ms {t_np/t_nb:>7.2f}x  {diff:.2e}")


def bench_end_to_end(X, repeats):
    print(f"\nneighbor ranking ({X.shape[0]} instances, auto backend = "
          f"{kernels.active_backend('pairwise', X.shape[0] ** 2 * X.shape[1])}):")
    t, _ = timeit(lambda: rank_neighbors(X, "manhattan", limit=45), repeats)
    print(f"  {t*1e3:.1f}ms per (similarity, fold) ranking")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=1500)
    parser.add_argument("--features", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.random((args.instances, args.features))
    labels = (rng.random((args.instances, 6)) < 0.3).astype(np.uint8)

    print("warming up JIT...", flush=True)
    kernels.pairwise_scores(X[:10], "euclidean", backend="numba")
    kernels.pairwise_scores(X[:10], "manhattan", backend="numba")
    kernels.pairwise_scores(X[:10], "cosine", backend="numba")

    bench_pairwise(X, args.repeats)
    bench_link_scores(X, labels, args.repeats)
    bench_end_to_end(X, args.repeats)


if __name__ == "__main__":
    main()
