"""Benchmark: numba kernels vs the pure-numpy fallback.

Runs the two hot kernels (row scoring, k-means assignment) on identical
inputs through both backends and reports wall times. The numba path is the
default at import; AGENTKIT_PURE_NUMPY=1 switches the library to the numpy
fallback. Both implementations are invoked directly here, so one process
compares both regardless of the flag.

Usage: python benchmarks/bench_kernels.py [--n 100000] [--dim 256] [--clusters 64]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from agentkit.vexidx._kernels import (
    _assign_clusters_numba,
    _score_all_numba,
    assign_clusters_numpy,
    score_all_numpy,
)


def timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--clusters", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    matrix = rng.standard_normal((args.n, args.dim)).astype(np.float32)
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    query = rng.standard_normal(args.dim).astype(np.float32)
    query /= np.linalg.norm(query)
    centroids = rng.standard_normal((args.clusters, args.dim))

    print(f"n={args.n} dim={args.dim} clusters={args.clusters} repeats={args.repeats}")
    print(f"{'kernel':<24}{'backend':<10}{'best (ms)':>12}{'rows/s':>16}")

    rows = []
    rows.append(("score_all", "numpy", timeit(lambda: score_all_numpy(matrix, query), args.repeats)))
    if _score_all_numba is not None:
        _score_all_numba(matrix[:64], query)  # trigger compilation outside timing
        rows.append(
            ("score_all", "numba", timeit(lambda: _score_all_numba(matrix, query), args.repeats))
        )
    rows.append(
        (
            "assign_clusters",
            "numpy",
            timeit(lambda: assign_clusters_numpy(matrix, centroids), args.repeats),
        )
    )
    if _assign_clusters_numba is not None:
        _assign_clusters_numba(matrix[:64], centroids)
        rows.append(
            (
                "assign_clusters",
                "numba",
                timeit(lambda: _assign_clusters_numba(matrix, centroids), args.repeats),
            )
        )

    for kernel, backend_name, best in rows:
        print(f"{kernel:<24}{backend_name:<10}{best * 1e3:>12.2f}{args.n / best:>16.0f}")

    if _score_all_numba is None:
        print("\nnumba unavailable or disabled (AGENTKIT_PURE_NUMPY); numpy rows only")
    else:
        s_np = next(r[2] for r in rows if r[:2] == ("score_all", "numpy"))
        s_nb = next(r[2] for r in rows if r[:2] == ("score_all", "numba"))
        a_np = next(r[2] for r in rows if r[:2] == ("assign_clusters", "numpy"))
        a_nb = next(r[2] for r in rows if r[:2] == ("assign_clusters", "numba"))
        print(
            f"\nnumba vs numpy: score_all x{s_np / s_nb:.2f}, "
            f"assign_clusters x{a_np / a_nb:.2f} (>1 means numba faster)"
        )

        same_scores = np.array_equal(
            score_all_numpy(matrix, query), _score_all_numba(matrix, query)
        )
        a1, _ = assign_clusters_numpy(matrix, centroids)
        a2, _ = _assign_clusters_numba(matrix, centroids)
        print(f"backends agree: scores={same_scores}, assignments={np.array_equal(a1, a2)}")


if __name__ == "__main__":
    main()
