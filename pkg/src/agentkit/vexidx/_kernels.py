"""Hot numeric kernels for index search and clustering.

Two implementations of each kernel: a numba @njit loop and a pure-numpy
vectorized path. The numba path is used when numba imports cleanly unless
AGENTKIT_PURE_NUMPY is set to 1/true/yes. Scores accumulate in float64 and
are compared at float32, which keeps the two paths' rankings in agreement;
fastmath stays off so the accumulation order is fixed.

Both `score_all` variants return one float32 dot product per matrix row.
Both `assign_clusters` variants return (assignment, squared distance to the
assigned centroid); ties go to the lowest cluster index in both paths.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("AGENTKIT_PURE_NUMPY", "").strip().lower()
_PURE_NUMPY = _FLAG in ("1", "true", "yes")

_score_all_numba = None
_assign_clusters_numba = None

if not _PURE_NUMPY:
    try:
        from numba import njit

        @njit(cache=True)
        def _score_all_numba(matrix, query):  # noqa: F811
            n, d = matrix.shape
            out = np.empty(n, dtype=np.float32)
            for i in range(n):
                acc = 0.0
                for j in range(d):
                    acc += np.float64(matrix[i, j]) * np.float64(query[j])
                out[i] = acc
            return out

        @njit(cache=True)
        def _assign_clusters_numba(matrix, centroids):  # noqa: F811
            n, d = matrix.shape
            k = centroids.shape[0]
            assignment = np.empty(n, dtype=np.int64)
            dists = np.empty(n, dtype=np.float64)
            for i in range(n):
                best = 0
                best_d = np.inf
                for c in range(k):
                    acc = 0.0
                    for j in range(d):
                        diff = np.float64(matrix[i, j]) - centroids[c, j]
                        acc += diff * diff
                    if acc < best_d:
                        best_d = acc
                        best = c
                assignment[i] = best
                dists[i] = best_d
            return assignment, dists

    except ImportError:
        pass


def score_all_numpy(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    scores = matrix.astype(np.float64) @ query.astype(np.float64)
    return scores.astype(np.float32)


def assign_clusters_numpy(
    matrix: np.ndarray, centroids: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    x = matrix.astype(np.float64)
    x_sq = np.einsum("ij,ij->i", x, x)
    c_sq = np.einsum("ij,ij->i", centroids, centroids)
    d2 = x_sq[:, None] + c_sq[None, :] - 2.0 * (x @ centroids.T)
    assignment = d2.argmin(axis=1)
    dists = np.maximum(d2[np.arange(len(x)), assignment], 0.0)
    return assignment.astype(np.int64), dists


def backend() -> str:
    return "numba" if _score_all_numba is not None else "numpy"


def score_all(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Float32 dot product of every matrix row with the query."""
    if _score_all_numba is not None:
        return _score_all_numba(
            np.ascontiguousarray(matrix, dtype=np.float32),
            np.ascontiguousarray(query, dtype=np.float32),
        )
    return score_all_numpy(matrix, query)


def assign_clusters(
    matrix: np.ndarray, centroids: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest centroid per row by squared euclidean distance."""
    if _assign_clusters_numba is not None:
        return _assign_clusters_numba(
            np.ascontiguousarray(matrix, dtype=np.float32),
            np.ascontiguousarray(centroids, dtype=np.float64),
        )
    return assign_clusters_numpy(matrix, centroids)
