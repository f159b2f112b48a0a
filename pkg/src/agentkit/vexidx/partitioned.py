"""Partitioned approximate index: k-means clusters over a flat index.

Lloyd iterations with k-means++ seeding from a seeded RNG, so builds are
fully deterministic. Search probes the clusters whose centroids are most
similar to the query and ranks the gathered candidates with the same total
order as the flat index, which makes n_probe == n_clusters exactly
equivalent to a flat search.
"""

from __future__ import annotations

import numpy as np

from agentkit.errors import DimensionMismatch, TooFewEntries
from agentkit.vexidx._kernels import assign_clusters
from agentkit.vexidx.flat import FlatIndex, SearchHit, rank_hits


class PartitionedIndex:
    def __init__(
        self,
        flat: FlatIndex,
        centroids: np.ndarray,
        assignment: np.ndarray,
        distortion_history: list[float],
    ):
        self.flat = flat
        self.centroids = centroids
        self.assignment = assignment
        self.distortion_history = distortion_history
        self.posting_lists = [
            np.flatnonzero(assignment == c) for c in range(len(centroids))
        ]

    @property
    def n_clusters(self) -> int:
        return len(self.centroids)

    def cluster_of(self, chunk_id: str) -> int:
        return int(self.assignment[self.flat.ids.index(chunk_id)])


def _seed_centroids(matrix: np.ndarray, n_clusters: int, rng) -> np.ndarray:
    """k-means++ style seeding: spread initial centroids by squared distance."""
    n = matrix.shape[0]
    x = matrix.astype(np.float64)
    chosen = [int(rng.integers(n))]
    d2 = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    while len(chosen) < n_clusters:
        total = d2.sum()
        if total <= 0.0:
            # All remaining mass is on already-chosen points (duplicates);
            # fall back to uniform choice among the unchosen.
            remaining = np.setdiff1d(np.arange(n), np.array(chosen))
            pick = int(rng.choice(remaining))
        else:
            pick = int(rng.choice(n, p=d2 / total))
        chosen.append(pick)
        d2 = np.minimum(d2, np.sum((x - x[pick]) ** 2, axis=1))
    return x[np.array(chosen)].copy()


def build_partitioned(
    flat: FlatIndex, n_clusters: int, max_iters: int = 25, seed: int = 0
) -> PartitionedIndex:
    """Cluster a flat index with Lloyd's algorithm.

    Iterates until the assignment reaches a fixpoint or max_iters passes.
    Empty clusters are re-seeded from the point farthest from its assigned
    centroid. The per-iteration distortion (sum of squared distances to
    assigned centroids) is recorded and is non-increasing.
    """
    n = len(flat)
    if n_clusters < 1 or n_clusters > n:
        raise TooFewEntries(
            f"need 1 <= n_clusters <= {n} entries, got n_clusters={n_clusters}"
        )
    rng = np.random.default_rng(seed)
    matrix = flat.matrix
    centroids = _seed_centroids(matrix, n_clusters, rng)

    assignment = None
    history: list[float] = []
    for _ in range(max_iters):
        new_assignment, dists = assign_clusters(matrix, centroids)
        history.append(float(dists.sum()))
        if assignment is not None and np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment

        # Mean update; empty clusters keep their centroid until re-seeded.
        counts = np.bincount(assignment, minlength=n_clusters)
        sums = np.zeros((n_clusters, matrix.shape[1]), dtype=np.float64)
        np.add.at(sums, assignment, matrix.astype(np.float64))
        nonempty = counts > 0
        centroids[nonempty] = sums[nonempty] / counts[nonempty, None]

        empties = np.flatnonzero(~nonempty)
        if empties.size:
            _, dists = assign_clusters(matrix, centroids)
            farthest = np.argsort(-dists, kind="stable")
            for slot, point in zip(empties, farthest[: empties.size]):
                centroids[slot] = matrix[point].astype(np.float64)

    final_assignment, _ = assign_clusters(matrix, centroids)
    return PartitionedIndex(flat, centroids, final_assignment, history)


def search_partitioned(
    pidx: PartitionedIndex, query: np.ndarray, k: int, n_probe: int
) -> list[SearchHit]:
    """Approximate search scanning only the n_probe most similar clusters."""
    if not 1 <= n_probe <= pidx.n_clusters:
        raise ValueError(
            f"n_probe must be in [1, {pidx.n_clusters}], got {n_probe}"
        )
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query = np.asarray(query, dtype=np.float32).ravel()
    flat = pidx.flat
    if query.shape[0] != flat.dim:
        raise DimensionMismatch(
            f"query dim {query.shape[0]} != index dim {flat.dim}"
        )

    norms = np.linalg.norm(pidx.centroids, axis=1)
    sims = pidx.centroids @ query.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = np.where(norms > 0, sims / norms, -np.inf)
    probe_order = np.lexsort((np.arange(pidx.n_clusters), -sims))[:n_probe]

    candidates = np.sort(
        np.concatenate([pidx.posting_lists[c] for c in probe_order])
    )
    if candidates.size == 0:
        return []
    from agentkit.vexidx._kernels import score_all

    scores = score_all(flat.matrix[candidates], query)
    ids = np.asarray(flat.ids)[candidates]
    return rank_hits(ids, scores, k)
