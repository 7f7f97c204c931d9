"""Partition quality: diversity objectives, diversity spread, cut cost."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .solver import Partition, as_array

BRUTE_FORCE_MAX_N = 5000


@dataclass(frozen=True)
class DiversityReport:
    pairwise_objective: float
    centroid_sse_objective: float
    per_cluster_diversity: list[float]
    diversity_sd: float
    diversity_range: float
    min_size: int
    max_size: int
    min_max_ratio: float
    cut_cost: float

    def to_dict(self, runtime_seconds: float | None = None) -> dict:
        out = asdict(self)
        out["runtime_seconds"] = runtime_seconds
        return out


def _check(x: np.ndarray, p: Partition) -> np.ndarray:
    if p.n_objects != x.shape[0]:
        raise ValueError(f"{p.n_objects} labels for {x.shape[0]} objects")
    sizes = p.sizes
    if np.any(sizes == 0):
        raise ValueError(f"empty anticlusters: {np.flatnonzero(sizes == 0).tolist()}")
    return sizes


def cluster_sse(x: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Sum of squared distances to the exact member mean, per anticluster."""
    sizes = np.bincount(labels, minlength=k)
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, labels, x)
    centroids = sums / sizes[:, None]
    diff = x - centroids[labels]
    return np.bincount(labels, weights=np.einsum("ij,ij->i", diff, diff), minlength=k)


def min_max_ratio(p: Partition) -> float:
    """Smallest over largest anticluster size in percent; 100 if they differ by <= 1."""
    sizes = p.sizes
    lo, hi = int(sizes.min()), int(sizes.max())
    if hi - lo <= 1:
        return 100.0
    return 100.0 * lo / hi


def evaluate(m, p: Partition) -> DiversityReport:
    x = as_array(m)
    sizes = _check(x, p)
    diversity = cluster_sse(x, p.labels, p.k)
    # pairwise sum within a group = size * SSE to its mean
    pairwise = float(np.dot(sizes, diversity))
    mu = x.mean(axis=0)
    diff = x - mu
    total_pairwise = x.shape[0] * float(np.einsum("ij,ij->", diff, diff))
    return DiversityReport(
        pairwise_objective=pairwise,
        centroid_sse_objective=float(diversity.sum()),
        per_cluster_diversity=diversity.tolist(),
        diversity_sd=float(diversity.std()),
        diversity_range=float(diversity.max() - diversity.min()),
        min_size=int(sizes.min()),
        max_size=int(sizes.max()),
        min_max_ratio=min_max_ratio(p),
        cut_cost=total_pairwise - pairwise,
    )


def brute_force_pairwise(m, p: Partition) -> float:
    """Direct double loop over pairs within each anticluster (test oracle)."""
    x = as_array(m)
    if x.shape[0] > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to N <= {BRUTE_FORCE_MAX_N}")
    total = 0.0
    for k in range(p.k):
        members = x[p.labels == k]
        for a in range(len(members)):
            diff = members[a + 1:] - members[a]
            total += float((diff * diff).sum())
    return total


def brute_force_total_pairwise(m) -> float:
    x = as_array(m)
    return brute_force_pairwise(x, Partition(np.zeros(x.shape[0], dtype=np.int64), 1))
