"""Assignment-based anticlustering over a batch plan."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .assignment import solve_max_assignment
from .dataset import CategorySpec, FeatureMatrix
from .ordering import BatchPlan, build_batches, compute_global_ordering


class InfeasibleError(RuntimeError):
    """A batch object has no anticluster left that respects the category caps."""


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be 1-D")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"labels must lie in 0..{self.k - 1}")
        object.__setattr__(self, "labels", labels)

    @property
    def n_objects(self) -> int:
        return self.labels.size

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.labels == k)


def as_array(m) -> np.ndarray:
    if isinstance(m, FeatureMatrix):
        return m.values
    x = np.asarray(m, dtype=np.float64)
    return x.reshape(-1, 1) if x.ndim == 1 else x


def update_centroid(counter: int, centroid, x) -> np.ndarray:
    """Running mean after inserting x; counter is the count including x."""
    if counter < 1:
        raise ValueError(f"counter must be >= 1, got {counter}")
    centroid = np.asarray(centroid, dtype=np.float64)
    return centroid + (np.asarray(x, dtype=np.float64) - centroid) / counter


class AnticlusterState:
    """Centroids and object tallies of K growing anticlusters.

    Args:
        first: feature vectors of the first batch, one per anticluster.
        first_categories: category ids of the first batch, if categories
            are active.
        caps: per-category upper bound on objects per anticluster.
    """

    def __init__(self, first: np.ndarray, first_categories=None, caps=None):
        self.centroids = np.array(first, dtype=np.float64)
        self.counts = np.ones(len(first), dtype=np.int64)
        self.caps = None
        self.category_counts = None
        if caps is not None:
            self.caps = np.asarray(caps, dtype=np.int64)
            self.category_counts = np.zeros((len(first), self.caps.size), dtype=np.int64)
            self.category_counts[np.arange(len(first)), first_categories] = 1

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def cost_matrix(self, x: np.ndarray) -> np.ndarray:
        return cdist(x, self.centroids, "sqeuclidean")

    def forbidden(self, batch_categories: np.ndarray) -> np.ndarray:
        """Boolean mask of (row, anticluster) pairs that would exceed a cap."""
        full = self.category_counts >= self.caps[None, :]
        return full[:, batch_categories].T

    def add(self, cols: np.ndarray, x: np.ndarray, batch_categories=None) -> None:
        # cols are distinct within a batch, so fancy-indexed updates do not collide
        self.counts[cols] += 1
        self.centroids[cols] += (x - self.centroids[cols]) / self.counts[cols][:, None]
        if self.category_counts is not None:
            self.category_counts[cols, batch_categories] += 1


def masked_costs(costs: np.ndarray, forbidden: np.ndarray) -> np.ndarray:
    """Replace forbidden entries so no optimal assignment ever uses one.

    A single sentinel entry must outweigh any gain the other m-1 rows could
    collect, hence -(1 + m * max) for nonnegative costs.
    """
    if not forbidden.any():
        return costs
    if forbidden.all(axis=1).any():
        raise InfeasibleError("an object has every anticluster blocked by category caps")
    sentinel = -(1.0 + costs.shape[0] * float(costs.max()))
    return np.where(forbidden, sentinel, costs)


def run_aba(m, plan: BatchPlan, k: int, cats: CategorySpec | None = None,
            backend: str = "scipy", return_state: bool = False):
    """Assign objects batch by batch, maximizing distance to current centroids.

    Args:
        m: FeatureMatrix or N x D array.
        plan: batches from one of the ordering builders, for the same k.
        k: number of anticlusters.
        cats: category labels; when given, per-category caps of
            ceil(|N_g| / k) are enforced by masking the cost matrix.
        backend: assignment solver backend.
        return_state: also return the final AnticlusterState.

    Returns:
        Partition, or (Partition, AnticlusterState) with return_state.
    """
    x = as_array(m)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N={n}, got {k}")
    first = plan.batches[0]
    if first.size != k or sum(b.size for b in plan.batches) != n:
        raise ValueError("batch plan does not match N and k")

    labels = np.full(n, -1, dtype=np.int64)
    labels[first] = np.arange(k)

    cat_labels = None
    if cats is not None:
        if cats.n_objects != n:
            raise ValueError("category labels do not match number of objects")
        cat_labels = cats.labels
        caps = -(-np.bincount(cat_labels, minlength=cats.n_categories) // k)
        state = AnticlusterState(x[first], cat_labels[first], caps)
    else:
        state = AnticlusterState(x[first])

    for batch in plan.batches[1:]:
        xb = x[batch]
        costs = state.cost_matrix(xb)
        batch_cats = None
        forbidden = None
        if cat_labels is not None:
            batch_cats = cat_labels[batch]
            forbidden = state.forbidden(batch_cats)
            costs = masked_costs(costs, forbidden)
        cols = solve_max_assignment(costs, backend=backend).column_of_row
        if forbidden is not None and forbidden[np.arange(batch.size), cols].any():
            raise InfeasibleError("no assignment of this batch respects the category caps")
        state.add(cols, xb, batch_cats)
        labels[batch] = cols

    partition = Partition(labels, k)
    return (partition, state) if return_state else partition


def anticluster(m, k: int, variant: str = "auto", cats: CategorySpec | None = None,
                backend: str = "scipy") -> Partition:
    """Order, batch and solve in one call."""
    x = as_array(m)
    plan = build_batches(compute_global_ordering(x), k, variant, cats)
    return run_aba(x, plan, k, cats if plan.variant == "category" else None, backend)
