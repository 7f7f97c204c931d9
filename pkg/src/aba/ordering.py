"""Distance-to-centroid ordering and batch construction.

Every builder rearranges the descending distance order and then cuts it into
consecutive batches of K objects, so each full batch hands exactly one object
to every anticluster.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import CategorySpec

VARIANTS = ("base", "interleaved", "category")
# interleaved batching is used by 'auto' when anticlusters hold at most this many objects
AUTO_INTERLEAVE_MAX_SIZE = 8


@dataclass(frozen=True)
class GlobalOrdering:
    global_centroid: np.ndarray
    distances: np.ndarray
    sorted_indices: np.ndarray

    @property
    def n_objects(self) -> int:
        return self.sorted_indices.size


@dataclass(frozen=True)
class BatchPlan:
    batches: list[np.ndarray]
    variant: str

    @property
    def batch_count(self) -> int:
        return len(self.batches)

    def order(self) -> np.ndarray:
        return np.concatenate(self.batches)


def squared_euclidean(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.dot(diff, diff))


def compute_global_ordering(x) -> GlobalOrdering:
    """Sort objects by squared distance to the mean, farthest first.

    Ties keep ascending object index.
    """
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=0)
    diff = x - mu
    distances = np.einsum("ij,ij->i", diff, diff)
    order = np.argsort(-distances, kind="stable")
    return GlobalOrdering(mu, distances, order)


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N={n}, got {k}")


def _split(order: np.ndarray, k: int, variant: str) -> BatchPlan:
    return BatchPlan([order[s:s + k] for s in range(0, order.size, k)], variant)


def build_base_batches(o: GlobalOrdering, k: int) -> BatchPlan:
    _check_k(o.n_objects, k)
    return _split(o.sorted_indices, k, "base")


def interleave_positions(n: int, k: int) -> np.ndarray:
    """Positions into the sorted list, in the interleaved order.

    The sorted list is cut into k consecutive strata, the short ones
    (floor(n/k) long) first. Round r takes element r of every stratum; the
    last element of each long stratum is appended after floor(n/k) rounds.
    """
    _check_k(n, k)
    q_lo, n_long = divmod(n, k)
    n_short = k - n_long
    lengths = np.array([q_lo] * n_short + [q_lo + 1] * n_long)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    rounds = (starts[None, :] + np.arange(q_lo)[:, None]).ravel()
    leftovers = starts[n_short:] + q_lo
    return np.concatenate((rounds, leftovers)).astype(np.int64)


def build_interleaved_batches(o: GlobalOrdering, k: int) -> BatchPlan:
    positions = interleave_positions(o.n_objects, k)
    return _split(o.sorted_indices[positions], k, "interleaved")


def build_category_batches(o: GlobalOrdering, k: int, cats: CategorySpec) -> BatchPlan:
    """Batches that are single-category wherever a full block of k exists.

    Each category's objects (in sorted order) are cut into blocks of k.
    Full blocks are emitted round-robin over category ids, then the short
    tail blocks in the same round-robin order.
    """
    _check_k(o.n_objects, k)
    if cats.n_objects != o.n_objects:
        raise ValueError("category labels do not match number of objects")
    per_cat = [o.sorted_indices[cats.labels[o.sorted_indices] == g]
               for g in range(cats.n_categories)]
    full_blocks = [[s[i:i + k] for i in range(0, s.size - k + 1, k)] for s in per_cat]
    tails = [s[s.size - s.size % k:] for s in per_cat]

    pieces = []
    for r in range(max((len(b) for b in full_blocks), default=0)):
        pieces.extend(b[r] for b in full_blocks if r < len(b))
    pieces.extend(t for t in tails if t.size)
    order = np.concatenate(pieces) if pieces else np.empty(0, dtype=np.int64)
    return _split(order, k, "category")


def resolve_variant(variant: str, n: int, k: int, has_categories: bool = False) -> str:
    if variant == "auto":
        if has_categories:
            return "category"
        return "interleaved" if n / k <= AUTO_INTERLEAVE_MAX_SIZE else "base"
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    return variant


def build_batches(o: GlobalOrdering, k: int, variant: str,
                  cats: CategorySpec | None = None) -> BatchPlan:
    variant = resolve_variant(variant, o.n_objects, k, cats is not None)
    if variant == "base":
        return build_base_batches(o, k)
    if variant == "interleaved":
        return build_interleaved_batches(o, k)
    if cats is None:
        raise ValueError("category variant requires category labels")
    return build_category_batches(o, k, cats)
