"""Random partitioning baselines.

Randomness comes from numpy's PCG64 (``np.random.default_rng(seed)``); the
seed -> labels mapping is part of the public contract.
"""

from __future__ import annotations

import numpy as np

from .dataset import CategorySpec
from .solver import Partition


def _check(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N={n}, got {k}")


def balanced_label_multiset(n: int, k: int) -> np.ndarray:
    """Labels 0..k-1 repeated; the first n mod k labels get one extra copy."""
    _check(n, k)
    return np.arange(n, dtype=np.int64) % k


def random_partition(n: int, k: int, seed: int) -> Partition:
    rng = np.random.default_rng(seed)
    return Partition(rng.permutation(balanced_label_multiset(n, k)), k)


def random_partition_with_categories(cats: CategorySpec, k: int, seed: int) -> Partition:
    """Shuffle each category and deal it round-robin over the anticlusters.

    Each category starts dealing where the previous one stopped (plus one
    random rotation shared by all), so the whole deal is one continuous
    round-robin: every category and every anticluster ends up balanced.
    """
    n = cats.n_objects
    _check(n, k)
    rng = np.random.default_rng(seed)
    labels = np.empty(n, dtype=np.int64)
    dealt = int(rng.integers(k))
    for members in cats.members:
        shuffled = rng.permutation(members)
        labels[shuffled] = (dealt + np.arange(shuffled.size)) % k
        dealt += shuffled.size
    return Partition(labels, k)
