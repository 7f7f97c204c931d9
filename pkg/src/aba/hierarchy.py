"""Hierarchical decomposition: split into K_1 anticlusters, then split each of
those into K_2, and so on. Leaf ids are parent-major, so with factors
[K_1, K_2] the leaf under parent p and child c gets id p * K_2 + c.
"""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .solver import Partition, anticluster, as_array

_PLAN_RE = re.compile(r"^\s*\d+(\s*[xX]\s*\d+)*\s*$")


@dataclass(frozen=True)
class HierarchyPlan:
    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        if not factors:
            raise ValueError("hierarchy plan needs at least one factor")
        if any(f < 2 for f in factors):
            raise ValueError(f"every factor must be >= 2, got {list(factors)}")
        object.__setattr__(self, "factors", factors)

    @property
    def levels(self) -> int:
        return len(self.factors)

    @property
    def k(self) -> int:
        return math.prod(self.factors)

    def __str__(self) -> str:
        return "x".join(map(str, self.factors))


def parse_hierarchy(spec: str) -> HierarchyPlan:
    """'40x125' -> HierarchyPlan((40, 125))."""
    if not isinstance(spec, str) or not _PLAN_RE.match(spec):
        raise ValueError(f"malformed hierarchy {spec!r}; expected e.g. '40x125'")
    return HierarchyPlan(tuple(int(t) for t in re.split(r"[xX]", spec)))


def _prime_factor_count(k: int) -> int:
    count, p = 0, 2
    while p * p <= k:
        while k % p == 0:
            k //= p
            count += 1
        p += 1
    return count + (k > 1)


def balanced_plan(k: int, levels: int) -> HierarchyPlan:
    """Factorization of k into `levels` factors >= 2 minimizing sum of squares.

    When k has fewer prime factors than `levels`, as many levels as possible
    are used (a prime k yields a single level). Factors come back ascending.
    """
    if k < 2 or levels < 1:
        raise ValueError(f"need k >= 2 and levels >= 1, got k={k}, levels={levels}")
    depth = min(levels, _prime_factor_count(k))
    best: list = [math.inf, None]

    def search(rest: int, slots: int, lo: int, acc: list[int], cost: int) -> None:
        if cost >= best[0]:
            return
        if slots == 1:
            if rest >= lo:
                total = cost + rest * rest
                if total < best[0]:
                    best[:] = [total, acc + [rest]]
            return
        # nondecreasing factors: f^slots <= rest bounds the smallest one
        f = lo
        while f ** slots <= rest:
            if rest % f == 0:
                search(rest // f, slots - 1, f, acc + [f], cost + f * f)
            f += 1

    search(k, depth, 2, [], 0)
    return HierarchyPlan(tuple(best[1]))


def _resolve_threads(threads) -> int:
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def run_hierarchical(m, plan: HierarchyPlan, variant: str = "auto",
                     threads=1, backend: str = "scipy") -> Partition:
    """Recursive anticlustering with the factors of `plan`.

    Subproblems of a level are independent and may run on a thread pool;
    results are merged by leaf id, so the output never depends on the
    number of threads.
    """
    x = as_array(m)
    n = x.shape[0]
    if plan.k > n:
        raise ValueError(f"product of factors {plan.k} exceeds N={n}")
    if variant == "category":
        raise ValueError("hierarchical decomposition does not support categories")
    n_threads = _resolve_threads(threads)

    labels = np.zeros(n, dtype=np.int64)
    groups = [np.arange(n)]
    executor = ThreadPoolExecutor(n_threads) if n_threads > 1 else None

    def solve(members: np.ndarray, k: int) -> np.ndarray:
        return anticluster(x[members], k, variant, backend=backend).labels

    try:
        for k in plan.factors:
            if executor is None:
                results = [solve(g, k) for g in groups]
            else:
                results = list(executor.map(solve, groups, [k] * len(groups)))
            next_groups = []
            for members, sub in zip(groups, results):
                labels[members] = labels[members] * k + sub
                next_groups.extend(members[sub == c] for c in range(k))
            groups = next_groups
    finally:
        if executor is not None:
            executor.shutdown()
    return Partition(labels, plan.k)
