"""Maximum-weight rectangular linear assignment.

Rows are objects of a batch, columns are anticlusters, and every row gets a
distinct column. Two solvers are provided: scipy's modified Jonker-Volgenant
(the default, compiled) and a numpy shortest-augmenting-path Jonker-Volgenant
kept for cross-checking. ``brute_force_max_assignment`` enumerates all
injections and exists only to verify the other two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

# slack for reduced-cost comparisons in the numpy solver
EPS = 1e-12
BRUTE_FORCE_MAX_COLS = 9


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    column_of_row: np.ndarray
    total_cost: float


def _check_costs(costs) -> np.ndarray:
    c = np.asarray(costs, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] < 1:
        raise AssignmentError(f"cost matrix must be 2-D with at least one row, got {c.shape}")
    if c.shape[0] > c.shape[1]:
        raise AssignmentError(f"more rows than columns: {c.shape}")
    if not np.all(np.isfinite(c)):
        raise AssignmentError("cost matrix contains non-finite entries")
    return c


def _finish(c: np.ndarray, cols: np.ndarray) -> Assignment:
    cols = np.asarray(cols, dtype=np.int64)
    return Assignment(cols, float(c[np.arange(c.shape[0]), cols].sum()))


def lapjv_min(c: np.ndarray) -> np.ndarray:
    """Column per row minimizing total cost; rows <= columns.

    Shortest augmenting path with Dijkstra-like scans over reduced costs,
    one augmentation per row, duals kept so that reduced costs stay >= 0.
    """
    n_rows, n_cols = c.shape
    u = np.zeros(n_rows)
    v = np.zeros(n_cols)
    col4row = np.full(n_rows, -1, dtype=np.int64)
    row4col = np.full(n_cols, -1, dtype=np.int64)

    for cur_row in range(n_rows):
        shortest = np.full(n_cols, np.inf)
        path = np.full(n_cols, -1, dtype=np.int64)
        scanned_rows = np.zeros(n_rows, dtype=bool)
        scanned_cols = np.zeros(n_cols, dtype=bool)
        i = cur_row
        min_val = 0.0
        sink = -1
        while sink < 0:
            scanned_rows[i] = True
            free = ~scanned_cols
            reduced = min_val + c[i] - u[i] - v
            better = free & (reduced < shortest)
            shortest[better] = reduced[better]
            path[better] = i

            candidates = np.where(free, shortest, np.inf)
            lowest = candidates.min()
            # among (near-)ties prefer an unassigned column to end the search early
            tied = np.flatnonzero(candidates <= lowest + EPS)
            unassigned = tied[row4col[tied] < 0]
            j = int(unassigned[0]) if unassigned.size else int(tied[0])

            min_val = shortest[j]
            scanned_cols[j] = True
            if row4col[j] < 0:
                sink = j
            else:
                i = int(row4col[j])

        u[cur_row] += min_val
        others = np.flatnonzero(scanned_rows)
        others = others[others != cur_row]
        u[others] += min_val - shortest[col4row[others]]
        v[scanned_cols] -= min_val - shortest[scanned_cols]

        j = sink
        while True:
            i = int(path[j])
            row4col[j] = i
            col4row[i], j = j, col4row[i]
            if i == cur_row:
                break
    return col4row


def solve_max_assignment(costs, backend: str = "scipy") -> Assignment:
    """Injective row -> column map maximizing the summed cost.

    Args:
        costs: m x n array with m <= n, finite entries.
        backend: 'scipy' (compiled, default) or 'jv' (numpy implementation).

    Returns:
        Assignment: chosen column per row and the summed cost. The result
        is deterministic for a given input; ties go to whichever optimum
        the solver's scan order reaches first.
    """
    c = _check_costs(costs)
    if backend == "scipy":
        rows, cols = linear_sum_assignment(c, maximize=True)
        out = np.empty(c.shape[0], dtype=np.int64)
        out[rows] = cols
        return _finish(c, out)
    if backend == "jv":
        # maximize by minimizing the negated matrix
        return _finish(c, lapjv_min(-c))
    raise AssignmentError(f"unknown backend {backend!r}")


def brute_force_max_assignment(costs) -> Assignment:
    """Exhaustive search over all injections; test oracle only."""
    c = _check_costs(costs)
    n_rows, n_cols = c.shape
    if n_cols > BRUTE_FORCE_MAX_COLS:
        raise AssignmentError(f"brute force limited to {BRUTE_FORCE_MAX_COLS} columns")
    best_total = -np.inf
    best = None
    rows = range(n_rows)
    for perm in itertools.permutations(range(n_cols), n_rows):
        total = sum(c[r, p] for r, p in zip(rows, perm))
        if total > best_total:
            best_total = total
            best = perm
    return Assignment(np.array(best, dtype=np.int64), float(best_total))


def read_cost_matrix(path) -> np.ndarray:
    """Parse the 'm n' header + m rows whitespace format."""
    with open(path, encoding="utf-8") as f:
        tokens = f.read().split()
    if len(tokens) < 2:
        raise AssignmentError(f"{path}: missing 'm n' header")
    m, n = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if len(values) != m * n:
        raise AssignmentError(f"{path}: expected {m * n} entries, got {len(values)}")
    return np.array([float(t) for t in values]).reshape(m, n)


def write_cost_matrix(path, costs) -> None:
    c = np.asarray(costs, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{c.shape[0]} {c.shape[1]}\n")
        for row in c:
            f.write(" ".join("%.17g" % v for v in row) + "\n")
