"""Tabular data ingestion and preprocessing.

Numeric columns are read as 64-bit floats. Columns whose cells are all
non-numeric are one-hot encoded in place; a column mixing numbers and text
is rejected.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DataError(ValueError):
    """Raised when an input file cannot be turned into a feature matrix."""


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    columns: list[str] = field(default_factory=list)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"feature matrix must be non-empty 2-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataError("feature matrix contains NaN or Inf")
        object.__setattr__(self, "values", values)
        if not self.columns:
            object.__setattr__(self, "columns", [f"x{d}" for d in range(values.shape[1])])
        elif len(self.columns) != values.shape[1]:
            raise DataError("column names do not match number of features")

    @property
    def n_objects(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class CategorySpec:
    """Category id per object plus the id -> original string mapping."""

    labels: np.ndarray
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size == 0:
            raise DataError("category labels must be a non-empty 1-D array")
        if not np.issubdtype(labels.dtype, np.integer) or labels.min() < 0:
            raise DataError("category labels must be non-negative integers")
        labels = labels.astype(np.int64)
        object.__setattr__(self, "labels", labels)
        n_cat = int(labels.max()) + 1
        if not self.names:
            object.__setattr__(self, "names", [str(g) for g in range(n_cat)])
        elif len(self.names) < n_cat:
            raise DataError("fewer category names than category ids")

    @classmethod
    def from_values(cls, values: Sequence) -> "CategorySpec":
        """Map arbitrary hashable values to ids in first-appearance order."""
        mapping: dict = {}
        ids = np.empty(len(values), dtype=np.int64)
        for i, v in enumerate(values):
            ids[i] = mapping.setdefault(v, len(mapping))
        return cls(ids, [str(v) for v in mapping])

    @property
    def n_objects(self) -> int:
        return self.labels.size

    @property
    def n_categories(self) -> int:
        return len(self.names)

    @property
    def members(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.labels == g) for g in range(self.n_categories)]

    def category_map(self) -> dict[str, int]:
        return {name: g for g, name in enumerate(self.names)}


def _parse_float(cell: str) -> float | None:
    try:
        value = float(cell)
    except ValueError:
        return None
    return value


def one_hot(raw_column: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    """One binary column per distinct value, ordered by first appearance.

    Returns:
        tuple: (N x G float array, list of the G category values)
    """
    if len(raw_column) == 0:
        raise DataError("cannot one-hot encode an empty column")
    spec = CategorySpec.from_values(list(raw_column))
    block = np.zeros((spec.n_objects, spec.n_categories))
    block[np.arange(spec.n_objects), spec.labels] = 1.0
    return block, spec.names


def load_csv(
    path: str | Path,
    category_column: str | None = None,
    drop_columns: Iterable[str] = (),
) -> tuple[FeatureMatrix, CategorySpec | None]:
    """Read a header-first CSV into a feature matrix.

    Args:
        path: CSV file, comma separated, UTF-8.
        category_column: column extracted as the category variable and
            excluded from the features.
        drop_columns: columns ignored entirely.

    Returns:
        tuple: (FeatureMatrix, CategorySpec or None)
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(
                f"{path}:{line_no}: ragged row, expected {len(header)} cells, got {len(row)}"
            )

    dropped = set(drop_columns)
    unknown = dropped - set(header)
    if unknown:
        raise DataError(f"cannot drop unknown columns: {sorted(unknown)}")
    if category_column is not None and category_column not in header:
        raise DataError(f"category column {category_column!r} not in header")

    categories = None
    blocks: list[np.ndarray] = []
    names: list[str] = []
    for c, name in enumerate(header):
        cells = [row[c].strip() for row in body]
        if name == category_column:
            categories = CategorySpec.from_values(cells)
            continue
        if name in dropped:
            continue
        for line_no, cell in enumerate(cells, start=2):
            if cell == "":
                raise DataError(f"{path}:{line_no}: missing value in column {name!r}")
        parsed = [_parse_float(cell) for cell in cells]
        n_numeric = sum(p is not None for p in parsed)
        if n_numeric == len(parsed):
            blocks.append(np.array(parsed, dtype=np.float64).reshape(-1, 1))
            names.append(name)
        elif n_numeric == 0:
            block, values = one_hot(cells)
            blocks.append(block)
            names.extend(f"{name}={v}" for v in values)
        else:
            line_no = next(i for i, p in enumerate(parsed, start=2) if p is None)
            raise DataError(
                f"{path}:{line_no}: unparseable numeric cell {cells[line_no - 2]!r} "
                f"in column {name!r}"
            )
    if not blocks:
        raise DataError(f"{path}: no feature columns left")
    values = np.hstack(blocks)
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: non-finite numeric value")
    return FeatureMatrix(values, names), categories


def save_csv(path: str | Path, m: FeatureMatrix) -> None:
    """Write values with 17 significant digits so a reload is bit-exact."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(m.columns)
        for row in m.values:
            writer.writerow(["%.17g" % v for v in row])


def save_category_map(path: str | Path, cats: CategorySpec) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"category_map": cats.category_map()}, f, indent=2)
        f.write("\n")


def standardize(m: FeatureMatrix) -> FeatureMatrix:
    """Zero mean, unit population sd per column; constant columns become 0."""
    x = m.values
    centered = x - x.mean(axis=0)
    sd = x.std(axis=0)
    safe = np.where(sd > 0, sd, 1.0)
    return FeatureMatrix(centered / safe, list(m.columns))


def scale_unit_interval(m: FeatureMatrix, divisor: float) -> FeatureMatrix:
    # e.g. 8-bit pixel intensities with divisor 255
    if not divisor > 0:
        raise DataError(f"divisor must be positive, got {divisor}")
    return FeatureMatrix(m.values / divisor, list(m.columns))


def preprocess(m: FeatureMatrix, how: str) -> FeatureMatrix:
    """Apply a preprocessing rule: 'standardize', 'scale:<divisor>' or 'none'."""
    if how == "none":
        return m
    if how == "standardize":
        return standardize(m)
    if how.startswith("scale:"):
        try:
            divisor = float(how.split(":", 1)[1])
        except ValueError:
            raise DataError(f"bad scale divisor in {how!r}") from None
        return scale_unit_interval(m, divisor)
    raise DataError(f"unknown preprocessing rule {how!r}")
