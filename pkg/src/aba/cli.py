"""Command line front end: ``aba run``, ``aba random`` and ``aba evaluate``.

Exit status is 0 on success, 2 for invalid option combinations and 1 for
problems with the data itself.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .baselines import random_partition, random_partition_with_categories
from .dataset import DataError, load_csv, preprocess, save_category_map
from .hierarchy import parse_hierarchy, run_hierarchical
from .metrics import evaluate
from .ordering import build_batches, compute_global_ordering
from .solver import InfeasibleError, Partition, run_aba

log = logging.getLogger("aba")

LABELS_HEADER = ("object_index", "anticluster")


def _threads(value: str):
    if value == "auto":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _preprocess_rule(value: str) -> str:
    if value in ("standardize", "none"):
        return value
    if value.startswith("scale:"):
        try:
            divisor = float(value[len("scale:"):])
        except ValueError:
            divisor = 0.0
        if divisor > 0:
            return value
    raise argparse.ArgumentTypeError(
        f"expected standardize, none or scale:<positive float>, got {value!r}")


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, type=Path, help="CSV file with a header row")
    p.add_argument("--category-column", help="column holding the categorical variable")
    p.add_argument("--drop-columns", nargs="*", default=[], metavar="COL",
                   help="columns to ignore")
    p.add_argument("--preprocess", type=_preprocess_rule, default="none",
                   help="standardize | scale:<divisor> | none (default: none)")
    p.add_argument("--metrics-out", type=Path, help="metrics JSON path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aba", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="assignment-based anticlustering")
    _add_data_args(run)
    run.add_argument("--k", type=int, help="number of anticlusters")
    run.add_argument("--variant", choices=["base", "interleaved", "category", "auto"],
                     default="auto")
    run.add_argument("--hierarchy", help="branching factors, e.g. 40x125")
    run.add_argument("--labels-out", type=Path, help="labels CSV path (default: stdout)")
    run.add_argument("--threads", type=_threads, default=1,
                     help="worker threads for hierarchical runs (int or 'auto')")

    rnd = sub.add_parser("random", help="random balanced partition baseline")
    _add_data_args(rnd)
    rnd.add_argument("--k", type=int, required=True)
    rnd.add_argument("--seed", type=int, required=True)
    rnd.add_argument("--labels-out", type=Path, help="labels CSV path (default: stdout)")

    ev = sub.add_parser("evaluate", help="score an existing labels file")
    _add_data_args(ev)
    ev.add_argument("--labels", required=True, type=Path)
    ev.add_argument("--k", type=int, help="number of anticlusters (default: max label + 1)")
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "evaluate":
        return
    if args.command == "run":
        if args.variant == "category" and not args.category_column:
            parser.error("--variant category requires --category-column")
        if args.hierarchy:
            if args.category_column:
                parser.error("--hierarchy cannot be combined with --category-column")
            try:
                plan = parse_hierarchy(args.hierarchy)
            except ValueError as e:
                parser.error(str(e))
            if args.k is None:
                args.k = plan.k
            elif args.k != plan.k:
                parser.error(f"--k {args.k} does not equal the hierarchy product {plan.k}")
            args.plan = plan
        elif args.k is None:
            parser.error("--k is required unless --hierarchy is given")
    if args.k is not None and args.k < 1:
        parser.error("--k must be >= 1")


def write_labels(path: Path | None, labels: np.ndarray) -> None:
    f = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(LABELS_HEADER)
        writer.writerows(enumerate(labels.tolist()))
    finally:
        if path:
            f.close()


def read_labels(path: Path, n: int, k: int | None = None) -> Partition:
    """Read a labels CSV; object indices must cover 0..n-1 exactly once."""
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise DataError(f"cannot read labels: {e}") from None
    if not rows or tuple(c.strip() for c in rows[0]) != LABELS_HEADER:
        raise DataError(f"{path}: header must be {','.join(LABELS_HEADER)}")
    body = [r for r in rows[1:] if r]
    if len(body) != n:
        raise DataError(f"{path}: {len(body)} labels for {n} objects")
    labels = np.full(n, -1, dtype=np.int64)
    try:
        for row in body:
            i, label = int(row[0]), int(row[1])
            if not 0 <= i < n or labels[i] >= 0:
                raise DataError(f"{path}: bad or repeated object index {i}")
            if label < 0:
                raise DataError(f"{path}: negative label {label}")
            labels[i] = label
    except (ValueError, IndexError):
        raise DataError(f"{path}: malformed row {row!r}") from None
    if k is None:
        k = int(labels.max()) + 1
    if labels.max() >= k:
        raise DataError(f"{path}: label {labels.max()} out of range for k={k}")
    missing = np.flatnonzero(np.bincount(labels, minlength=k) == 0)
    if missing.size:
        raise DataError(f"{path}: anticluster ids never used: {missing.tolist()}")
    return Partition(labels, k)


def _emit_metrics(path: Path | None, report: dict, to_stderr: bool) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path:
        path.write_text(text, encoding="utf-8")
    else:
        (sys.stderr if to_stderr else sys.stdout).write(text)


def _load(args):
    m, cats = load_csv(args.input, args.category_column, args.drop_columns)
    return preprocess(m, args.preprocess), cats


def _solve(args, m, cats) -> Partition:
    if args.command == "random":
        if cats is not None:
            return random_partition_with_categories(cats, args.k, args.seed)
        return random_partition(m.n_objects, args.k, args.seed)
    if getattr(args, "plan", None) is not None:
        return run_hierarchical(m, args.plan, args.variant, threads=args.threads)
    plan = build_batches(compute_global_ordering(m.values), args.k, args.variant, cats)
    log.info("variant %s, %d batches", plan.variant, plan.batch_count)
    return run_aba(m, plan, args.k, cats if plan.variant == "category" else None)


def _run(args) -> int:
    m, cats = _load(args)
    if args.command == "evaluate":
        partition = read_labels(args.labels, m.n_objects, args.k)
        _emit_metrics(args.metrics_out, evaluate(m, partition).to_dict(), False)
        return 0
    if args.k > m.n_objects:
        raise DataError(f"k={args.k} exceeds the number of objects N={m.n_objects}")
    start = time.perf_counter()
    partition = _solve(args, m, cats)
    runtime = time.perf_counter() - start
    write_labels(args.labels_out, partition.labels)
    if cats is not None and args.labels_out:
        save_category_map(args.labels_out.with_suffix(".category_map.json"), cats)
    report = evaluate(m, partition).to_dict(runtime_seconds=runtime)
    _emit_metrics(args.metrics_out, report, to_stderr=args.labels_out is None)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    _validate(parser, args)
    try:
        return _run(args)
    except (DataError, InfeasibleError, ValueError) as e:
        print(f"aba: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
