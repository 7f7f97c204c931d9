import numpy as np
import pytest

_acceptance_lines = []


def assert_balanced(partition, n, k):
    sizes = np.bincount(partition.labels, minlength=k)
    assert sizes.size == k
    assert partition.labels.size == n
    assert set(np.unique(sizes)) <= {n // k, -(-n // k)}
    assert np.count_nonzero(sizes == -(-n // k)) == (n % k if n % k else k)


def assert_category_bounds(partition, cat_labels, k):
    for g in np.unique(cat_labels):
        n_g = np.count_nonzero(cat_labels == g)
        tally = np.bincount(partition.labels[cat_labels == g], minlength=k)
        assert tally.min() >= n_g // k, (g, tally)
        assert tally.max() <= -(-n_g // k), (g, tally)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        doc = report.nodeid.split("::")[-1]
        _acceptance_lines.append(("PASS" if report.passed else "FAIL", doc))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for status, name in _acceptance_lines:
        terminalreporter.write_line(f"[{status}] {name}")
