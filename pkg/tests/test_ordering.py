import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aba.dataset import CategorySpec
from aba.ordering import (GlobalOrdering, build_base_batches, build_batches,
                          build_category_batches, build_interleaved_batches,
                          compute_global_ordering, interleave_positions, resolve_variant,
                          squared_euclidean)


def identity_ordering(n):
    """Ordering whose sorted list is simply 0..n-1."""
    return GlobalOrdering(np.zeros(1), np.arange(n, 0, -1, dtype=float), np.arange(n))


def test_squared_euclidean():
    assert squared_euclidean([0, 0], [3, 4]) == 25
    assert squared_euclidean([1.5, -2], [1.5, -2]) == 0
    assert squared_euclidean([1, 1, 1], [2, 3, 4]) == 14
    with pytest.raises(ValueError):
        squared_euclidean([1, 2], [1, 2, 3])


def test_global_ordering_tie_rule():
    o = compute_global_ordering(np.array([[0.0, 0], [2, 2]]))
    np.testing.assert_array_equal(o.global_centroid, [1, 1])
    np.testing.assert_array_equal(o.distances, [2, 2])
    assert o.sorted_indices.tolist() == [0, 1]


def test_global_ordering_1d():
    # mean 5/3: (5/3)^2, (7/3)^2, (2/3)^2
    o = compute_global_ordering(np.array([[0.0], [4], [1]]))
    np.testing.assert_allclose(o.global_centroid, [5 / 3])
    np.testing.assert_allclose(o.distances, [25 / 9, 49 / 9, 4 / 9])
    assert o.sorted_indices.tolist() == [1, 0, 2]


def test_global_ordering_single_row():
    o = compute_global_ordering(np.array([[3.0, -1]]))
    np.testing.assert_array_equal(o.global_centroid, [3, -1])
    assert o.distances.tolist() == [0]
    assert o.sorted_indices.tolist() == [0]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(1, 4), st.randoms(use_true_random=False))
def test_ordering_permutation_equivariant(n, d, random):
    x = np.random.default_rng(random.randint(0, 2**32)).normal(size=(n, d))
    perm = np.array(random.sample(range(n), n))
    a, b = compute_global_ordering(x), compute_global_ordering(x[perm])
    np.testing.assert_allclose(b.distances, a.distances[perm], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(np.sort(b.distances), np.sort(a.distances), rtol=1e-12, atol=1e-12)
    assert np.all(np.diff(a.distances[a.sorted_indices]) <= 0)


@pytest.mark.parametrize("n, k, sizes", [(7, 3, [3, 3, 1]), (6, 6, [6])])
def test_base_batch_sizes(n, k, sizes):
    plan = build_base_batches(identity_ordering(n), k)
    assert [b.size for b in plan.batches] == sizes
    assert plan.variant == "base"


def test_base_first_batch_is_farthest():
    order = np.array([5, 17, 2, 9, 0, 11, 1, 3, 4, 6, 7, 8, 10, 12, 13, 14, 15, 16])
    o = GlobalOrdering(np.zeros(1), np.zeros(18), order)
    plan = build_base_batches(o, 6)
    assert plan.batch_count == 3
    assert plan.batches[0].tolist() == [5, 17, 2, 9, 0, 11]


def test_k_out_of_range():
    with pytest.raises(ValueError):
        build_base_batches(identity_ordering(3), 4)
    with pytest.raises(ValueError):
        build_interleaved_batches(identity_ordering(3), 0)


def test_interleaved_divisible():
    order = build_interleaved_batches(identity_ordering(18), 6).order()
    assert order.tolist() == [0, 3, 6, 9, 12, 15, 1, 4, 7, 10, 13, 16, 2, 5, 8, 11, 14, 17]


def test_interleaved_not_divisible():
    order = build_interleaved_batches(identity_ordering(22), 6).order()
    assert order.tolist() == [0, 3, 6, 10, 14, 18, 1, 4, 7, 11, 15, 19,
                              2, 5, 8, 12, 16, 20, 9, 13, 17, 21]


def test_interleaved_k_equals_n():
    o = compute_global_ordering(np.random.default_rng(0).normal(size=(9, 2)))
    np.testing.assert_array_equal(build_interleaved_batches(o, 9).order(), o.sorted_indices)


def test_category_example():
    # A = a1..a5 (ids 0..4), B = b1..b4 (ids 5..8), already in sorted order
    order = np.array([0, 5, 1, 6, 2, 7, 3, 8, 4])
    o = GlobalOrdering(np.zeros(1), np.zeros(9), order)
    cats = CategorySpec(np.array([0] * 5 + [1] * 4))
    plan = build_category_batches(o, 3, cats)
    assert plan.order().tolist() == [0, 1, 2, 5, 6, 7, 3, 4, 8]
    assert [b.tolist() for b in plan.batches] == [[0, 1, 2], [5, 6, 7], [3, 4, 8]]


def test_category_single_group_is_base():
    o = compute_global_ordering(np.random.default_rng(1).normal(size=(11, 3)))
    cats = CategorySpec(np.zeros(11, dtype=int))
    np.testing.assert_array_equal(build_category_batches(o, 4, cats).order(),
                                  build_base_batches(o, 4).order())


def test_category_divisible_all_homogeneous():
    rng = np.random.default_rng(2)
    labels = rng.permutation(np.repeat([0, 1, 2], [6, 9, 3]))
    o = compute_global_ordering(rng.normal(size=(18, 2)))
    plan = build_category_batches(o, 3, CategorySpec(labels))
    for b in plan.batches:
        assert len(set(labels[b].tolist())) == 1


def check_plan(plan, n, k):
    b = -(-n // k)
    assert plan.batch_count == b
    assert all(x.size == k for x in plan.batches[:-1])
    assert plan.batches[-1].size == n - (b - 1) * k
    assert sorted(plan.order().tolist()) == list(range(n))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))),
       st.integers(1, 5), st.integers(0, 2**31))
def test_plan_invariants(nk, g, seed):
    n, k = nk
    rng = np.random.default_rng(seed)
    o = compute_global_ordering(rng.normal(size=(n, 2)))
    labels = rng.integers(g, size=n)
    labels = np.unique(labels, return_inverse=True)[1]
    cats = CategorySpec(labels)
    for plan in (build_base_batches(o, k), build_interleaved_batches(o, k),
                 build_category_batches(o, k, cats)):
        check_plan(plan, n, k)

    # full blocks come first and each is single-category
    plan = build_category_batches(o, k, cats)
    n_full_blocks = sum(np.count_nonzero(labels == c) // k for c in range(cats.n_categories))
    for b in plan.batches[:n_full_blocks]:
        assert np.unique(labels[b]).size == 1
    assert sorted(labels[plan.order()].tolist()) == sorted(labels.tolist())

    if n % k == 0:
        # one object from each distance stratum per batch
        q = n // k
        rank = np.empty(n, dtype=int)
        rank[o.sorted_indices] = np.arange(n)
        for b in build_interleaved_batches(o, k).batches:
            assert sorted((rank[b] // q).tolist()) == list(range(k))


def test_interleave_positions_is_permutation():
    for n in range(1, 30):
        for k in range(1, n + 1):
            assert sorted(interleave_positions(n, k).tolist()) == list(range(n))


def test_resolve_variant():
    assert resolve_variant("auto", 80, 10) == "interleaved"
    assert resolve_variant("auto", 81, 10) == "base"
    assert resolve_variant("auto", 81, 10, has_categories=True) == "category"
    assert resolve_variant("base", 8, 8) == "base"
    with pytest.raises(ValueError):
        resolve_variant("fancy", 8, 2)
    with pytest.raises(ValueError):
        build_batches(identity_ordering(4), 2, "category")
