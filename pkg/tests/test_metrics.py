import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cltree.metrics import (
    DistanceSpec,
    DistanceUndefined,
    MetricError,
    Prototype,
    REUndefined,
    cluster_distance,
    distance,
    prototype,
    relative_error,
    sum_squares,
)

from conftest import numeric_dataset


def spec_for(ds, weights=None, normalization="none"):
    return DistanceSpec(
        dims=tuple(range(len(ds.schema))), weights=weights, normalization=normalization
    ).freeze(ds)


# ---------------------------------------------------------------------------
# distance


def test_distance_zero_on_equal():
    ds = numeric_dataset([1.5], [2.5])
    s = spec_for(ds)
    assert distance(ds.examples[0], ds.examples[0], s) == 0.0


def test_distance_three_four_five():
    ds = numeric_dataset([0.0, 3.0], [0.0, 4.0])
    s = spec_for(ds)
    assert distance(ds.examples[0], ds.examples[1], s) == pytest.approx(5.0)


def test_distance_missing_dim_rescaled():
    ds = numeric_dataset([0.0, 3.0], [None, 7.0])
    s = spec_for(ds)
    d = distance(ds.examples[0], ds.examples[1], s)
    assert d == pytest.approx(math.sqrt(9.0 * 2 / 1))


def test_distance_no_common_dim_is_undefined():
    ds = numeric_dataset([1.0, None], [None, 2.0])
    s = spec_for(ds)
    with pytest.raises(DistanceUndefined):
        distance(ds.examples[0], ds.examples[1], s)


def test_distance_requires_frozen_stats():
    s = DistanceSpec(dims=(0,), normalization="minmax")
    ds = numeric_dataset([1.0, 2.0])
    with pytest.raises(MetricError, match="not frozen"):
        distance(ds.examples[0], ds.examples[1], s)


@given(
    st.lists(st.floats(-50, 50), min_size=2, max_size=2),
    st.lists(st.floats(-50, 50), min_size=2, max_size=2),
)
def test_distance_symmetric_nonnegative(xs, ys):
    ds = numeric_dataset([xs[0], ys[0]], [xs[1], ys[1]])
    s = spec_for(ds)
    a, b = ds.examples
    d1, d2 = distance(a, b, s), distance(b, a, s)
    assert d1 == d2 >= 0.0
    if xs == ys:
        assert d1 == 0.0


def test_weight_scaling_scales_distance():
    ds = numeric_dataset([0.0, 3.0], [0.0, 4.0])
    base = spec_for(ds)
    scaled = spec_for(ds, weights=(4.0, 4.0))
    d0 = distance(ds.examples[0], ds.examples[1], base)
    d1 = distance(ds.examples[0], ds.examples[1], scaled)
    assert d1 == pytest.approx(2.0 * d0)


# ---------------------------------------------------------------------------
# prototype / cluster distance


def test_prototype_of_singleton_is_the_example():
    ds = numeric_dataset([4.0], [7.0])
    s = spec_for(ds)
    p = prototype([ds.examples[0]], s)
    assert p.means == (4.0, 7.0)
    assert p.support == (1, 1)


def test_prototype_mean():
    ds = numeric_dataset([1.0, 3.0])
    s = spec_for(ds)
    assert prototype(list(ds.examples), s).means == (2.0,)


def test_prototype_skips_missing():
    ds = numeric_dataset([1.0, None, 4.0])
    s = spec_for(ds)
    p = prototype(list(ds.examples), s)
    assert p.means == (2.5,)
    assert p.support == (2,)


def test_prototype_empty_cluster_rejected():
    ds = numeric_dataset([1.0])
    with pytest.raises(MetricError, match="empty"):
        prototype([], spec_for(ds))


def test_cluster_distance_hand_example():
    ds = numeric_dataset([0.0, 2.0, 8.0, 10.0], [0.0, 0.0, 0.0, 0.0])
    s = spec_for(ds)
    c1 = [ds.examples[0], ds.examples[1]]
    c2 = [ds.examples[2], ds.examples[3]]
    assert cluster_distance(c1, c2, s) == pytest.approx(8.0)
    assert cluster_distance(c1, c1, s) == 0.0


def test_cluster_distance_singletons_is_example_distance():
    ds = numeric_dataset([0.0, 3.0], [0.0, 4.0])
    s = spec_for(ds)
    assert cluster_distance([ds.examples[0]], [ds.examples[1]], s) == pytest.approx(
        distance(ds.examples[0], ds.examples[1], s)
    )


# ---------------------------------------------------------------------------
# sum of squares


def test_sum_squares_identical_cluster_is_zero():
    ds = numeric_dataset([3.0, 3.0, 3.0])
    assert sum_squares(list(ds.examples), spec_for(ds)) == 0.0


def test_sum_squares_four_points(four_points):
    s = spec_for(four_points)
    assert sum_squares(list(four_points.examples), s) == pytest.approx(68.0)


def test_sum_squares_pair():
    ds = numeric_dataset([0.0, 2.0])
    assert sum_squares(list(ds.examples), spec_for(ds)) == pytest.approx(2.0)


def _random_cluster(rng, n=6, d=2):
    cols = [[rng.uniform(-10, 10) for _ in range(n)] for _ in range(d)]
    return numeric_dataset(*cols)


def test_variance_decomposition_identity():
    rng = random.Random(42)
    for _ in range(60):
        ds = _random_cluster(rng)
        s = spec_for(ds)
        members = list(ds.examples)
        total = sum_squares(members, s)
        n = len(members)
        for r in range(1, n // 2 + 1):
            for left_ids in itertools.combinations(range(n), r):
                left = [members[i] for i in left_ids]
                right = [members[i] for i in range(n) if i not in left_ids]
                between = (len(left) * len(right) / n) * cluster_distance(left, right, s) ** 2
                assert total == pytest.approx(
                    sum_squares(left, s) + sum_squares(right, s) + between, abs=1e-9
                )


# ---------------------------------------------------------------------------
# relative error


def test_relative_error_perfect_predictions():
    ds = numeric_dataset([1.0, 2.0, 3.0])
    s = spec_for(ds)
    predictions = [Prototype(means=(float(e.values[0]),), support=(1,)) for e in ds.examples]
    baseline = prototype(list(ds.examples), s)
    assert relative_error(list(ds.examples), predictions, baseline, s) == 0.0


def test_relative_error_baseline_predictions_are_one():
    ds = numeric_dataset([1.0, 2.0, 4.0])
    s = spec_for(ds)
    baseline = prototype(list(ds.examples), s)
    predictions = [baseline] * 3
    assert relative_error(list(ds.examples), predictions, baseline, s) == pytest.approx(1.0)


def test_relative_error_hand_example():
    ds = numeric_dataset([1.0, 2.0, 3.0])
    s = spec_for(ds)
    predictions = [Prototype(means=(m,), support=(1,)) for m in (1.5, 2.0, 2.5)]
    baseline = Prototype(means=(2.0,), support=(3,))
    assert relative_error(list(ds.examples), predictions, baseline, s) == pytest.approx(0.25)


def test_relative_error_zero_over_zero_is_zero():
    ds = numeric_dataset([2.0, 2.0])
    s = spec_for(ds)
    baseline = prototype(list(ds.examples), s)
    assert relative_error(list(ds.examples), [baseline, baseline], baseline, s) == 0.0


def test_relative_error_undefined_on_zero_baseline():
    ds = numeric_dataset([2.0, 2.0])
    s = spec_for(ds)
    baseline = prototype(list(ds.examples), s)
    bad = [Prototype(means=(9.0,), support=(1,))] * 2
    with pytest.raises(REUndefined):
        relative_error(list(ds.examples), bad, baseline, s)


def test_weight_scaling_leaves_re_unchanged():
    ds = numeric_dataset([1.0, 2.0, 3.0])
    predictions = [Prototype(means=(m,), support=(1,)) for m in (1.5, 2.0, 2.5)]
    baseline = Prototype(means=(2.0,), support=(3,))
    re1 = relative_error(list(ds.examples), predictions, baseline, spec_for(ds))
    re2 = relative_error(list(ds.examples), predictions, baseline, spec_for(ds, weights=(3.0,)))
    assert re1 == pytest.approx(re2)


# ---------------------------------------------------------------------------
# normalization statistics


def test_minmax_freeze_uses_training_ids_only():
    ds = numeric_dataset([0.0, 5.0, 100.0])
    s = DistanceSpec(dims=(0,), normalization="minmax").freeze(ds, ids=[0, 1])
    assert s.offsets == (0.0,)
    assert s.scales == (5.0,)


def test_zscore_freeze():
    ds = numeric_dataset([0.0, 2.0])
    s = DistanceSpec(dims=(0,), normalization="zscore").freeze(ds)
    assert s.offsets == (1.0,)
    assert s.scales == (1.0,)
    assert distance(ds.examples[0], ds.examples[1], s) == pytest.approx(2.0)
