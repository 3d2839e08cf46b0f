import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cltree.induction import (
    InduceConfig,
    InvalidPartition,
    TooFewExamples,
    best_split,
    f_statistic,
    f_test_accept,
    induce_tree,
    score_split,
    sort_into_leaf,
)
from cltree.logic import PathContext, TemplateSet, generate_candidates
from cltree.metrics import DistanceSpec
from cltree.treeio import serialize_tree

from conftest import numeric_dataset


def spec_for(ds, dims=None):
    dims = tuple(range(len(ds.schema))) if dims is None else dims
    return DistanceSpec(dims=dims).freeze(ds)


# ---------------------------------------------------------------------------
# score_split


def test_score_split_four_points(four_points):
    s = spec_for(four_points)
    members = list(four_points.examples)
    stats = score_split(members, (members[:2], members[2:]), s)
    assert stats.ss == pytest.approx(68.0)
    assert stats.ss_l == pytest.approx(2.0)
    assert stats.ss_r == pytest.approx(2.0)
    assert stats.inter_distance == pytest.approx(8.0)
    assert stats.n == 4


def test_score_split_unbalanced(four_points):
    s = spec_for(four_points)
    members = list(four_points.examples)
    stats = score_split(members, (members[:1], members[1:]), s)
    assert stats.inter_distance == pytest.approx(abs(0.0 - 20.0 / 3.0))


def test_score_split_identical_sides_zero_distance():
    ds = numeric_dataset([4.0, 4.0, 4.0, 4.0])
    members = list(ds.examples)
    stats = score_split(members, (members[:2], members[2:]), spec_for(ds))
    assert stats.inter_distance == 0.0


def test_score_split_rejects_empty_side(four_points):
    members = list(four_points.examples)
    with pytest.raises(InvalidPartition):
        score_split(members, (members, []), spec_for(four_points))


def test_score_split_rejects_non_partition(four_points):
    members = list(four_points.examples)
    with pytest.raises(InvalidPartition):
        score_split(members, (members[:2], members[1:]), spec_for(four_points))


def test_score_split_weighted_mode(four_points):
    s = spec_for(four_points)
    members = list(four_points.examples)
    stats = score_split(members, (members[:2], members[2:]), s, mode="weighted_between_ss")
    assert stats.score == pytest.approx((2 * 2 / 4) * 8.0**2)


# ---------------------------------------------------------------------------
# best_split


def candidates_for(ds, ids):
    return generate_candidates(PathContext(), TemplateSet(), ds, ids)


def test_best_split_four_points(four_points):
    members = list(four_points.examples)
    cands = candidates_for(four_points, range(4))
    test, stats = best_split(members, cands, spec_for(four_points))
    assert (test.attr, test.op, test.value) == (0, "<=", 5.0)
    assert stats.inter_distance == pytest.approx(8.0)


def test_best_split_none_when_nothing_survives():
    ds = numeric_dataset([1.0, 1.0, 1.0])
    cands = candidates_for(ds, range(3))
    assert cands == []
    assert best_split(list(ds.examples), cands, spec_for(ds)) is None


def test_best_split_min_leaf_filters(four_points):
    members = list(four_points.examples)
    cands = candidates_for(four_points, range(4))
    test, _ = best_split(members, cands, spec_for(four_points), min_leaf=2)
    assert test.value == 5.0  # the 1/3 splits are discarded
    assert best_split(members, cands, spec_for(four_points), min_leaf=3) is None


def test_best_split_tie_breaks_to_earlier_candidate():
    # arithmetic progression: every threshold scores an inter-distance of
    # exactly 4.0, so the first candidate in canonical order must win
    ds = numeric_dataset([0.0, 2.0, 4.0, 6.0])
    cands = candidates_for(ds, range(4))
    assert [c.value for c in cands] == [1.0, 3.0, 5.0]
    test, stats = best_split(list(ds.examples), cands, spec_for(ds))
    assert stats.inter_distance == 4.0
    assert test.value == 1.0


def brute_force_best(members, cands, spec, mode="inter_distance", min_leaf=1):
    from cltree.logic import apply_test

    best = None
    for idx, cand in enumerate(cands):
        left = [e for e in members if apply_test(cand, e) is not None]
        right = [e for e in members if apply_test(cand, e) is None]
        if len(left) < min_leaf or len(right) < min_leaf or not left or not right:
            continue
        try:
            stats = score_split(members, (left, right), spec, mode)
        except InvalidPartition:
            continue
        if best is None or stats.score > best[1].score:
            best = (cand, stats, idx)
    return best


@pytest.mark.parametrize("mode", ["inter_distance", "weighted_between_ss"])
def test_best_split_matches_exhaustive_oracle(mode):
    rng = random.Random(9)
    for trial in range(60):
        n = rng.randint(2, 8)
        d = rng.randint(1, 2)
        cols = [[float(rng.randint(0, 6)) for _ in range(n)] for _ in range(d)]
        ds = numeric_dataset(*cols)
        spec = spec_for(ds)
        members = list(ds.examples)
        cands = candidates_for(ds, range(n))
        expected = brute_force_best(members, cands, spec, mode)
        got = best_split(members, cands, spec, mode)
        if expected is None:
            assert got is None
        else:
            assert got is not None
            assert got[0] == expected[0]
            assert got[1].score == pytest.approx(expected[1].score, abs=1e-12)


def test_best_split_matches_oracle_under_missing_data():
    # the induction fast path and the public score_split must agree on
    # missing-data clusters too (both exclude members that share no
    # defined dimension with the side prototype)
    rng = random.Random(19)
    for _ in range(40):
        n = rng.randint(3, 8)
        cols = [
            [None if rng.random() < 0.3 else float(rng.randint(0, 5)) for _ in range(n)]
            for _ in range(2)
        ]
        ds = numeric_dataset(*cols)
        spec = spec_for(ds)
        members = list(ds.examples)
        cands = candidates_for(ds, range(n))
        expected = brute_force_best(members, cands, spec)
        got = best_split(members, cands, spec)
        if expected is None:
            assert got is None
        else:
            assert got is not None and got[0] == expected[0]
            assert got[1].score == pytest.approx(expected[1].score, abs=1e-12)


def test_weighted_mode_minimizes_within_ss_on_class_indicator():
    # maximizing weighted between-SS over a class-indicator dimension is
    # the same thing as minimizing within-cluster class variance
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(4, 8)
        xs = [float(rng.randint(0, 5)) for _ in range(n)]
        cls = [float(rng.randint(0, 1)) for _ in range(n)]
        ds = numeric_dataset(xs, cls)
        spec = spec_for(ds, dims=(1,))  # class indicator only
        members = list(ds.examples)
        cands = [c for c in candidates_for(ds, range(n)) if c.attr == 0]
        got = best_split(members, cands, spec, "weighted_between_ss")
        expected = None
        from cltree.logic import apply_test

        for idx, cand in enumerate(cands):
            left = [e for e in members if apply_test(cand, e) is not None]
            right = [e for e in members if apply_test(cand, e) is None]
            if not left or not right:
                continue
            stats = score_split(members, (left, right), spec)
            within = stats.ss_l + stats.ss_r
            if expected is None or within < expected[1] - 1e-12:
                expected = (cand, within)
        if got is None:
            assert expected is None
        else:
            assert expected is not None
            got_stats = score_split(
                members,
                (
                    [e for e in members if apply_test(got[0], e) is not None],
                    [e for e in members if apply_test(got[0], e) is None],
                ),
                spec,
            )
            assert got_stats.ss_l + got_stats.ss_r == pytest.approx(expected[1], abs=1e-9)


# ---------------------------------------------------------------------------
# F statistic and test


def test_f_statistic_hand_values():
    assert f_statistic(68.0, 2.0, 2.0, 4) == pytest.approx(68.0 / 3.0 / 2.0, abs=1e-9)
    assert f_statistic(6.0, 2.5, 1.5, 4) == pytest.approx(1.0)
    assert f_statistic(64.0, 0.0, 0.0, 4) == math.inf
    assert f_statistic(0.0, 0.0, 0.0, 4) == 0.0


def test_f_statistic_clamps_grown_dispersion():
    assert f_statistic(5.0, 4.0, 2.0, 5) == 0.0


def test_f_statistic_needs_three_examples():
    with pytest.raises(TooFewExamples):
        f_statistic(1.0, 0.5, 0.2, 2)


def test_f_test_accept_edges():
    assert f_test_accept(math.inf, 4, 0.01)
    assert not f_test_accept(1.0, 10, 0.01)
    # F=11.333 at (3,2) df is below the 1% critical value 99.17
    assert not f_test_accept(11.3333333, 4, 0.01)
    assert f_test_accept(11.3333333, 4, 0.25)
    with pytest.raises(TooFewExamples):
        f_test_accept(2.0, 2, 0.05)


# ---------------------------------------------------------------------------
# induce_tree


def config_for(ds, **kw):
    kw.setdefault("distance", DistanceSpec(dims=tuple(range(len(ds.schema)))))
    return InduceConfig(**kw)


def test_single_example_gives_single_leaf():
    ds = numeric_dataset([3.0])
    tree = induce_tree(ds, [0], config_for(ds))
    assert tree.size == 1 and tree.root.is_leaf


def test_four_points_alpha_001_stays_leaf(four_points):
    tree = induce_tree(four_points, range(4), config_for(four_points, f_alpha=0.01))
    assert tree.size == 1


def test_four_points_alpha_025_splits_once(four_points):
    tree = induce_tree(four_points, range(4), config_for(four_points, f_alpha=0.25))
    assert tree.size == 3
    assert tree.root.test.value == 5.0
    assert tree.nodes[tree.root.yes].is_leaf and tree.nodes[tree.root.no].is_leaf


def test_leaves_partition_training_ids():
    rng = random.Random(17)
    cols = [[rng.uniform(0, 10) for _ in range(30)] for _ in range(2)]
    ds = numeric_dataset(*cols)
    tree = induce_tree(ds, range(30), config_for(ds, f_alpha=0.5))
    leaf_ids = [i for i in tree.leaf_indices()]
    union = []
    for i in leaf_ids:
        union.extend(tree.nodes[i].cluster)
    assert sorted(union) == list(range(30))
    # replaying tests sorts every example into the leaf holding it
    for e in ds.examples:
        leaf, _ = sort_into_leaf(tree, e)
        assert e.id in tree.nodes[leaf].cluster


def test_child_clusters_partition_parent():
    rng = random.Random(3)
    ds = numeric_dataset([rng.uniform(0, 10) for _ in range(24)])
    tree = induce_tree(ds, range(24), config_for(ds, f_alpha=0.5))
    for node in tree.nodes:
        if not node.is_leaf:
            yes_c = tree.nodes[node.yes].cluster
            no_c = tree.nodes[node.no].cluster
            assert sorted(yes_c + no_c) == sorted(node.cluster)


def test_monotone_stopping_in_alpha():
    rng = random.Random(23)
    for _ in range(10):
        ds = numeric_dataset([rng.uniform(0, 10) for _ in range(16)])
        sizes = [
            induce_tree(ds, range(16), config_for(ds, f_alpha=a)).size
            for a in (0.01, 0.1, 0.5, 1.0)
        ]
        assert sizes == sorted(sizes)


def test_min_leaf_respected():
    rng = random.Random(2)
    ds = numeric_dataset([rng.uniform(0, 10) for _ in range(20)])
    tree = induce_tree(ds, range(20), config_for(ds, f_alpha=1.0, min_leaf=4))
    for i in tree.leaf_indices():
        assert len(tree.nodes[i].cluster) >= 4


def test_max_depth_respected():
    rng = random.Random(2)
    ds = numeric_dataset([rng.uniform(0, 10) for _ in range(20)])
    tree = induce_tree(ds, range(20), config_for(ds, f_alpha=1.0, max_depth=2))
    assert all(n.depth <= 2 for n in tree.nodes)
    for n in tree.nodes:
        if n.depth == 2:
            assert n.is_leaf


@given(
    st.lists(
        st.tuples(st.floats(-50, 50), st.floats(-50, 50)),
        min_size=1,
        max_size=14,
    ),
    st.sampled_from([0.05, 0.5, 1.0]),
)
@settings(max_examples=60, deadline=None)
def test_leaf_partition_property(points, alpha):
    ds = numeric_dataset([p[0] for p in points], [p[1] for p in points])
    tree = induce_tree(ds, range(len(points)), config_for(ds, f_alpha=alpha, min_leaf=1))
    union = sorted(i for leaf in tree.leaf_indices() for i in tree.nodes[leaf].cluster)
    assert union == list(range(len(points)))
    for e in ds.examples:
        leaf, _ = sort_into_leaf(tree, e)
        assert e.id in tree.nodes[leaf].cluster


def test_induction_deterministic(four_points):
    rng = random.Random(11)
    ds = numeric_dataset([rng.uniform(0, 10) for _ in range(25)],
                         [rng.uniform(0, 5) for _ in range(25)])
    cfg = config_for(ds, f_alpha=0.5)
    t1 = induce_tree(ds, range(25), cfg)
    t2 = induce_tree(ds, range(25), cfg)
    assert serialize_tree(t1) == serialize_tree(t2)


def test_frozen_root_normalization_is_used_throughout():
    ds = numeric_dataset([0.0, 1.0, 10.0, 11.0, 20.0, 21.0])
    spec = DistanceSpec(dims=(0,), normalization="minmax")
    tree = induce_tree(ds, range(6), InduceConfig(distance=spec, f_alpha=1.0))
    assert tree.spec.offsets == (0.0,)
    assert tree.spec.scales == (21.0,)
