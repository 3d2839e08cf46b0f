"""Top-down induction of clustering trees.

At each node the candidate test that maximizes the distance between the
prototypes of the two resulting clusters is installed, provided the
variance reduction passes an F-test; otherwise the node becomes a leaf.
Trees are binary: a test either succeeds or fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .dataset import MISSING, AttributeSchema, Dataset, Example
from .fdist import f_sf
from .logic import (
    AttributeTest,
    PathContext,
    TemplateSet,
    apply_test,
    generate_candidates,
)
from .metrics import (
    DistanceSpec,
    Prototype,
    SplitStatistics,
    _masked_means,
    _normalize,
    cluster_dispersion,
    prototype,
    raw_matrix,
)


class TooFewExamples(ValueError):
    """F-statistic needs at least 3 examples for positive degrees of freedom."""


class InvalidPartition(ValueError):
    """A split side is empty or the sides do not partition the cluster."""


@dataclass(frozen=True)
class InduceConfig:
    """Everything the induction loop needs besides the data itself."""

    distance: DistanceSpec
    templates: TemplateSet = field(default_factory=TemplateSet)
    split_score: str = "inter_distance"  # or weighted_between_ss
    f_alpha: float = 0.01
    min_leaf: int = 2
    max_depth: int | None = None
    max_conjunction: int = 2
    test_attrs: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.f_alpha <= 1.0):
            raise ValueError("f_alpha must lie in (0, 1]")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be at least 1")
        if self.split_score not in ("inter_distance", "weighted_between_ss"):
            raise ValueError(f"unknown split score {self.split_score!r}")


@dataclass
class Node:
    """One cluster in the hierarchy; internal nodes carry a test and children.

    ``size_hint`` holds the cluster size for trees loaded from disk,
    where member ids are not stored.
    """

    cluster: tuple[int, ...]
    prototype: Prototype
    depth: int
    test: object | None = None
    yes: int | None = None
    no: int | None = None
    stats: SplitStatistics | None = None
    labels: object | None = None
    size_hint: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.test is None

    @property
    def size(self) -> int:
        return len(self.cluster) if self.cluster else (self.size_hint or 0)


@dataclass
class ClusteringTree:
    """Binary clustering tree over a fixed schema; node 0 is the root."""

    schema: tuple[AttributeSchema, ...]
    spec: DistanceSpec
    nodes: list[Node]

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def leaf_indices(self) -> list[int]:
        return [i for i, node in enumerate(self.nodes) if node.is_leaf]

    def internal_indices(self) -> list[int]:
        return [i for i, node in enumerate(self.nodes) if not node.is_leaf]

    def copy(self) -> "ClusteringTree":
        return ClusteringTree(
            schema=self.schema, spec=self.spec, nodes=[replace(n) for n in self.nodes]
        )

    def preorder(self, start: int = 0):
        stack = [start]
        while stack:
            i = stack.pop()
            yield i
            node = self.nodes[i]
            if not node.is_leaf:
                stack.append(node.no)
                stack.append(node.yes)


def compact(tree: ClusteringTree) -> ClusteringTree:
    """Drop unreachable arena entries and renumber nodes in preorder."""
    order = list(tree.preorder())
    remap = {old: new for new, old in enumerate(order)}
    nodes = []
    for old in order:
        node = replace(tree.nodes[old])
        if not node.is_leaf:
            node.yes = remap[node.yes]
            node.no = remap[node.no]
        nodes.append(node)
    return ClusteringTree(schema=tree.schema, spec=tree.spec, nodes=nodes)


def sort_into_leaf(tree: ClusteringTree, example: Example):
    """Replay node tests from the root; returns (leaf index, path binding)."""
    i = 0
    binding: dict = {}
    while not tree.nodes[i].is_leaf:
        node = tree.nodes[i]
        result = apply_test(node.test, example, binding)
        if result is not None:
            binding = result
            i = node.yes
        else:
            i = node.no
    return i, binding


# ---------------------------------------------------------------------------
# Split scoring


def f_statistic(ss: float, ss_l: float, ss_r: float, n: int) -> float:
    """F = (SS/(n-1)) / ((SS_L+SS_R)/(n-2)).

    Returns +inf for a perfect split and 0 for a homogeneous cluster.
    When missing-data rescaling makes SS_L+SS_R exceed SS the value is
    clamped to 0: a split that grows estimated dispersion is never
    significant.
    """
    if n < 3:
        raise TooFewExamples(f"need n >= 3 for the F-statistic, got {n}")
    if ss <= 0.0:
        return 0.0
    within = ss_l + ss_r
    if within == 0.0:
        return math.inf
    if within > ss:
        return 0.0
    return (ss / (n - 1)) / (within / (n - 2))


def f_test_accept(f_value: float, n: int, alpha: float) -> bool:
    """True iff F exceeds the upper-alpha critical value at (n-1, n-2) df."""
    if n < 3:
        raise TooFewExamples(f"need n >= 3 for the F-test, got {n}")
    if math.isinf(f_value):
        return True
    return f_sf(f_value, n - 1, n - 2) < alpha


def _inter_distance(means_l, means_r, weights, n_dims):
    """Rescaled distance between two prototypes given in normalized space."""
    common = ~np.isnan(means_l) & ~np.isnan(means_r)
    k = int(common.sum())
    if k == 0:
        return None
    diff = means_l[common] - means_r[common]
    return math.sqrt(float((weights[common] * diff * diff).sum()) * n_dims / k)


def _split_score(inter, n_l, n_r, mode):
    if mode == "inter_distance":
        return inter
    return (n_l * n_r / (n_l + n_r)) * inter * inter


def _raw_prototype(raw: np.ndarray, mask: np.ndarray) -> Prototype:
    means, support = _masked_means(raw[mask])
    return Prototype(
        means=tuple(None if s == 0 else float(m) for m, s in zip(means, support)),
        support=tuple(int(s) for s in support),
    )


def score_split(cluster: Sequence[Example], partition, spec: DistanceSpec, mode: str = "inter_distance") -> SplitStatistics:
    """Sufficient statistics for one concrete binary partition of a cluster."""
    left, right = partition
    if not left or not right:
        raise InvalidPartition("both sides of a split must be non-empty")
    if (
        len(left) + len(right) != len(cluster)
        or {e.id for e in left} | {e.id for e in right} != {e.id for e in cluster}
    ):
        raise InvalidPartition("sides do not partition the cluster")
    cluster = list(cluster)
    ids_left = {e.id for e in left}
    raw = raw_matrix(cluster, spec)
    normed = _normalize(raw, spec)
    mask = np.array([e.id in ids_left for e in cluster], dtype=bool)
    return _statistics_for_mask(raw, normed, mask, spec, mode)


def _statistics_for_mask(raw, normed, mask, spec, mode) -> SplitStatistics:
    weights = spec.weight_array()
    n = normed.shape[0]
    ss, _, _ = cluster_dispersion(normed, weights)
    ss_l, means_l, _ = cluster_dispersion(normed[mask], weights)
    ss_r, means_r, _ = cluster_dispersion(normed[~mask], weights)
    inter = _inter_distance(means_l, means_r, weights, len(spec.dims))
    if inter is None:
        raise InvalidPartition("side prototypes share no defined dimension")
    n_l = int(mask.sum())
    n_r = n - n_l
    return SplitStatistics(
        n=n,
        ss=ss,
        ss_l=ss_l,
        ss_r=ss_r,
        inter_distance=inter,
        score=_split_score(inter, n_l, n_r, mode),
        proto_l=_raw_prototype(raw, mask),
        proto_r=_raw_prototype(raw, ~mask),
        f=f_statistic(ss, ss_l, ss_r, n) if n >= 3 else None,
    )


def best_split(
    cluster: Sequence[Example],
    candidates: Sequence,
    spec: DistanceSpec,
    mode: str = "inter_distance",
    *,
    min_leaf: int = 1,
    bindings: Sequence[dict] | None = None,
):
    """Pick the candidate maximizing the split score.

    Candidates leaving a side empty or below ``min_leaf`` are discarded,
    as are candidates whose side prototypes share no defined dimension.
    Ties go to the earlier candidate in canonical order.  Returns
    ``(test, statistics)`` or None when nothing survives.
    """
    cluster = list(cluster)
    if not cluster or not candidates:
        return None
    if bindings is None:
        bindings = [{}] * len(cluster)
    n = len(cluster)
    raw = raw_matrix(cluster, spec)
    normed = _normalize(raw, spec)
    weights = spec.weight_array()
    n_dims = len(spec.dims)
    ss, _, _ = cluster_dispersion(normed, weights)

    column_cache: dict[int, np.ndarray] = {}

    def attr_column(j):
        if j not in column_cache:
            column_cache[j] = np.array(
                [np.nan if e.values[j] is MISSING else float(e.values[j]) for e in cluster]
            )
        return column_cache[j]

    best = None  # (score, index, mask, ss_l, ss_r, inter)
    for idx, cand in enumerate(candidates):
        if isinstance(cand, AttributeTest):
            col = attr_column(cand.attr)
            defined = ~np.isnan(col)
            with np.errstate(invalid="ignore"):
                mask = (
                    defined & (col <= cand.value)
                    if cand.op == "<="
                    else defined & (col == cand.value)
                )
        else:
            mask = np.fromiter(
                (apply_test(cand, e, b) is not None for e, b in zip(cluster, bindings)),
                dtype=bool,
                count=n,
            )
        n_l = int(mask.sum())
        n_r = n - n_l
        if n_l < max(1, min_leaf) or n_r < max(1, min_leaf):
            continue
        ss_l, means_l, _ = cluster_dispersion(normed[mask], weights)
        ss_r, means_r, _ = cluster_dispersion(normed[~mask], weights)
        inter = _inter_distance(means_l, means_r, weights, n_dims)
        if inter is None:
            continue
        score = _split_score(inter, n_l, n_r, mode)
        if best is None or score > best[0]:
            best = (score, idx, mask, ss_l, ss_r, inter)
    if best is None:
        return None
    score, idx, mask, ss_l, ss_r, inter = best
    n_l = int(mask.sum())
    stats = SplitStatistics(
        n=n,
        ss=ss,
        ss_l=ss_l,
        ss_r=ss_r,
        inter_distance=inter,
        score=score,
        proto_l=_raw_prototype(raw, mask),
        proto_r=_raw_prototype(raw, ~mask),
        f=f_statistic(ss, ss_l, ss_r, n) if n >= 3 else None,
    )
    return candidates[idx], stats


# ---------------------------------------------------------------------------
# The induction loop


def induce_tree(ds: Dataset, train_ids: Sequence[int], config: InduceConfig) -> ClusteringTree:
    """Grow a clustering tree on the given training examples.

    Fully deterministic for a fixed dataset and config.  Normalization
    statistics are frozen once from the root training set; every split
    in the tree is scored against them.
    """
    ids = sorted(train_ids)
    if not ids:
        raise ValueError("train_ids must be non-empty")
    spec = config.distance
    if spec.offsets is None:
        spec = spec.freeze(ds, ids)
    attrs = list(config.test_attrs) if config.test_attrs is not None else ds.testable_attributes()
    nodes: list[Node] = []

    def build(node_ids, node_bindings, path, depth):
        examples = [ds.examples[i] for i in node_ids]
        index = len(nodes)
        nodes.append(
            Node(cluster=tuple(node_ids), prototype=prototype(examples, spec), depth=depth)
        )
        n = len(node_ids)
        if n < 3 or n < 2 * config.min_leaf:
            return index
        if config.max_depth is not None and depth >= config.max_depth:
            return index
        candidates = generate_candidates(
            path, config.templates, ds, node_ids,
            attrs=attrs, max_conjunction=config.max_conjunction,
        )
        if not candidates:
            return index
        found = best_split(
            examples, candidates, spec, config.split_score,
            min_leaf=config.min_leaf, bindings=node_bindings,
        )
        if found is None:
            return index
        test, stats = found
        if not f_test_accept(stats.f, n, config.f_alpha):
            return index
        yes_ids, yes_bind, no_ids, no_bind = [], [], [], []
        for i, binding in zip(node_ids, node_bindings):
            result = apply_test(test, ds.examples[i], binding)
            if result is not None:
                yes_ids.append(i)
                yes_bind.append(result)
            else:
                no_ids.append(i)
                no_bind.append(binding)
        node = nodes[index]
        node.test = test
        node.stats = stats
        node.yes = build(yes_ids, yes_bind, path.extend(test), depth + 1)
        node.no = build(no_ids, no_bind, path, depth + 1)
        return index

    build(ids, [{} for _ in ids], PathContext(), 0)
    return ClusteringTree(schema=ds.schema, spec=spec, nodes=nodes)
