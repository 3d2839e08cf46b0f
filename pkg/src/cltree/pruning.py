"""Validation-set post-pruning.

A subtree is replaced by a leaf whenever the collapsed tree scores
strictly better on held-out validation data; passes repeat bottom-up
until nothing changes, which makes the result independent of traversal
order for the strict rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dataset import MISSING, Example
from .induction import ClusteringTree, compact, sort_into_leaf
from .metrics import DistanceUndefined, distance


class PruningError(ValueError):
    pass


@dataclass(frozen=True)
class QualityMeasure:
    """Higher-is-better tree quality on a validation set.

    ``classification`` scores majority-label accuracy; the clustering /
    regression task scores 1/(RE + epsilon) with leaf prototypes as
    predictions and the root prototype as baseline.
    """

    task: str  # classification | clustering_regression
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.task not in ("classification", "clustering_regression"):
            raise PruningError(f"unknown quality task {self.task!r}")


CLASSIFICATION = QualityMeasure(task="classification")
CLUSTERING = QualityMeasure(task="clustering_regression")


def split_learn_set(
    ids: Sequence[int],
    validation_fraction: float,
    seed: int,
    classes: Mapping[int, object] | None = None,
):
    """Carve a validation set out of the learning set, reproducibly.

    Uniform random without replacement; the validation size is
    round(n * fraction) clamped so both sides stay non-empty.  With
    ``classes`` the draw is stratified per class value.
    """
    if not (0.0 < validation_fraction < 1.0):
        raise PruningError("validation_fraction must lie strictly between 0 and 1")
    ids = sorted(ids)
    n = len(ids)
    if n < 2:
        raise PruningError("need at least 2 examples to split off a validation set")
    rng = random.Random(seed)
    if classes is None:
        n_valid = min(max(1, round(n * validation_fraction)), n - 1)
        valid = sorted(rng.sample(ids, n_valid))
    else:
        groups: dict = {}
        for i in ids:
            groups.setdefault(classes.get(i), []).append(i)
        valid = []
        for key in sorted(groups, key=lambda v: (v is None, str(v))):
            group = sorted(groups[key])
            take = round(len(group) * validation_fraction)
            valid.extend(rng.sample(group, min(take, len(group))))
        if not valid:
            valid = [rng.choice(ids)]
        if len(valid) >= n:
            valid = valid[: n - 1]
        valid = sorted(valid)
    valid_set = set(valid)
    train = [i for i in ids if i not in valid_set]
    return train, valid


def tree_quality(tree: ClusteringTree, valid_examples: Sequence[Example], measure: QualityMeasure) -> float:
    """Evaluate a tree on validation examples under the given measure."""
    if not valid_examples:
        raise PruningError("validation set must be non-empty")
    if measure.task == "classification":
        return _classification_quality(tree, valid_examples)
    return _clustering_quality(tree, valid_examples, measure.epsilon)


def _classification_quality(tree, valid_examples):
    class_idx = None
    for j, attr in enumerate(tree.schema):
        if attr.role == "class":
            class_idx = j
    if class_idx is None:
        raise PruningError("classification quality needs a class attribute")
    correct = scored = 0
    for e in valid_examples:
        actual = e.values[class_idx]
        if actual is MISSING:
            continue
        leaf, _ = sort_into_leaf(tree, e)
        labels = tree.nodes[leaf].labels
        if labels is None:
            raise PruningError("tree is unlabeled; assign leaf labels before classification pruning")
        scored += 1
        predicted = labels.majority_class
        if predicted is not None and float(predicted) == float(actual):
            correct += 1
    if scored == 0:
        raise PruningError("no validation example has a class value")
    return correct / scored


def _clustering_quality(tree, valid_examples, epsilon):
    baseline = tree.root.prototype
    num = den = 0.0
    scored = 0
    for e in valid_examples:
        leaf, _ = sort_into_leaf(tree, e)
        try:
            d_pred = distance(e, tree.nodes[leaf].prototype, tree.spec)
            d_base = distance(e, baseline, tree.spec)
        except DistanceUndefined:
            continue
        num += d_pred**2
        den += d_base**2
        scored += 1
    if scored == 0:
        raise PruningError("no validation example defines the tree distance")
    re = 0.0 if den == 0.0 and num == 0.0 else (num / den if den > 0.0 else float("inf"))
    return 1.0 / (re + epsilon)


def _collapse(tree: ClusteringTree, index: int) -> ClusteringTree:
    trial = tree.copy()
    node = trial.nodes[index]
    node.test = None
    node.yes = None
    node.no = None
    node.stats = None
    return trial


def prune(
    tree: ClusteringTree,
    valid_examples: Sequence[Example],
    measure: QualityMeasure,
    prune_ties: bool = False,
) -> ClusteringTree:
    """Collapse every subtree whose removal does not hurt validation quality.

    Strict improvement (Q' > Q) is required; ``prune_ties`` relaxes this
    to Q' >= Q, preferring smaller trees.  The input tree is untouched;
    the result is a compacted copy.
    """
    work = tree.copy()
    changed = True
    while changed:
        changed = False
        internal = sorted(
            (i for i in work.preorder() if not work.nodes[i].is_leaf),
            key=lambda i: -work.nodes[i].depth,
        )
        for index in internal:
            if work.nodes[index].is_leaf:
                continue
            quality = tree_quality(work, valid_examples, measure)
            trial = _collapse(work, index)
            trial_quality = tree_quality(trial, valid_examples, measure)
            if trial_quality > quality or (prune_ties and trial_quality >= quality):
                work = trial
                changed = True
    return compact(work)
