"""Leaf labeling, prediction, cross-validation and the experiment harness.

Covers the four experiment types: pruning sweeps, accuracy comparison
via cross-validation, multi-attribute prediction, and degradation under
missing information.
"""

from __future__ import annotations

import bisect
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .dataset import MISSING, Dataset, Example
from .induction import ClusteringTree, InduceConfig, induce_tree, sort_into_leaf
from .metrics import DistanceSpec, DistanceUndefined, distance
from .pruning import CLASSIFICATION, CLUSTERING, prune, split_learn_set


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class LeafLabels:
    """Per-attribute predictions of one node, from the labeled examples in it.

    Categorical attributes (nominal or encoded nominal) get their modal
    value, ties broken toward the first value in the value list; numeric
    attributes get the mean.  Attributes with no labeled value fall back
    to the nearest labeled ancestor, as does a node with no labeled
    example at all.
    """

    per_attribute: tuple
    support: tuple[int, ...]
    majority_class: object | None
    n_labeled: int


def _modal_value(cells):
    counts: dict = {}
    for c in cells:
        counts[c] = counts.get(c, 0) + 1
    best = None
    for value in sorted(counts):
        if best is None or counts[value] > counts[best]:
            best = value
    return best


def _node_labels(ds: Dataset, member_ids, parent: LeafLabels | None) -> LeafLabels:
    members = [ds.examples[i] for i in member_ids]
    per_attribute = []
    support = []
    for j, attr in enumerate(ds.schema):
        cells = [e.values[j] for e in members if e.values[j] is not MISSING]
        support.append(len(cells))
        if not cells:
            per_attribute.append(parent.per_attribute[j] if parent is not None else None)
        elif attr.is_categorical:
            per_attribute.append(float(_modal_value(float(c) for c in cells)))
        else:
            per_attribute.append(sum(float(c) for c in cells) / len(cells))
    class_idx = ds.class_index
    majority = per_attribute[class_idx] if class_idx is not None else None
    return LeafLabels(
        per_attribute=tuple(per_attribute),
        support=tuple(support),
        majority_class=majority,
        n_labeled=len(members),
    )


def assign_leaf_labels(tree: ClusteringTree, ds: Dataset, labeled_ids: Sequence[int]) -> ClusteringTree:
    """Label every node from the labeled examples its cluster contains.

    Internal nodes are labeled too so that pruning can collapse them
    without recomputation.  Raises when no example is labeled at all.
    """
    labeled = set(labeled_ids)
    if not labeled:
        raise EvaluationError("zero labeled examples overall")
    if not labeled & set(tree.root.cluster):
        raise EvaluationError("no labeled example reaches the tree")
    out = tree.copy()
    parents = {0: None}
    for i in out.preorder():
        node = out.nodes[i]
        parent_labels = parents[i]
        members = [e for e in node.cluster if e in labeled]
        if members:
            node.labels = _node_labels(ds, members, parent_labels)
        else:
            node.labels = parent_labels
        if not node.is_leaf:
            parents[node.yes] = node.labels
            parents[node.no] = node.labels
    return out


def predict(tree: ClusteringTree, example: Example):
    """Sort one example down the tree; returns (leaf id, labels, prototype)."""
    leaf, _ = sort_into_leaf(tree, example)
    node = tree.nodes[leaf]
    return leaf, node.labels, node.prototype


# ---------------------------------------------------------------------------
# Cross-validation


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_test: int
    n_scored: int
    n_correct: int
    accuracy: float | None
    re: float | None
    n_nodes: int
    n_leaves: int


@dataclass(frozen=True)
class EvalReport:
    """Aggregated cross-validation outcome; every mean carries its fold count."""

    k: int
    seed: int
    mode: str
    folds: tuple[FoldResult, ...]
    config_echo: str

    @property
    def mean_accuracy(self) -> float | None:
        values = [f.accuracy for f in self.folds if f.accuracy is not None]
        return sum(values) / len(values) if values else None

    @property
    def mean_re(self) -> float | None:
        values = [f.re for f in self.folds if f.re is not None]
        return sum(values) / len(values) if values else None

    @property
    def mean_nodes(self) -> float:
        return sum(f.n_nodes for f in self.folds) / len(self.folds)

    @property
    def mean_leaves(self) -> float:
        return sum(f.n_leaves for f in self.folds) / len(self.folds)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "mode": self.mode,
            "config": self.config_echo,
            "mean_accuracy": self.mean_accuracy,
            "mean_re": self.mean_re,
            "mean_nodes": self.mean_nodes,
            "mean_leaves": self.mean_leaves,
            "folds": [
                {
                    "fold": f.fold,
                    "n_test": f.n_test,
                    "n_scored": f.n_scored,
                    "n_correct": f.n_correct,
                    "accuracy": f.accuracy,
                    "re": f.re,
                    "n_nodes": f.n_nodes,
                    "n_leaves": f.n_leaves,
                }
                for f in self.folds
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"{self.k}-fold cross-validation (mode={self.mode}, seed={self.seed})",
            f"config: {self.config_echo}",
            "fold  n_test  accuracy      RE  nodes  leaves",
        ]
        for f in self.folds:
            acc = "   --" if f.accuracy is None else f"{f.accuracy:5.3f}"
            re = "    --" if f.re is None else f"{f.re:6.3f}"
            lines.append(
                f"{f.fold:4d}  {f.n_test:6d}     {acc}  {re}  {f.n_nodes:5d}  {f.n_leaves:6d}"
            )
        acc = "--" if self.mean_accuracy is None else f"{self.mean_accuracy:.3f}"
        re = "--" if self.mean_re is None else f"{self.mean_re:.3f}"
        lines.append(f"mean  accuracy={acc}  RE={re}  nodes={self.mean_nodes:.1f}")
        return "\n".join(lines) + "\n"


def make_folds(ids: Sequence[int], k: int, seed: int, classes: Mapping[int, object] | None = None):
    """Partition ids into k test folds, stratified when classes are given."""
    ids = sorted(ids)
    n = len(ids)
    if not (2 <= k <= n):
        raise EvaluationError(f"k must lie in [2, {n}], got {k}")
    rng = random.Random(f"{seed}:folds")
    if classes is None:
        order = list(ids)
        rng.shuffle(order)
    else:
        groups: dict = {}
        for i in ids:
            groups.setdefault(classes.get(i), []).append(i)
        order = []
        for key in sorted(groups, key=lambda v: (v is None, str(v))):
            group = sorted(groups[key])
            rng.shuffle(group)
            order.extend(group)
    folds: list[list[int]] = [[] for _ in range(k)]
    for pos, i in enumerate(order):
        folds[pos % k].append(i)
    return [sorted(f) for f in folds]


def _mode_spec_and_attrs(ds: Dataset, config: InduceConfig, mode: str):
    """Class handling: unsupervised drops the class from the distance dims;
    the class is never offered as a node test."""
    class_idx = ds.class_index
    dims = list(config.distance.dims)
    weights = list(config.distance.weights) if config.distance.weights is not None else None
    if mode == "unsupervised" and class_idx is not None and class_idx in dims:
        pos = dims.index(class_idx)
        dims.pop(pos)
        if weights is not None:
            weights.pop(pos)
    if not dims:
        raise EvaluationError("distance has no dimensions left after excluding the class")
    spec = DistanceSpec(
        dims=tuple(dims),
        weights=tuple(weights) if weights is not None else None,
        normalization=config.distance.normalization,
    )
    attrs = list(config.test_attrs) if config.test_attrs is not None else ds.testable_attributes()
    attrs = [a for a in attrs if a != class_idx]
    if not attrs and len(config.templates) == 0:
        raise EvaluationError("nothing to test on: no attributes and no templates")
    return spec, tuple(attrs)


def _discretize(value, boundaries):
    return bisect.bisect_right(list(boundaries), float(value))


def _fold_tree(ds, learn_ids, config, mode, seed, fold, prune_trees, validation_fraction,
               prune_ties, stratify_validation):
    """Induce (and optionally prune) the labeled tree for one fold."""
    class_idx = ds.class_index
    spec, attrs = _mode_spec_and_attrs(ds, config, mode)
    if prune_trees:
        classes = None
        if stratify_validation and mode == "supervised" and class_idx is not None:
            classes = {i: ds.examples[i].values[class_idx] for i in learn_ids}
        train_ids, valid_ids = split_learn_set(
            learn_ids, validation_fraction, seed=_derive_seed(seed, "valsplit", fold), classes=classes
        )
    else:
        train_ids, valid_ids = sorted(learn_ids), []
    fold_config = replace(config, distance=spec.freeze(ds, train_ids), test_attrs=attrs)
    tree = induce_tree(ds, train_ids, fold_config)
    unpruned = tree
    if class_idx is not None:
        labeled = [i for i in train_ids if ds.examples[i].values[class_idx] is not MISSING]
        if labeled:
            tree = assign_leaf_labels(tree, ds, labeled)
            unpruned = tree
    if prune_trees and valid_ids:
        class_attr = ds.schema[class_idx] if class_idx is not None else None
        measure = (
            CLASSIFICATION
            if mode == "supervised" and class_attr is not None and class_attr.is_categorical
            else CLUSTERING
        )
        tree = prune(tree, [ds.examples[i] for i in valid_ids], measure, prune_ties)
    return tree, unpruned, train_ids, valid_ids


def _derive_seed(seed, label, index) -> str:
    return f"{seed}:{label}:{index}"


def _evaluate_fold(tree, ds, eval_ds, test_ids, class_boundaries):
    class_idx = ds.class_index
    scored = correct = 0
    num = den = 0.0
    re_pairs = 0
    for i in test_ids:
        routed = ds.examples[i]
        leaf, labels, proto = predict(tree, routed)
        if class_idx is not None:
            actual = eval_ds.examples[i].values[class_idx]
            if actual is not MISSING:
                scored += 1
                predicted = labels.majority_class if labels is not None else None
                if predicted is not None:
                    if class_boundaries:
                        match = _discretize(predicted, class_boundaries) == _discretize(
                            actual, class_boundaries
                        )
                    else:
                        match = float(predicted) == float(actual)
                    if match:
                        correct += 1
        try:
            d_pred = distance(eval_ds.examples[i], proto, tree.spec)
            d_base = distance(eval_ds.examples[i], tree.root.prototype, tree.spec)
        except DistanceUndefined:
            continue
        num += d_pred**2
        den += d_base**2
        re_pairs += 1
    accuracy = correct / scored if scored else None
    if re_pairs == 0:
        re = None
    elif den == 0.0:
        re = 0.0 if num == 0.0 else None
    else:
        re = num / den
    return scored, correct, accuracy, re


def _xval_fold(args):
    (ds, eval_ds, k, config, seed, mode, fold, test_ids, learn_ids, prune_trees,
     validation_fraction, prune_ties, stratify_validation, class_boundaries) = args
    tree, _, _, _ = _fold_tree(
        ds, learn_ids, config, mode, seed, fold, prune_trees, validation_fraction,
        prune_ties, stratify_validation,
    )
    scored, correct, accuracy, re = _evaluate_fold(tree, ds, eval_ds, test_ids, class_boundaries)
    return FoldResult(
        fold=fold,
        n_test=len(test_ids),
        n_scored=scored,
        n_correct=correct,
        accuracy=accuracy,
        re=re,
        n_nodes=tree.size,
        n_leaves=len(tree.leaf_indices()),
    )


def crossvalidate(
    ds: Dataset,
    k: int,
    config: InduceConfig,
    seed: int,
    mode: str = "unsupervised",
    *,
    prune_trees: bool = True,
    validation_fraction: float = 0.25,
    prune_ties: bool = False,
    stratify_validation: bool = False,
    class_boundaries: Sequence[float] | None = None,
    eval_ds: Dataset | None = None,
    jobs: int = 1,
) -> EvalReport:
    """k-fold cross-validation; k equal to the dataset size is leave-one-out.

    Folds are stratified by class in supervised mode and uniform in
    unsupervised mode.  Unsupervised induction never sees the class: it
    is excluded from the distance dimensions and from candidate tests,
    and only used to label leaves afterwards.  ``eval_ds`` allows
    scoring against uncorrupted truth when ``ds`` itself is degraded.
    """
    if mode not in ("supervised", "unsupervised"):
        raise EvaluationError(f"unknown mode {mode!r}")
    eval_ds = ds if eval_ds is None else eval_ds
    ids = list(range(len(ds)))
    effective_spec, _ = _mode_spec_and_attrs(ds, config, mode)
    class_idx = ds.class_index
    classes = None
    if mode == "supervised" and class_idx is not None:
        classes = {i: ds.examples[i].values[class_idx] for i in ids}
    folds = make_folds(ids, k, seed, classes)
    tasks = []
    for fold, test_ids in enumerate(folds):
        in_test = set(test_ids)
        learn_ids = [i for i in ids if i not in in_test]
        tasks.append(
            (ds, eval_ds, k, config, seed, mode, fold, test_ids, learn_ids, prune_trees,
             validation_fraction, prune_ties, stratify_validation,
             tuple(class_boundaries) if class_boundaries else None)
        )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_xval_fold, tasks))
    else:
        results = [_xval_fold(t) for t in tasks]
    results.sort(key=lambda r: r.fold)
    return EvalReport(
        k=k,
        seed=seed,
        mode=mode,
        folds=tuple(results),
        config_echo=effective_spec.describe(ds.schema),
    )


# ---------------------------------------------------------------------------
# Multi-attribute prediction


@dataclass(frozen=True)
class AttributeAccuracy:
    name: str
    evaluated: int
    correct: int
    default_correct: int

    @property
    def accuracy(self) -> float | None:
        return self.correct / self.evaluated if self.evaluated else None

    @property
    def default_accuracy(self) -> float | None:
        return self.default_correct / self.evaluated if self.evaluated else None


def multi_attribute_report(tree: ClusteringTree, ds: Dataset, test_ids: Sequence[int],
                           eval_ds: Dataset | None = None) -> list[AttributeAccuracy]:
    """Per-attribute prediction counts for test examples sorted into the tree.

    Covers categorical descriptive attributes (the modal-value targets);
    MISSING actual values are excluded.  The default column counts the
    root-label (global majority) prediction.
    """
    if tree.root.labels is None:
        raise EvaluationError("tree is unlabeled; assign leaf labels first")
    eval_ds = ds if eval_ds is None else eval_ds
    covered = [
        j
        for j, attr in enumerate(ds.schema)
        if attr.is_categorical and attr.role == "descriptive" and attr.kind != "ignored"
    ]
    evaluated = {j: 0 for j in covered}
    correct = {j: 0 for j in covered}
    default_correct = {j: 0 for j in covered}
    root_labels = tree.root.labels
    for i in test_ids:
        leaf, labels, _ = predict(tree, ds.examples[i])
        for j in covered:
            actual = eval_ds.examples[i].values[j]
            if actual is MISSING:
                continue
            evaluated[j] += 1
            predicted = labels.per_attribute[j] if labels is not None else None
            if predicted is not None and float(predicted) == float(actual):
                correct[j] += 1
            default = root_labels.per_attribute[j]
            if default is not None and float(default) == float(actual):
                default_correct[j] += 1
    return [
        AttributeAccuracy(
            name=ds.schema[j].name,
            evaluated=evaluated[j],
            correct=correct[j],
            default_correct=default_correct[j],
        )
        for j in covered
    ]


@dataclass(frozen=True)
class MultiAttributeReport:
    rows: tuple[AttributeAccuracy, ...]
    k: int
    seed: int

    @property
    def mean_accuracy(self) -> float:
        values = [r.accuracy for r in self.rows if r.accuracy is not None]
        return sum(values) / len(values) if values else 0.0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "mean_accuracy": self.mean_accuracy,
            "attributes": [
                {
                    "name": r.name,
                    "evaluated": r.evaluated,
                    "default": r.default_accuracy,
                    "accuracy": r.accuracy,
                }
                for r in self.rows
            ],
        }

    def to_text(self) -> str:
        lines = ["attribute             default  accuracy"]
        for r in self.rows:
            default = "  --" if r.default_accuracy is None else f"{100 * r.default_accuracy:5.1f}%"
            acc = "  --" if r.accuracy is None else f"{100 * r.accuracy:5.1f}%"
            lines.append(f"{r.name:20s}  {default:>7s}  {acc:>8s}")
        lines.append(f"{'mean':20s}  {'':>7s}  {100 * self.mean_accuracy:5.1f}%")
        return "\n".join(lines) + "\n"


def multi_attribute_experiment(
    ds: Dataset,
    k: int,
    config: InduceConfig,
    seed: int,
    mode: str = "unsupervised",
    *,
    prune_trees: bool = True,
    validation_fraction: float = 0.25,
    prune_ties: bool = False,
) -> MultiAttributeReport:
    """Cross-validated multi-attribute prediction, micro-averaged over folds."""
    ids = list(range(len(ds)))
    folds = make_folds(ids, k, seed)
    totals: dict[str, list[int]] = {}
    order: list[str] = []
    for fold, test_ids in enumerate(folds):
        in_test = set(test_ids)
        learn_ids = [i for i in ids if i not in in_test]
        tree, _, train_ids, _ = _fold_tree(
            ds, learn_ids, config, mode, seed, fold, prune_trees, validation_fraction,
            prune_ties, False,
        )
        if tree.root.labels is None:
            tree = assign_leaf_labels(tree, ds, train_ids)
        for row in multi_attribute_report(tree, ds, test_ids):
            if row.name not in totals:
                totals[row.name] = [0, 0, 0]
                order.append(row.name)
            totals[row.name][0] += row.evaluated
            totals[row.name][1] += row.correct
            totals[row.name][2] += row.default_correct
    rows = tuple(
        AttributeAccuracy(name=name, evaluated=totals[name][0], correct=totals[name][1],
                          default_correct=totals[name][2])
        for name in order
    )
    return MultiAttributeReport(rows=rows, k=k, seed=seed)


# ---------------------------------------------------------------------------
# Missing-information experiments


def corrupt_missing(ds: Dataset, keep_prob, seed, attrs: Sequence[int] | None = None) -> Dataset:
    """Independently keep each targeted cell with its probability, else MISSING.

    ``keep_prob`` is a single probability or a mapping attribute-index ->
    probability.  Fact sets and non-targeted attributes are untouched.
    """
    if isinstance(keep_prob, Mapping):
        probs = dict(keep_prob)
        targeted = sorted(probs)
    else:
        targeted = sorted(attrs) if attrs is not None else [
            j for j, a in enumerate(ds.schema) if a.kind != "ignored"
        ]
        probs = {j: float(keep_prob) for j in targeted}
    for j, p in probs.items():
        if not (0.0 <= p <= 1.0):
            raise EvaluationError(f"keep probability for attribute {j} out of [0,1]: {p}")
    rng = random.Random(f"{seed}:corrupt")
    examples = []
    for ex in ds.examples:
        cells = list(ex.values)
        for j in targeted:
            if cells[j] is not MISSING and rng.random() >= probs[j]:
                cells[j] = MISSING
        examples.append(Example(id=ex.id, values=tuple(cells), facts=ex.facts, weight=ex.weight))
    return Dataset(schema=ds.schema, examples=tuple(examples))


@dataclass(frozen=True)
class MissingInfoReport:
    levels: tuple[float, ...]
    spec_names: tuple[str, ...]
    accuracies: tuple[tuple[float | None, ...], ...]  # [level][spec]
    k: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "specs": list(self.spec_names),
            "rows": [
                {"available": lvl, "accuracy": list(row)}
                for lvl, row in zip(self.levels, self.accuracies)
            ],
        }

    def to_text(self) -> str:
        header = "available  " + "  ".join(f"{name:>12s}" for name in self.spec_names)
        lines = [header]
        for lvl, row in zip(self.levels, self.accuracies):
            cells = "  ".join(
                f"{'--':>12s}" if a is None else f"{a:12.3f}" for a in row
            )
            lines.append(f"{100 * lvl:8.0f}%  {cells}")
        return "\n".join(lines) + "\n"


def missing_info_experiment(
    ds: Dataset,
    levels: Sequence[float],
    specs: Sequence[DistanceSpec],
    k: int,
    config: InduceConfig,
    seed: int,
    spec_names: Sequence[str] | None = None,
    corrupt_attrs: Sequence[int] | None = None,
    exempt_class: bool = False,
) -> MissingInfoReport:
    """Accuracy grid over (availability level, distance spec).

    The corrupted attributes default to the union of all spec dimensions
    plus the class; class information then goes missing for learning and
    leaf labeling alike, while scoring uses the uncorrupted truth.
    Distances here may include the class (that is the point of the
    class-only column), so induction runs in supervised mode; the class
    is still never offered as a node test.
    """
    class_idx = ds.class_index
    if corrupt_attrs is None:
        targets = set()
        for spec in specs:
            targets.update(spec.dims)
        if class_idx is not None:
            targets.add(class_idx)
        corrupt_attrs = sorted(targets)
    if exempt_class and class_idx is not None:
        corrupt_attrs = [j for j in corrupt_attrs if j != class_idx]
    names = tuple(spec_names) if spec_names else tuple(
        ",".join(ds.schema[j].name for j in spec.dims) for spec in specs
    )
    grid = []
    for li, level in enumerate(levels):
        corrupted = (
            ds if level >= 1.0 else corrupt_missing(ds, level, _derive_seed(seed, "level", li), corrupt_attrs)
        )
        row = []
        for spec in specs:
            run_config = replace(config, distance=spec)
            report = crossvalidate(
                corrupted, k, run_config, seed, mode="supervised",
                prune_trees=False, eval_ds=ds,
            )
            row.append(report.mean_accuracy)
        grid.append(tuple(row))
    return MissingInfoReport(
        levels=tuple(levels), spec_names=names, accuracies=tuple(grid), k=k, seed=seed
    )


# ---------------------------------------------------------------------------
# Pruning sweep


@dataclass(frozen=True)
class PruningSweepRow:
    fraction: float
    accuracy_before: float | None
    accuracy_after: float | None
    nodes_before: float
    nodes_after: float


@dataclass(frozen=True)
class PruningSweepReport:
    rows: tuple[PruningSweepRow, ...]
    k: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "rows": [
                {
                    "validation_fraction": r.fraction,
                    "accuracy_before": r.accuracy_before,
                    "accuracy_after": r.accuracy_after,
                    "nodes_before": r.nodes_before,
                    "nodes_after": r.nodes_after,
                }
                for r in self.rows
            ],
        }

    def to_text(self) -> str:
        lines = ["fraction  acc_before  acc_after  nodes_before  nodes_after"]
        for r in self.rows:
            before = "   --" if r.accuracy_before is None else f"{r.accuracy_before:5.3f}"
            after = "   --" if r.accuracy_after is None else f"{r.accuracy_after:5.3f}"
            lines.append(
                f"{r.fraction:8.2f}  {before:>10s}  {after:>9s}  {r.nodes_before:12.1f}  {r.nodes_after:11.1f}"
            )
        return "\n".join(lines) + "\n"


def pruning_sweep(
    ds: Dataset,
    fractions: Sequence[float],
    k: int,
    config: InduceConfig,
    seed: int,
    mode: str = "unsupervised",
) -> PruningSweepReport:
    """Accuracy and size before/after pruning across validation fractions."""
    ids = list(range(len(ds)))
    rows = []
    for fraction in fractions:
        folds = make_folds(ids, k, seed)
        acc_b, acc_a, nodes_b, nodes_a = [], [], [], []
        for fold, test_ids in enumerate(folds):
            in_test = set(test_ids)
            learn_ids = [i for i in ids if i not in in_test]
            pruned, unpruned, _, _ = _fold_tree(
                ds, learn_ids, config, mode, seed, fold, True, fraction, False, False
            )
            s_b, c_b, a_b, _ = _evaluate_fold(unpruned, ds, ds, test_ids, None)
            s_a, c_a, a_a, _ = _evaluate_fold(pruned, ds, ds, test_ids, None)
            if a_b is not None:
                acc_b.append(a_b)
            if a_a is not None:
                acc_a.append(a_a)
            nodes_b.append(unpruned.size)
            nodes_a.append(pruned.size)
        rows.append(
            PruningSweepRow(
                fraction=fraction,
                accuracy_before=sum(acc_b) / len(acc_b) if acc_b else None,
                accuracy_after=sum(acc_a) / len(acc_a) if acc_a else None,
                nodes_before=sum(nodes_b) / len(nodes_b),
                nodes_after=sum(nodes_a) / len(nodes_a),
            )
        )
    return PruningSweepReport(rows=tuple(rows), k=k, seed=seed)
