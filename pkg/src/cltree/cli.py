"""Command-line entry point: train / predict / prune / xval / experiment.

Exit codes: 0 ok, 1 usage or configuration error, 2 data error,
3 internal error.  All randomness flows from --seed; running any
subcommand twice with the same config yields byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, prepare_run
from .dataset import AttributeSchema, DataError, encode_nominals, parse_csv
from .evaluation import (
    _evaluate_fold,
    _fold_tree,
    crossvalidate,
    missing_info_experiment,
    multi_attribute_experiment,
    pruning_sweep,
)
from .logic import TemplateError
from .metrics import DistanceSpec, MetricError
from .pruning import CLASSIFICATION, CLUSTERING, PruningError, prune
from .treeio import TreeFormatError, load_tree, render_tree, serialize_tree


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_common(parser):
    parser.add_argument("--config", default=None, help="run-configuration file")
    parser.add_argument("--data", default=None, help="CSV data file")
    parser.add_argument("--interpretations", default=None, help="interpretation blocks file")
    parser.add_argument("--mapping", default=None, help="attribute-mapping sidecar")
    parser.add_argument("--templates", default=None, help="test-template file")
    parser.add_argument("--class", dest="class_attr", default=None, help="class attribute name")
    parser.add_argument("--nominal", default=None,
                        help="columns to force nominal (names or *), for integer-coded data")
    parser.add_argument("--dims", default=None, help="distance dimensions (names or *)")
    parser.add_argument("--weights", default=None, help="per-dimension weights or 'equal'")
    parser.add_argument("--norm", default=None, choices=["none", "minmax", "zscore"])
    parser.add_argument("--mode", default=None, choices=["supervised", "unsupervised"])
    parser.add_argument("--split-score", dest="split_score", default=None,
                        choices=["inter_distance", "weighted_between_ss"])
    parser.add_argument("--f-alpha", dest="f_alpha", default=None, type=float)
    parser.add_argument("--min-leaf", dest="min_leaf", default=None, type=int)
    parser.add_argument("--max-depth", dest="max_depth", default=None)
    parser.add_argument("--max-conjunction", dest="max_conjunction", default=None, type=int)
    parser.add_argument("--prune", default=None, choices=["on", "off"])
    parser.add_argument("--validation-fraction", dest="validation_fraction",
                        default=None, type=float)
    parser.add_argument("--prune-ties", dest="prune_ties", action="store_const", const="on",
                        default=None)
    parser.add_argument("--seed", default=None, type=int)
    parser.add_argument("--jobs", default=None, type=int)
    parser.add_argument("--emit", default=None, help="text,structured")
    parser.add_argument("--out", "-o", default=None, help="output path prefix")


def build_parser() -> _Parser:
    parser = _Parser(prog="cltree", description="Top-down induction of clustering trees")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="induce (and optionally prune) a tree")
    _add_common(p_train)

    p_predict = sub.add_parser("predict", help="sort examples into a stored tree")
    p_predict.add_argument("--tree", required=True)
    p_predict.add_argument("--data", default=None, help="examples to sort (CSV)")
    p_predict.add_argument("--interpretations", default=None)
    p_predict.add_argument("--mapping", default=None)
    p_predict.add_argument("--out", "-o", default="run")

    p_prune = sub.add_parser("prune", help="validation-set pruning of a stored tree")
    p_prune.add_argument("--tree", required=True)
    p_prune.add_argument("--data", default=None, help="validation examples (CSV)")
    p_prune.add_argument("--interpretations", default=None)
    p_prune.add_argument("--mapping", default=None)
    p_prune.add_argument("--measure", default=None, choices=["classification", "clustering"])
    p_prune.add_argument("--prune-ties", dest="prune_ties", action="store_true")
    p_prune.add_argument("--out", "-o", default="run")

    p_xval = sub.add_parser("xval", help="k-fold cross-validation")
    _add_common(p_xval)
    p_xval.add_argument("--k", default=None, type=int, help="fold count; 0 = leave-one-out")

    p_exp = sub.add_parser("experiment", help="run a named experiment")
    _add_common(p_exp)
    p_exp.add_argument("--name", required=True,
                       choices=["pruning_sweep", "missing_info", "multi_attribute"])
    p_exp.add_argument("--k", default=None, type=int)
    p_exp.add_argument("--fractions", default="0.15,0.25,0.35")
    p_exp.add_argument("--levels", default="1.0,0.5,0.25,0.1")
    p_exp.add_argument("--exempt-class", dest="exempt_class", action="store_true")
    return parser


def _overrides(args) -> dict:
    keys = [
        "data", "interpretations", "mapping", "templates", "class_attr", "nominal", "dims", "weights",
        "norm", "mode", "split_score", "f_alpha", "min_leaf", "max_depth", "max_conjunction",
        "prune", "validation_fraction", "prune_ties", "seed", "jobs", "emit", "out", "k",
    ]
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _emit_report(cfg: RunConfig, stem: str, text: str, structured: dict) -> list[str]:
    written = []
    formats = cfg.emit.split(",")
    if "text" in formats:
        path = f"{cfg.out}.{stem}.txt"
        Path(path).write_text(text)
        written.append(path)
    if "structured" in formats:
        path = f"{cfg.out}.{stem}.json"
        Path(path).write_text(json.dumps(structured, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def cmd_train(cfg: RunConfig) -> int:
    run = prepare_run(cfg)
    ds = run.dataset
    ids = list(range(len(ds)))
    tree, unpruned, train_ids, valid_ids = _fold_tree(
        ds, ids, run.induce, cfg.mode, cfg.seed, 0, cfg.prune and len(ids) >= 2,
        cfg.validation_fraction, cfg.prune_ties, cfg.stratify_validation,
    )
    Path(f"{cfg.out}.tree").write_text(serialize_tree(tree))
    if "text" in cfg.emit.split(","):
        Path(f"{cfg.out}.tree.txt").write_text(render_tree(tree))
    _, _, _, train_re = _evaluate_fold(tree, ds, ds, train_ids, None)
    re_text = "--" if train_re is None else f"{train_re:.4f}"
    print(f"tree written to {cfg.out}.tree: {tree.size} nodes "
          f"({len(tree.leaf_indices())} leaves), training RE = {re_text}")
    return 0


def _schema_for_cells(schema) -> tuple[AttributeSchema, ...]:
    """Reconstruct a parse schema (with nominal labels) from an encoded one."""
    out = []
    for attr in schema:
        if attr.values is not None:
            out.append(AttributeSchema(name=attr.name, kind="nominal", values=attr.values,
                                       role=attr.role))
        else:
            out.append(attr)
    return tuple(out)


def _examples_for_tree(args, tree):
    """Load prediction/validation examples conforming to a stored tree."""
    if (args.data is None) == (args.interpretations is None):
        raise ConfigError("exactly one of --data / --interpretations required")
    if args.data is not None:
        text = Path(args.data).read_text()
        return encode_nominals(parse_csv(text, schema=_schema_for_cells(tree.schema)))
    from .config import load_dataset, RunConfig as _RC

    raw = _RC(interpretations=args.interpretations, mapping=args.mapping)
    ds = load_dataset(raw)
    if tuple(a.name for a in ds.schema) != tuple(a.name for a in tree.schema):
        raise DataError("interpretation mapping does not produce the tree's attributes")
    return ds


def cmd_predict(args) -> int:
    tree = load_tree(Path(args.tree).read_text())
    ds = _examples_for_tree(args, tree)
    class_idx = ds.class_index
    lines = ["id,leaf,prediction"]
    from .evaluation import predict as predict_one

    for ex in ds.examples:
        leaf, labels, _ = predict_one(tree, ex)
        prediction = ""
        if labels is not None and class_idx is not None and labels.majority_class is not None:
            prediction = tree.schema[class_idx].format_cell(labels.majority_class)
        lines.append(f"{ex.id},{leaf},{prediction}")
    out_path = f"{args.out}.predictions.csv"
    Path(out_path).write_text("\n".join(lines) + "\n")
    print(f"predictions for {len(ds)} examples written to {out_path}")
    return 0


def cmd_prune(args) -> int:
    tree = load_tree(Path(args.tree).read_text())
    ds = _examples_for_tree(args, tree)
    if args.measure is None:
        labeled = any(n.labels is not None for n in tree.nodes)
        has_class = any(a.role == "class" for a in tree.schema)
        measure = CLASSIFICATION if labeled and has_class else CLUSTERING
    else:
        measure = CLASSIFICATION if args.measure == "classification" else CLUSTERING
    pruned = prune(tree, list(ds.examples), measure, prune_ties=args.prune_ties)
    Path(f"{args.out}.tree").write_text(serialize_tree(pruned))
    print(f"pruned {tree.size} -> {pruned.size} nodes; written to {args.out}.tree")
    return 0


def cmd_xval(cfg: RunConfig) -> int:
    run = prepare_run(cfg)
    ds = run.dataset
    k = len(ds) if cfg.k == 0 else cfg.k
    if not (2 <= k <= len(ds)):
        raise ConfigError(f"fold count must lie in [2, {len(ds)}] (or 0 for leave-one-out), got {cfg.k}")
    report = crossvalidate(
        ds, k, run.induce, cfg.seed, cfg.mode,
        prune_trees=cfg.prune,
        validation_fraction=cfg.validation_fraction,
        prune_ties=cfg.prune_ties,
        stratify_validation=cfg.stratify_validation,
        class_boundaries=cfg.class_boundaries or None,
        jobs=cfg.jobs,
    )
    written = _emit_report(cfg, "report", report.to_text(), report.to_dict())
    acc = "--" if report.mean_accuracy is None else f"{report.mean_accuracy:.4f}"
    re = "--" if report.mean_re is None else f"{report.mean_re:.4f}"
    print(f"{k}-fold: accuracy={acc} RE={re} mean_nodes={report.mean_nodes:.1f}; "
          f"wrote {', '.join(written)}")
    return 0


def cmd_experiment(cfg: RunConfig, args) -> int:
    run = prepare_run(cfg)
    ds = run.dataset
    k = len(ds) if cfg.k == 0 else cfg.k
    if args.name == "pruning_sweep":
        fractions = [float(t) for t in args.fractions.split(",") if t]
        report = pruning_sweep(ds, fractions, k, run.induce, cfg.seed, cfg.mode)
        written = _emit_report(cfg, "pruning_sweep", report.to_text(), report.to_dict())
    elif args.name == "multi_attribute":
        report = multi_attribute_experiment(
            ds, k, run.induce, cfg.seed, cfg.mode,
            prune_trees=cfg.prune, validation_fraction=cfg.validation_fraction,
            prune_ties=cfg.prune_ties,
        )
        written = _emit_report(cfg, "multi_attribute", report.to_text(), report.to_dict())
    else:
        levels = [float(t) for t in args.levels.split(",") if t]
        if ds.class_index is None:
            raise ConfigError("missing_info experiment needs a class attribute")
        class_only = DistanceSpec(dims=(ds.class_index,),
                                  normalization=run.induce.distance.normalization)
        specs = [class_only, run.induce.distance]
        names = ["class_only", run.induce.distance.describe(ds.schema).split(" ")[0]]
        report = missing_info_experiment(
            ds, levels, specs, k, run.induce, cfg.seed,
            spec_names=names, exempt_class=args.exempt_class,
        )
        written = _emit_report(cfg, "missing_info", report.to_text(), report.to_dict())
    print(f"experiment {args.name}: wrote {', '.join(written)}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "predict":
            return cmd_predict(args)
        if args.command == "prune":
            return cmd_prune(args)
        cfg = load_config(args.config, _overrides(args))
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "xval":
            if cfg.k < 0:
                raise ConfigError(f"invalid fold count {cfg.k}")
            return cmd_xval(cfg)
        return cmd_experiment(cfg, args)
    except (ConfigError, TemplateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, TreeFormatError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (MetricError, PruningError, ValueError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
