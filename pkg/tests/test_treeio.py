import pytest

from cltree.dataset import parse_csv, encode_nominals, set_class
from cltree.evaluation import assign_leaf_labels
from cltree.induction import InduceConfig, induce_tree, sort_into_leaf
from cltree.logic import parse_template_spec
from cltree.metrics import DistanceSpec
from cltree.treeio import TreeFormatError, load_tree, render_tree, serialize_tree


def labeled_iris_tree(iris_path):
    ds = encode_nominals(set_class(parse_csv(iris_path.read_text()), "class"))
    spec = DistanceSpec(dims=tuple(ds.numeric_descriptive()))
    cfg = InduceConfig(distance=spec, split_score="weighted_between_ss", f_alpha=0.05)
    tree = induce_tree(ds, range(len(ds)), cfg)
    return assign_leaf_labels(tree, ds, range(len(ds))), ds


def test_round_trip_preserves_text(iris_path):
    tree, _ = labeled_iris_tree(iris_path)
    text = serialize_tree(tree)
    assert serialize_tree(load_tree(text)) == text


def test_loaded_tree_predicts_identically(iris_path):
    tree, ds = labeled_iris_tree(iris_path)
    loaded = load_tree(serialize_tree(tree))
    for e in ds.examples[::17]:
        assert sort_into_leaf(loaded, e)[0] == sort_into_leaf(tree, e)[0]


def test_literal_tests_round_trip():
    from cltree.dataset import Dataset, Example, GroundFact, AttributeSchema

    schema = (AttributeSchema(name="v", kind="numeric"),)
    examples = (
        Example(id=0, values=(1.0,), facts=(GroundFact("atom", ("a1", "c")),)),
        Example(id=1, values=(1.0,), facts=(GroundFact("atom", ("a2", "c")),)),
        Example(id=2, values=(0.0,), facts=(GroundFact("atom", ("b1", "n")),)),
        Example(id=3, values=(0.0,), facts=(GroundFact("atom", ("b2", "n")),)),
    )
    ds = Dataset(schema=schema, examples=examples)
    cfg = InduceConfig(
        distance=DistanceSpec(dims=(0,)),
        templates=parse_template_spec("test atom(-at, #el)"),
        f_alpha=1.0,
        min_leaf=1,
        test_attrs=(),
    )
    tree = induce_tree(ds, range(4), cfg)
    assert not tree.root.is_leaf
    text = serialize_tree(tree)
    loaded = load_tree(text)
    assert serialize_tree(loaded) == text
    assert sort_into_leaf(loaded, examples[0])[0] != sort_into_leaf(loaded, examples[2])[0]


def test_render_shows_yes_no_layout(four_points):
    spec = DistanceSpec(dims=(0,))
    tree = induce_tree(four_points, range(4), InduceConfig(distance=spec, f_alpha=0.25))
    art = render_tree(tree)
    assert "a <= 5 ?" in art
    assert "+--yes:" in art and "+--no:" in art


def test_load_rejects_other_formats():
    with pytest.raises(TreeFormatError):
        load_tree("not a tree\n")
