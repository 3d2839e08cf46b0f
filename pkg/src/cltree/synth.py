"""Synthetic dataset generators for experiments and tests."""

from __future__ import annotations

import random

from .dataset import AttributeSchema, Dataset, Example, encode_nominals


def class_correlated_dataset(
    n: int = 240,
    n_attrs: int = 3,
    n_noise: int = 4,
    class_sep: float = 3.0,
    noise: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Two-class dataset with class-correlated and pure-noise attributes.

    Attribute ``x<j>`` of an example of class c is drawn from
    N(c * class_sep, noise), so each carries the class signal on its
    own; the ``noise<j>`` attributes are N(0, 1) distractors that give a
    badly-informed split heuristic something wrong to choose.  The class
    is returned already encoded (numeric 0/1 with value-list provenance).
    """
    rng = random.Random(f"{seed}:synth")
    schema = [AttributeSchema(name="class", kind="nominal", values=("neg", "pos"), role="class")]
    schema += [AttributeSchema(name=f"x{j + 1}", kind="numeric") for j in range(n_attrs)]
    schema += [AttributeSchema(name=f"noise{j + 1}", kind="numeric") for j in range(n_noise)]
    examples = []
    for i in range(n):
        c = i % 2
        cells = [c]
        cells += [rng.gauss(c * class_sep, noise) for _ in range(n_attrs)]
        cells += [rng.gauss(0.0, 1.0) for _ in range(n_noise)]
        examples.append(Example(id=i, values=tuple(cells)))
    return encode_nominals(Dataset(schema=tuple(schema), examples=tuple(examples)))


def two_cluster_regression_dataset(n: int = 8, gap: float = 10.0, noise: float = 0.5,
                                   seed: int = 0) -> Dataset:
    """Small numeric dataset with one descriptive attribute and a numeric target.

    The target takes two well-separated levels depending on whether the
    descriptive attribute is below or above its midpoint; used to
    validate the regression path against exhaustive tree search.
    """
    rng = random.Random(f"{seed}:regr")
    schema = (
        AttributeSchema(name="x", kind="numeric"),
        AttributeSchema(name="y", kind="numeric", role="class"),
    )
    examples = []
    for i in range(n):
        low = i < n // 2
        x = rng.uniform(0.0, 1.0) if low else rng.uniform(2.0, 3.0)
        y = rng.gauss(0.0 if low else gap, noise)
        examples.append(Example(id=i, values=(x, y)))
    return Dataset(schema=schema, examples=tuple(examples))
