from pathlib import Path

import pytest

from cltree.dataset import AttributeSchema, Dataset, Example

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def numeric_dataset(*columns, class_values=None):
    """Build a dataset from parallel numeric columns named a, b, c, ..."""
    n = len(columns[0])
    schema = [AttributeSchema(name=chr(ord("a") + j), kind="numeric") for j in range(len(columns))]
    examples = []
    for i in range(n):
        cells = tuple(None if col[i] is None else float(col[i]) for col in columns)
        examples.append(Example(id=i, values=cells))
    return Dataset(schema=tuple(schema), examples=tuple(examples))


@pytest.fixture
def four_points():
    """The one-dimensional {0, 2, 8, 10} cluster used throughout."""
    return numeric_dataset([0, 2, 8, 10])


@pytest.fixture
def iris_path():
    path = DATA_DIR / "iris.csv"
    if not path.exists():
        pytest.skip("bundled iris.csv missing")
    return path
