"""Tabular and relational example collections.

An example is a row of a typed attribute table, a set of ground facts
(one small relational database per example), or both at once.  Datasets
are immutable after construction: parsing returns fresh objects and all
transformations (encoding, corruption) build new datasets.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

#: Cell sentinel for an unknown value.  CSV input spells it ``?``.
MISSING = None

Cell = "float | int | None"  # MISSING cells are None


class DataError(ValueError):
    """Malformed input data or schema violation."""


@dataclass(frozen=True)
class AttributeSchema:
    """One attribute: name, kind and role.

    ``values`` is the nominal value list, in code order.  It survives
    nominal-to-numeric encoding so that reports can print the original
    labels; a numeric attribute with a non-None ``values`` tuple is an
    encoded nominal.
    """

    name: str
    kind: str = "numeric"  # numeric | nominal | ignored
    values: tuple[str, ...] | None = None
    role: str = "descriptive"  # descriptive | class | key

    def __post_init__(self):
        if self.kind not in ("numeric", "nominal", "ignored"):
            raise DataError(f"unknown attribute kind {self.kind!r}")
        if self.role not in ("descriptive", "class", "key"):
            raise DataError(f"unknown attribute role {self.role!r}")
        if self.kind == "nominal":
            if not self.values:
                raise DataError(f"nominal attribute {self.name!r} needs a non-empty value list")
        if self.values is not None and len(set(self.values)) != len(self.values):
            raise DataError(f"duplicate values in attribute {self.name!r}")

    @property
    def is_categorical(self) -> bool:
        """True for nominal attributes and encoded nominals alike."""
        return self.kind == "nominal" or (self.kind == "numeric" and self.values is not None)

    def format_cell(self, cell) -> str:
        if cell is MISSING:
            return "?"
        if self.values is not None:
            code = int(cell)
            if 0 <= code < len(self.values) and float(code) == float(cell):
                return self.values[code]
        return repr(float(cell)) if isinstance(cell, float) else repr(cell)


@dataclass(frozen=True)
class GroundFact:
    """A ground atom ``functor(arg1, ..., argK)``; arguments carry no variables."""

    functor: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ",".join(_format_constant(a) for a in self.args))


@dataclass(frozen=True)
class Example:
    """One example: attribute cells plus an optional interpretation (fact set).

    ``weight`` is part of the data model for future use; every shipped
    experiment runs with weight 1.
    """

    id: int
    values: tuple
    facts: tuple[GroundFact, ...] = ()
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise DataError(f"example {self.id}: weight must be positive")


@dataclass(frozen=True)
class Dataset:
    """A schema plus the examples conforming to it, ids 0..n-1 in order."""

    schema: tuple[AttributeSchema, ...]
    examples: tuple[Example, ...]

    def __post_init__(self):
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise DataError("attribute names must be unique within a schema")
        if sum(1 for a in self.schema if a.role == "class") > 1:
            raise DataError("at most one attribute may have role=class")
        for k, ex in enumerate(self.examples):
            if ex.id != k:
                raise DataError(f"example ids must be 0..n-1 in order, got {ex.id} at {k}")
            if len(ex.values) != len(self.schema):
                raise DataError(f"example {k}: {len(ex.values)} cells for {len(self.schema)} attributes")
            for attr, cell in zip(self.schema, ex.values):
                if cell is MISSING:
                    continue
                if attr.kind == "nominal":
                    if not isinstance(cell, int) or not (0 <= cell < len(attr.values)):
                        raise DataError(f"example {k}: invalid code {cell!r} for nominal {attr.name!r}")

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def attribute_index(self, name: str) -> int:
        for i, a in enumerate(self.schema):
            if a.name == name:
                return i
        raise DataError(f"no attribute named {name!r}")

    @property
    def class_index(self) -> int | None:
        for i, a in enumerate(self.schema):
            if a.role == "class":
                return i
        return None

    def column(self, i: int) -> list:
        return [ex.values[i] for ex in self.examples]

    def testable_attributes(self) -> list[int]:
        """Indices usable as node tests: not ignored, not a key column."""
        return [i for i, a in enumerate(self.schema) if a.kind != "ignored" and a.role != "key"]

    def numeric_descriptive(self) -> list[int]:
        """Numeric (incl. encoded-nominal) descriptive attributes."""
        return [
            i
            for i, a in enumerate(self.schema)
            if a.kind == "numeric" and a.role == "descriptive"
        ]


def set_class(ds: Dataset, name: str) -> Dataset:
    """Return a dataset where attribute ``name`` has role=class."""
    idx = ds.attribute_index(name)
    schema = tuple(
        replace(a, role="class" if i == idx else ("descriptive" if a.role == "class" else a.role))
        for i, a in enumerate(ds.schema)
    )
    return Dataset(schema=schema, examples=ds.examples)


# ---------------------------------------------------------------------------
# CSV


def _as_lines(text) -> Iterable[str]:
    if isinstance(text, str):
        return io.StringIO(text)
    return text


def _try_number(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def parse_csv(text, schema: Sequence[AttributeSchema] | None = None,
              force_nominal=()) -> Dataset:
    """Parse header-line CSV into a dataset.

    The literal ``?`` is the missing-value token (UCI convention).  With
    an explicit schema the header must match it name-for-name and nominal
    cells must belong to the declared value lists.  Without a schema,
    kinds are inferred: an all-numeric column becomes numeric, anything
    else nominal with values in first-occurrence order.  ``force_nominal``
    (a collection of names, or ``"*"`` for every column) overrides the
    inference for integer-coded nominal data such as the soybean sets.
    """
    reader = csv.reader(_as_lines(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty CSV: header line required")
    header = [h.strip() for h in header]
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"line {lineno}: ragged row ({len(row)} cells, header has {len(header)})")
        rows.append([c.strip() for c in row])

    if schema is not None:
        schema = tuple(schema)
        if [a.name for a in schema] != header:
            raise DataError("CSV header does not match the given schema")
    else:
        if force_nominal == "*":
            force_nominal = set(header)
        else:
            force_nominal = set(force_nominal)
            unknown = force_nominal - set(header)
            if unknown:
                raise DataError(f"force_nominal names not in header: {sorted(unknown)}")
        schema = _infer_schema(header, rows, force_nominal)

    examples = []
    for k, row in enumerate(rows):
        cells = []
        for attr, raw in zip(schema, row):
            if raw == "?":
                cells.append(MISSING)
            elif attr.kind == "numeric":
                num = _try_number(raw)
                if num is None:
                    raise DataError(f"row {k}: cell {raw!r} is not numeric (attribute {attr.name!r})")
                cells.append(num)
            elif attr.kind == "nominal":
                if raw not in attr.values:
                    raise DataError(f"row {k}: unknown nominal value {raw!r} for attribute {attr.name!r}")
                cells.append(attr.values.index(raw))
            else:  # ignored: keep the slot, drop the content
                cells.append(MISSING)
        examples.append(Example(id=k, values=tuple(cells)))
    return Dataset(schema=schema, examples=tuple(examples))


def _infer_schema(header, rows, force_nominal=frozenset()) -> tuple[AttributeSchema, ...]:
    schema = []
    for j, name in enumerate(header):
        col = [row[j] for row in rows if row[j] != "?"]
        all_numeric = all(_try_number(c) is not None for c in col)
        if name not in force_nominal and all_numeric:
            schema.append(AttributeSchema(name=name, kind="numeric"))
            continue
        seen: list[str] = []
        for c in col:
            if c not in seen:
                seen.append(c)
        if all_numeric:
            # integer-coded nominal forced by the caller: keep the codes'
            # numeric order so ordinal structure survives encoding
            seen.sort(key=float)
        schema.append(AttributeSchema(name=name, kind="nominal", values=tuple(seen)))
    return tuple(schema)


def serialize_csv(ds: Dataset) -> str:
    """Inverse of :func:`parse_csv`: header plus one line per example."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([a.name for a in ds.schema])
    for ex in ds.examples:
        row = []
        for attr, cell in zip(ds.schema, ex.values):
            if cell is MISSING:
                row.append("?")
            elif attr.kind == "nominal":
                row.append(attr.values[cell])
            else:
                row.append(repr(cell))
        writer.writerow(row)
    return out.getvalue()


# ---------------------------------------------------------------------------
# Interpretations (one block of ground facts per example)

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<lparen>\() |
        (?P<rparen>\)) |
        (?P<comma>,)   |
        (?P<period>\.(?!\d)) |
        (?P<number>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?) |
        (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _format_constant(value) -> str:
    if isinstance(value, float) and value == int(value) and abs(value) < 1e15:
        return repr(value)
    return str(value)


def tokenize_terms(text: str):
    """Yield (kind, value, line) tokens for Prolog-style term syntax.

    ``%`` starts a comment that runs to end of line.  Exposed for the
    literal parser in :mod:`cltree.logic`, which shares the syntax.
    """
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("%", 1)[0]
        pos = 0
        while pos < len(body):
            if body[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(body, pos)
            if not m:
                raise DataError(f"line {lineno}: cannot tokenize at {body[pos:]!r}")
            pos = m.end()
            kind = m.lastgroup
            value = m.group(kind).strip()
            if kind == "number":
                num = float(value)
                value = int(num) if num == int(num) and "." not in m.group(kind) and "e" not in value.lower() else num
            yield kind, value, lineno


def _parse_fact_stream(text: str):
    """Yield one ground term per period: (functor, args, line)."""
    tokens = list(tokenize_terms(text))
    i = 0
    while i < len(tokens):
        kind, value, line = tokens[i]
        if kind != "name":
            raise DataError(f"line {line}: expected a functor, got {value!r}")
        functor = value
        args = []
        i += 1
        if i < len(tokens) and tokens[i][0] == "lparen":
            i += 1
            expect_term = True
            depth = 1
            current: list = args
            stack = []
            while i < len(tokens) and depth > 0:
                k, v, ln = tokens[i]
                if k == "name":
                    if v[0].isupper() or v[0] == "_":
                        raise DataError(f"line {ln}: variable {v!r} not allowed in ground facts")
                    nxt = tokens[i + 1] if i + 1 < len(tokens) else None
                    if nxt and nxt[0] == "lparen":
                        # nested compound argument, e.g. begin(model(id))
                        inner: list = []
                        stack.append((current, v))
                        current = inner
                        depth += 1
                        i += 2
                        continue
                    current.append(v)
                elif k == "number":
                    current.append(v)
                elif k == "comma":
                    pass
                elif k == "rparen":
                    depth -= 1
                    if depth > 0:
                        outer, fun = stack.pop()
                        outer.append((fun, tuple(current)))
                        current = outer
                else:
                    raise DataError(f"line {ln}: unexpected {v!r} inside term")
                i += 1
        if i >= len(tokens) or tokens[i][0] != "period":
            raise DataError(f"line {line}: fact {functor!r} not terminated by a period")
        i += 1
        yield functor, tuple(args), line


@dataclass(frozen=True)
class MapEntry:
    """Declares one attribute lifted from facts: value at the last argument.

    Arity 1 facts carry the value directly (``lumo(-3.025)``); arity 2
    facts are key/value pairs where the first argument is ignored.
    """

    attr: str
    functor: str
    arity: int
    kind: str  # numeric | nominal
    role: str = "descriptive"


def parse_attribute_mapping(text: str) -> tuple[MapEntry, ...]:
    """Parse the attribute-mapping sidecar.

    One declaration per line::

        attribute lumo from lumo/1 numeric
        class mutagenic from logmutag/1 numeric

    ``%`` starts a comment.
    """
    entries = []
    decl_re = re.compile(
        r"^(attribute|class)\s+(\w+)\s+from\s+(\w+)/(\d+)\s+(numeric|nominal)$"
    )
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("%", 1)[0].strip()
        if not body:
            continue
        m = decl_re.match(body)
        if not m:
            raise DataError(f"mapping line {lineno}: cannot parse {body!r}")
        keyword, attr, functor, arity, kind = m.groups()
        arity = int(arity)
        if arity not in (1, 2):
            raise DataError(f"mapping line {lineno}: only unary/binary facts can be lifted")
        entries.append(
            MapEntry(attr=attr, functor=functor, arity=arity, kind=kind,
                     role="class" if keyword == "class" else "descriptive")
        )
    if len({e.attr for e in entries}) != len(entries):
        raise DataError("duplicate attribute names in mapping")
    return tuple(entries)


def parse_interpretations(text, mapping: Sequence[MapEntry] | None = None) -> Dataset:
    """Parse ``begin(model(ID)).`` ... ``end(model(ID)).`` blocks.

    Block k becomes example id k; facts are stored verbatim.  When a
    mapping is given, designated unary/binary facts are additionally
    lifted into attribute cells (first matching fact wins; examples with
    no matching fact get MISSING).
    """
    if not isinstance(text, str):
        text = text.read()
    mapping = tuple(mapping or ())

    blocks: list[tuple[str, list[GroundFact]]] = []
    current_id = None
    current_facts: list[GroundFact] = []
    seen_ids = set()
    for functor, args, line in _parse_fact_stream(text):
        if functor == "begin":
            if current_id is not None:
                raise DataError(f"line {line}: begin inside an open block {current_id!r}")
            block_id = _model_id(functor, args, line)
            if block_id in seen_ids:
                raise DataError(f"line {line}: duplicate block id {block_id!r}")
            seen_ids.add(block_id)
            current_id = block_id
            current_facts = []
        elif functor == "end":
            if current_id is None:
                raise DataError(f"line {line}: end without a matching begin")
            block_id = _model_id(functor, args, line)
            if block_id != current_id:
                raise DataError(f"line {line}: end({block_id!r}) does not close begin({current_id!r})")
            blocks.append((current_id, current_facts))
            current_id = None
        else:
            if current_id is None:
                raise DataError(f"line {line}: fact {functor!r} outside begin/end block")
            if any(isinstance(a, tuple) for a in args):
                raise DataError(f"line {line}: fact arguments must be constants, not nested terms")
            current_facts.append(GroundFact(functor=functor, args=args))
    if current_id is not None:
        raise DataError(f"block {current_id!r} is never closed")

    # lift mapped facts into cells
    raw_cells: list[list] = []
    for _, facts in blocks:
        row = []
        for entry in mapping:
            value = MISSING
            for fact in facts:
                if fact.functor == entry.functor and fact.arity == entry.arity:
                    value = fact.args[-1]
                    break
            row.append(value)
        raw_cells.append(row)

    schema = []
    for j, entry in enumerate(mapping):
        if entry.kind == "numeric":
            for row in raw_cells:
                if row[j] is not MISSING and not isinstance(row[j], (int, float)):
                    raise DataError(f"attribute {entry.attr!r}: non-numeric value {row[j]!r}")
            schema.append(AttributeSchema(name=entry.attr, kind="numeric", role=entry.role))
        else:
            seen: list[str] = []
            for row in raw_cells:
                if row[j] is not MISSING:
                    label = str(row[j])
                    if label not in seen:
                        seen.append(label)
            schema.append(
                AttributeSchema(name=entry.attr, kind="nominal",
                                values=tuple(seen) or ("<none>",), role=entry.role)
            )
            for row in raw_cells:
                if row[j] is not MISSING:
                    row[j] = seen.index(str(row[j]))

    examples = tuple(
        Example(id=k, values=tuple(raw_cells[k]), facts=tuple(facts))
        for k, (_, facts) in enumerate(blocks)
    )
    return Dataset(schema=tuple(schema), examples=examples)


def _model_id(functor, args, line) -> str:
    if len(args) != 1 or not isinstance(args[0], tuple) or args[0][0] != "model" or len(args[0][1]) != 1:
        raise DataError(f"line {line}: expected {functor}(model(ID))")
    return str(args[0][1][0])


# ---------------------------------------------------------------------------
# Encoding


def encode_nominals(ds: Dataset) -> Dataset:
    """Replace every nominal attribute by a numeric one holding the code.

    The value list is kept on the schema so the encoding is reversible
    for reporting.  Idempotent; MISSING cells stay MISSING.
    """
    schema = tuple(
        replace(a, kind="numeric") if a.kind == "nominal" else a for a in ds.schema
    )
    if schema == ds.schema:
        return ds
    examples = tuple(
        Example(
            id=ex.id,
            values=tuple(
                float(cell) if (a.kind == "nominal" and cell is not MISSING) else cell
                for a, cell in zip(ds.schema, ex.values)
            ),
            facts=ex.facts,
            weight=ex.weight,
        )
        for ex in ds.examples
    )
    return Dataset(schema=schema, examples=examples)
