"""Conjunctive-literal node tests over interpretations.

A node test is either a plain attribute comparison or a conjunction of
literals whose variables are existentially quantified over the whole
conjunction.  Matching is first-solution, depth-first, respecting fact
order, so results are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dataset import MISSING, Dataset, Example, tokenize_terms


class TemplateError(ValueError):
    """Syntax or consistency error in a template specification."""


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not (self.name[0].isupper() or self.name[0] == "_"):
            raise ValueError(f"variable names are uppercase-initial: {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Constant:
    value: object  # identifier string or number

    def __str__(self):
        return str(self.value)


Term = Variable | Constant


@dataclass(frozen=True)
class Literal:
    functor: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ",".join(str(t) for t in self.args))


@dataclass(frozen=True)
class AttributeTest:
    """Degenerate test on one attribute cell: ``attr <= t`` or ``attr = v``.

    MISSING cells fail every attribute test and sort to the no-branch.
    """

    attr: int
    op: str  # "<=" | "=="
    value: float

    def __post_init__(self):
        if self.op not in ("<=", "=="):
            raise ValueError(f"unknown comparator {self.op!r}")

    def passes(self, cell) -> bool:
        if cell is MISSING:
            return False
        return cell <= self.value if self.op == "<=" else cell == self.value

    def describe(self, schema=None) -> str:
        name = schema[self.attr].name if schema is not None else f"a{self.attr}"
        if self.op == "==" and schema is not None and schema[self.attr].values is not None:
            return f"{name} = {schema[self.attr].format_cell(self.value)}"
        op = "<=" if self.op == "<=" else "="
        return f"{name} {op} {self.value:g}"


@dataclass(frozen=True)
class LiteralTest:
    """A conjunction of literals; succeeds iff some binding satisfies all of them.

    ``introduces`` records the variables this test adds to the path,
    tagged with the template slot type that created each one.
    """

    literals: tuple[Literal, ...]
    introduces: tuple[tuple[str, str], ...] = ()  # (type tag, variable name)

    def describe(self, schema=None) -> str:
        return " , ".join(str(lit) for lit in self.literals)

    def __str__(self):
        return self.describe()


TestQuery = AttributeTest | LiteralTest


# ---------------------------------------------------------------------------
# Matching

Binding = dict


def match_query(q: LiteralTest, e: Example, seed: Mapping | None = None):
    """First-solution match of a conjunction against an example's facts.

    Returns the extending binding (a new dict) on success, ``None`` on
    failure.  The empty conjunction succeeds with the seed unchanged.
    Search is depth-first over literals in order and facts in stored
    order, so the returned binding is deterministic.
    """
    binding = dict(seed or {})
    return _match_from(q.literals, 0, e, binding)


def _match_from(literals, i, e, binding):
    if i == len(literals):
        return binding
    lit = literals[i]
    for fact in e.facts:
        if fact.functor != lit.functor or fact.arity != len(lit.args):
            continue
        extended = _unify_args(lit.args, fact.args, binding)
        if extended is None:
            continue
        result = _match_from(literals, i + 1, e, extended)
        if result is not None:
            return result
    return None


def _unify_args(terms, constants, binding):
    new = None
    for term, const in zip(terms, constants):
        if isinstance(term, Constant):
            if not _constants_equal(term.value, const):
                return None
        else:
            bound = (new or binding).get(term.name, _UNBOUND)
            if bound is _UNBOUND:
                if new is None:
                    new = dict(binding)
                new[term.name] = const
            elif not _constants_equal(bound, const):
                return None
    return new if new is not None else dict(binding)


_UNBOUND = object()


def _constants_equal(a, b) -> bool:
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b


def apply_test(test, e: Example, seed: Mapping | None = None):
    """Evaluate any node test on one example.

    Returns the binding to carry into the yes-branch, or ``None`` when
    the example sorts to the no-branch.  Attribute tests never extend
    the binding.
    """
    if isinstance(test, AttributeTest):
        return dict(seed or {}) if test.passes(e.values[test.attr]) else None
    return match_query(test, e, seed)


def parse_literal_test(text: str, introduces=()) -> LiteralTest:
    """Parse the textual form of a conjunction, e.g. ``atom(A,c,22,C) , bond(A,B,7)``."""
    tokens = list(tokenize_terms(text))
    literals = []
    i = 0
    while i < len(tokens):
        kind, value, line = tokens[i]
        if kind == "comma":
            i += 1
            continue
        if kind != "name":
            raise ValueError(f"cannot parse literal at {value!r}")
        functor = value
        args: list = []
        i += 1
        if i < len(tokens) and tokens[i][0] == "lparen":
            i += 1
            while i < len(tokens) and tokens[i][0] != "rparen":
                k, v, _ = tokens[i]
                if k == "name":
                    args.append(Variable(v) if (v[0].isupper() or v[0] == "_") else Constant(v))
                elif k == "number":
                    args.append(Constant(v))
                elif k != "comma":
                    raise ValueError(f"unexpected {v!r} in literal arguments")
                i += 1
            if i >= len(tokens):
                raise ValueError("unterminated literal argument list")
            i += 1
        literals.append(Literal(functor=functor, args=tuple(args)))
    return LiteralTest(literals=tuple(literals), introduces=tuple(introduces))


# ---------------------------------------------------------------------------
# Templates

_SLOT_MODES = {"+": "bound", "-": "fresh", "#": "constant"}


@dataclass(frozen=True)
class TemplateSlot:
    mode: str  # "+" bound variable | "-" fresh variable | "#" constant from data
    tag: str


@dataclass(frozen=True)
class Template:
    functor: str
    slots: tuple[TemplateSlot, ...]

    def __str__(self):
        inner = ",".join(s.mode + s.tag for s in self.slots)
        return f"{self.functor}({inner})" if self.slots else self.functor


@dataclass(frozen=True)
class TemplateSet:
    """Ordered templates; the order defines the canonical candidate order."""

    templates: tuple[Template, ...] = ()

    def __len__(self):
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)


_TEMPLATE_LINE = re.compile(r"^test\s+(\w+)\s*(?:\(([^)]*)\))?\s*$")


def parse_template_spec(text: str) -> TemplateSet:
    """Parse the template grammar, one declaration per line.

    ``test atom(+mol, #type, #charge)`` declares a literal pattern whose
    slots are filled per their marker: ``+`` reuses a path variable of
    that type, ``-`` introduces a fresh variable, ``#`` ranges over the
    constants observed in the data at that position.  ``%`` starts a
    comment line.
    """
    templates: list[Template] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = _TEMPLATE_LINE.match(line)
        if not m:
            col = len(raw) - len(raw.lstrip()) + 1
            raise TemplateError(f"line {lineno}, column {col}: cannot parse {line!r}")
        functor, slot_text = m.group(1), m.group(2)
        slots = []
        if slot_text and slot_text.strip():
            for piece in slot_text.split(","):
                piece = piece.strip()
                if not piece or piece[0] not in _SLOT_MODES:
                    col = raw.find(piece) + 1 if piece else 1
                    raise TemplateError(
                        f"line {lineno}, column {col}: unknown fill rule in {piece!r} "
                        "(expected +name, -name or #name)"
                    )
                tag = piece[1:]
                if not re.fullmatch(r"\w+", tag):
                    raise TemplateError(f"line {lineno}: bad slot name {piece!r}")
                slots.append(TemplateSlot(mode=piece[0], tag=tag))
        template = Template(functor=functor, slots=tuple(slots))
        if template in templates:
            raise TemplateError(f"line {lineno}: duplicate template {template}")
        templates.append(template)
    return TemplateSet(templates=tuple(templates))


# ---------------------------------------------------------------------------
# Candidate generation

@dataclass(frozen=True)
class PathContext:
    """What the succeeded path to a node has established.

    ``variables`` lists (type tag, name) pairs for every variable bound
    by ancestor yes-branches, in introduction order.
    """

    tests: tuple = ()
    variables: tuple[tuple[str, str], ...] = ()

    def extend(self, test) -> "PathContext":
        introduces = getattr(test, "introduces", ())
        return PathContext(tests=self.tests + (test,), variables=self.variables + tuple(introduces))


def threshold_candidates(values) -> list[float]:
    """Midpoints between consecutive distinct sorted values."""
    distinct = sorted({float(v) for v in values if v is not MISSING})
    return [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]


def generate_candidates(
    path: PathContext,
    templates: TemplateSet,
    ds: Dataset,
    node_examples: Sequence[int],
    attrs: Sequence[int] | None = None,
    max_conjunction: int = 2,
) -> list:
    """Enumerate the node tests to consider at one node, in canonical order.

    Attribute candidates come first in schema order: thresholds at
    midpoints of distinct values present for numeric attributes, one
    equality test per value present for nominal ones.  Literal
    candidates follow in template order, instantiated over constants
    observed in the node's facts, extended to conjunctions up to
    ``max_conjunction`` literals.  The output is duplicate-free and a
    pure function of (schema order, template order, sorted observed
    constants).
    """
    if not node_examples:
        raise ValueError("node_examples must be non-empty")
    ids = list(node_examples)
    examples = [ds.examples[i] for i in ids]
    if attrs is None:
        attrs = ds.testable_attributes()

    candidates: list = []
    for j in attrs:
        attr = ds.schema[j]
        column = [ex.values[j] for ex in examples]
        if attr.kind == "numeric":
            for t in threshold_candidates(column):
                candidates.append(AttributeTest(attr=j, op="<=", value=t))
        elif attr.kind == "nominal":
            present = sorted({c for c in column if c is not MISSING})
            for code in present:
                candidates.append(AttributeTest(attr=j, op="==", value=float(code)))

    if len(templates) > 0:
        constants = _observed_constants(examples, templates)
        literal_lists = _expand_templates(path, templates, constants, max_conjunction)
        seen = set()
        for literals, introduces in literal_lists:
            key = _canonical_key(literals)
            if key in seen:
                continue
            seen.add(key)
            candidates.append(LiteralTest(literals=tuple(literals), introduces=tuple(introduces)))
    return candidates


def _observed_constants(examples, templates):
    """Constants seen at each (functor, arity, position) used by a # slot."""
    wanted = set()
    for tpl in templates:
        for pos, slot in enumerate(tpl.slots):
            if slot.mode == "#":
                wanted.add((tpl.functor, len(tpl.slots), pos))
    observed: dict = {key: [] for key in wanted}
    for ex in examples:
        for fact in ex.facts:
            for pos in range(fact.arity):
                key = (fact.functor, fact.arity, pos)
                if key in wanted and fact.args[pos] not in observed[key]:
                    observed[key].append(fact.args[pos])
    return {key: sorted(vals, key=_constant_sort_key) for key, vals in observed.items()}


def _constant_sort_key(value):
    if isinstance(value, (int, float)):
        return (0, float(value), "")
    return (1, 0.0, str(value))


def _expand_templates(path, templates, constants, max_conjunction):
    """All conjunctions of 1..max_conjunction template instantiations.

    Within a conjunction, + slots may also bind variables introduced by
    earlier literals of the same conjunction; variables from failed
    branches never appear because the path context only carries the
    succeeded path.  Breadth-first, so shorter conjunctions precede
    every longer one in the canonical order.
    """
    results = []
    level = [([], [], tuple(path.variables), {n for _, n in path.variables})]
    for _ in range(max(0, max_conjunction)):
        next_level = []
        for conj, intro, variables, used in level:
            for tpl in templates:
                for literal, new_vars in _instantiate(tpl, variables, used, constants):
                    lits = conj + [literal]
                    intro2 = intro + new_vars
                    results.append((lits, intro2))
                    next_level.append(
                        (lits, intro2, variables + tuple(new_vars), used | {n for _, n in new_vars})
                    )
        level = next_level
    return results


def _instantiate(tpl, variables, used_names, constants):
    """Yield (literal, fresh vars) for every admissible fill of one template."""
    options_per_slot = []
    for pos, slot in enumerate(tpl.slots):
        if slot.mode == "#":
            opts = [("const", c) for c in constants.get((tpl.functor, len(tpl.slots), pos), [])]
        elif slot.mode == "+":
            opts = [("var", name) for tag, name in variables if tag == slot.tag]
        else:
            opts = [("fresh", slot.tag)]
        if not opts:
            return
        options_per_slot.append(opts)

    def rec(pos, args, new_vars, names_in_use):
        if pos == len(options_per_slot):
            yield Literal(functor=tpl.functor, args=tuple(args)), list(new_vars)
            return
        for kind, payload in options_per_slot[pos]:
            if kind == "const":
                yield from rec(pos + 1, args + [Constant(payload)], new_vars, names_in_use)
            elif kind == "var":
                yield from rec(pos + 1, args + [Variable(payload)], new_vars, names_in_use)
            else:
                name = _fresh_name(payload, names_in_use)
                yield from rec(
                    pos + 1,
                    args + [Variable(name)],
                    new_vars + [(payload, name)],
                    names_in_use | {name},
                )

    yield from rec(0, [], [], used_names)


def _fresh_name(tag, used_names):
    base = tag[:1].upper() + tag[1:]
    if base not in used_names:
        return base
    k = 2
    while f"{base}{k}" in used_names:
        k += 1
    return f"{base}{k}"


def _canonical_key(literals):
    """Alpha-renaming-invariant key for duplicate elimination."""
    rename: dict = {}
    parts = []
    for lit in literals:
        arg_keys = []
        for term in lit.args:
            if isinstance(term, Variable):
                if term.name not in rename:
                    rename[term.name] = f"_v{len(rename)}"
                arg_keys.append(rename[term.name])
            else:
                arg_keys.append(("c", term.value))
        parts.append((lit.functor, tuple(arg_keys)))
    return tuple(parts)
