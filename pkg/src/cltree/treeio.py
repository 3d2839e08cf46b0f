"""Clustering-tree serialization and rendering.

The on-disk format is a stable line-oriented text document: one schema
line per attribute, the frozen distance spec, then one block per node in
preorder carrying the test, cluster size, prototype, split statistics
and labels.  Serializing is deterministic, so identical trees produce
byte-identical files.
"""

from __future__ import annotations

import io

from .dataset import AttributeSchema
from .evaluation import LeafLabels
from .induction import ClusteringTree, Node
from .logic import AttributeTest, parse_literal_test
from .metrics import DistanceSpec, Prototype, SplitStatistics

FORMAT_HEADER = "cltree v1"


class TreeFormatError(ValueError):
    pass


def _fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        return repr(x)
    return repr(float(x))


def _parse_float(token: str):
    if token == "none":
        return None
    if token == "inf":
        return float("inf")
    return float(token)


def _fmt_list(values) -> str:
    return ",".join(_fmt(v) for v in values)


def _parse_list(token: str):
    if not token:
        return ()
    return tuple(_parse_float(t) for t in token.split(","))


def serialize_tree(tree: ClusteringTree) -> str:
    out = io.StringIO()
    out.write(FORMAT_HEADER + "\n")
    for attr in tree.schema:
        line = f"schema {attr.name} {attr.kind}"
        if attr.values is not None:
            line += " values=" + "|".join(attr.values)
        if attr.role != "descriptive":
            line += f" role={attr.role}"
        out.write(line + "\n")
    spec = tree.spec
    out.write(
        "distance dims=%s weights=%s norm=%s offsets=%s scales=%s\n"
        % (
            ",".join(str(j) for j in spec.dims),
            _fmt_list(spec.weight_array().tolist()),
            spec.normalization,
            _fmt_list(spec.offsets or ()),
            _fmt_list(spec.scales or ()),
        )
    )
    out.write(f"nodes {len(tree.nodes)}\n")
    for i, node in enumerate(tree.nodes):
        kind = "leaf" if node.is_leaf else "internal"
        out.write(f"node {i} {kind} depth={node.depth} size={_node_size(node)}\n")
        if not node.is_leaf:
            out.write(f"yes {node.yes}\n")
            out.write(f"no {node.no}\n")
            out.write("test " + _serialize_test(node.test) + "\n")
        out.write(
            "proto %s support=%s\n"
            % (_fmt_list(node.prototype.means), ",".join(str(s) for s in node.prototype.support))
        )
        if node.stats is not None:
            s = node.stats
            out.write(
                "stats n=%d ss=%s ss_l=%s ss_r=%s inter=%s score=%s f=%s\n"
                % (s.n, _fmt(s.ss), _fmt(s.ss_l), _fmt(s.ss_r), _fmt(s.inter_distance),
                   _fmt(s.score), _fmt(s.f))
            )
        if node.labels is not None:
            lab = node.labels
            out.write(
                "labels %s support=%s majority=%s n_labeled=%d\n"
                % (_fmt_list(lab.per_attribute), ",".join(str(s) for s in lab.support),
                   _fmt(lab.majority_class), lab.n_labeled)
            )
        out.write("end\n")
    return out.getvalue()


def _node_size(node: Node) -> int:
    return node.size


def _serialize_test(test) -> str:
    if isinstance(test, AttributeTest):
        return f"attr {test.attr} {test.op} {_fmt(test.value)}"
    intro = ",".join(f"{tag}:{name}" for tag, name in test.introduces)
    return f"query {test.describe()} ; introduces={intro}"


def _parse_test(body: str):
    if body.startswith("attr "):
        _, attr, op, value = body.split(" ", 3)
        return AttributeTest(attr=int(attr), op=op, value=float(value))
    if body.startswith("query "):
        text, _, tail = body[len("query "):].rpartition(" ; introduces=")
        introduces = tuple(
            tuple(pair.split(":", 1)) for pair in tail.split(",") if pair
        )
        return parse_literal_test(text, introduces=introduces)
    raise TreeFormatError(f"cannot parse test line {body!r}")


def load_tree(text: str) -> ClusteringTree:
    """Parse a serialized tree.

    Loaded trees carry cluster sizes but not member ids (the file format
    stores sizes only), so they support prediction, rendering, quality
    evaluation and pruning, but not relabeling.
    """
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    if not lines or lines[0] != FORMAT_HEADER:
        raise TreeFormatError(f"expected header {FORMAT_HEADER!r}")
    pos = 1
    schema = []
    while pos < len(lines) and lines[pos].startswith("schema "):
        parts = lines[pos].split(" ")
        name, kind = parts[1], parts[2]
        values = None
        role = "descriptive"
        for extra in parts[3:]:
            if extra.startswith("values="):
                values = tuple(extra[len("values="):].split("|"))
            elif extra.startswith("role="):
                role = extra[len("role="):]
        schema.append(AttributeSchema(name=name, kind=kind, values=values, role=role))
        pos += 1
    if pos >= len(lines) or not lines[pos].startswith("distance "):
        raise TreeFormatError("missing distance line")
    fields = dict(part.split("=", 1) for part in lines[pos].split(" ")[1:])
    spec = DistanceSpec(
        dims=tuple(int(t) for t in fields["dims"].split(",")),
        weights=_parse_list(fields["weights"]) or None,
        normalization=fields["norm"],
        offsets=_parse_list(fields["offsets"]) or None,
        scales=_parse_list(fields["scales"]) or None,
    )
    pos += 1
    if not lines[pos].startswith("nodes "):
        raise TreeFormatError("missing nodes line")
    count = int(lines[pos].split(" ")[1])
    pos += 1
    nodes: list[Node] = []
    for _ in range(count):
        header = lines[pos].split(" ")
        if header[0] != "node":
            raise TreeFormatError(f"expected node header at {lines[pos]!r}")
        kind = header[2]
        meta = dict(part.split("=", 1) for part in header[3:])
        node = Node(cluster=(), prototype=Prototype(means=(), support=()), depth=int(meta["depth"]))
        node.size_hint = int(meta.get("size", 0))
        pos += 1
        while lines[pos] != "end":
            line = lines[pos]
            if line.startswith("yes "):
                node.yes = int(line.split(" ")[1])
            elif line.startswith("no "):
                node.no = int(line.split(" ")[1])
            elif line.startswith("test "):
                node.test = _parse_test(line[len("test "):])
            elif line.startswith("proto "):
                body, _, support = line[len("proto "):].partition(" support=")
                node.prototype = Prototype(
                    means=_parse_optional_list(body),
                    support=tuple(int(s) for s in support.split(",") if s),
                )
            elif line.startswith("stats "):
                fields = dict(part.split("=", 1) for part in line[len("stats "):].split(" "))
                node.stats = SplitStatistics(
                    n=int(fields["n"]),
                    ss=_parse_float(fields["ss"]),
                    ss_l=_parse_float(fields["ss_l"]),
                    ss_r=_parse_float(fields["ss_r"]),
                    inter_distance=_parse_float(fields["inter"]),
                    score=_parse_float(fields["score"]),
                    proto_l=Prototype(means=(), support=()),
                    proto_r=Prototype(means=(), support=()),
                    f=_parse_float(fields["f"]),
                )
            elif line.startswith("labels "):
                body = line[len("labels "):]
                values_part, _, rest = body.partition(" support=")
                support_part, _, rest = rest.partition(" majority=")
                majority_part, _, n_part = rest.partition(" n_labeled=")
                node.labels = LeafLabels(
                    per_attribute=_parse_optional_list(values_part),
                    support=tuple(int(s) for s in support_part.split(",") if s),
                    majority_class=_parse_float(majority_part),
                    n_labeled=int(n_part),
                )
            else:
                raise TreeFormatError(f"unexpected line {line!r}")
            pos += 1
        pos += 1  # skip "end"
        if kind == "leaf":
            node.test = None
        nodes.append(node)
    return ClusteringTree(schema=tuple(schema), spec=spec, nodes=nodes)


def _parse_optional_list(token: str):
    if not token:
        return ()
    return tuple(_parse_float(t) for t in token.split(","))


def render_tree(tree: ClusteringTree, show_labels: bool = True) -> str:
    """ASCII rendering with indented yes/no branches."""
    class_idx = None
    for j, attr in enumerate(tree.schema):
        if attr.role == "class":
            class_idx = j

    def leaf_text(node: Node) -> str:
        text = f"leaf n={_node_size(node)}"
        if show_labels and node.labels is not None and class_idx is not None:
            label = node.labels.majority_class
            if label is not None:
                text += f" [{tree.schema[class_idx].name}={tree.schema[class_idx].format_cell(label)}]"
        return text

    def walk(i: int) -> list[str]:
        node = tree.nodes[i]
        if node.is_leaf:
            return [leaf_text(node)]
        lines = [node.test.describe(tree.schema) + " ?"]
        yes_lines = walk(node.yes)
        no_lines = walk(node.no)
        lines.append("+--yes: " + yes_lines[0])
        lines.extend("|       " + ln for ln in yes_lines[1:])
        lines.append("+--no:  " + no_lines[0])
        lines.extend("        " + ln for ln in no_lines[1:])
        return lines

    return "\n".join(walk(0)) + "\n"
