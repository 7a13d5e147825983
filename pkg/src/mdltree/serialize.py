"""Tree output: an indented text rendering and a versioned JSON format.

The JSON form round-trips exactly: floats are written with Python's shortest
repr, which parses back to the same double.
"""

from __future__ import annotations

import json

from .data import AttributeDecl, Schema, format_number
from .metrics import SplitCandidate
from .tree import Internal, Leaf, Node

FORMAT = "mdltree-tree"
VERSION = 1


def _leaf_label(leaf: Leaf, schema: Schema) -> str:
    cls = schema.classes[leaf.class_index]
    n = leaf.weight
    errors = n - leaf.distribution[leaf.class_index] if n > 0 else 0.0
    if errors > 1e-9:
        return f"{cls} ({n:.1f}/{errors:.1f})"
    return f"{cls} ({n:.1f})"


def _outcome_label(node: Internal, i: int, schema: Schema) -> str:
    a = schema.attributes[node.test.attribute]
    if node.test.threshold is not None:
        op = "<=" if i == 0 else ">"
        return f"{a.name} {op} {format_number(node.test.threshold)}"
    return f"{a.name} = {a.values[i]}"


def to_text(tree: Node, schema: Schema) -> str:
    """Indented rendering, one line per branch."""
    if tree.is_leaf:
        return _leaf_label(tree, schema) + "\n"
    lines: list[str] = []

    def walk(node: Internal, depth: int):
        pad = "|   " * depth
        for i, child in enumerate(node.children):
            head = pad + _outcome_label(node, i, schema)
            if child.is_leaf:
                lines.append(f"{head} : {_leaf_label(child, schema)}")
            else:
                lines.append(f"{head} :")
                walk(child, depth + 1)

    walk(tree, 0)
    return "\n".join(lines) + "\n"


def _node_to_obj(node: Node) -> dict:
    if node.is_leaf:
        return {
            "leaf": True,
            "class": node.class_index,
            "distribution": list(node.distribution),
            "weight": node.weight,
        }
    t = node.test
    return {
        "leaf": False,
        "attribute": t.attribute,
        "threshold": t.threshold,
        "test": {
            "outcomes": t.n_outcomes,
            "gain": t.gain,
            "split_info": t.split_info,
            "penalty": t.penalty,
            "distinct_values": t.distinct_values,
            "gain_ratio": t.gain_ratio,
        },
        "fallback_class": node.fallback_class,
        "branch_weights": list(node.branch_weights),
        "distribution": list(node.distribution),
        "children": [_node_to_obj(c) for c in node.children],
    }


def _node_from_obj(obj: dict) -> Node:
    if obj["leaf"]:
        return Leaf(
            int(obj["class"]), tuple(float(x) for x in obj["distribution"]), float(obj["weight"])
        )
    t = obj["test"]
    thr = obj["threshold"]
    test = SplitCandidate(
        attribute=int(obj["attribute"]),
        threshold=None if thr is None else float(thr),
        n_outcomes=int(t["outcomes"]),
        gain=float(t["gain"]),
        split_info=float(t["split_info"]),
        penalty=float(t["penalty"]),
        distinct_values=t["distinct_values"],
        gain_ratio=float(t["gain_ratio"]),
    )
    return Internal(
        test,
        tuple(_node_from_obj(c) for c in obj["children"]),
        int(obj["fallback_class"]),
        tuple(float(x) for x in obj["branch_weights"]),
        tuple(float(x) for x in obj["distribution"]),
    )


def schema_to_obj(schema: Schema) -> dict:
    return {
        "classes": list(schema.classes),
        "attributes": [
            {"name": a.name, "type": "continuous"}
            if a.is_continuous
            else {"name": a.name, "type": "discrete", "values": list(a.values)}
            for a in schema.attributes
        ],
    }


def schema_from_obj(obj: dict) -> Schema:
    attrs = tuple(
        AttributeDecl.continuous(a["name"])
        if a["type"] == "continuous"
        else AttributeDecl.discrete(a["name"], a["values"])
        for a in obj["attributes"]
    )
    return Schema(attrs, tuple(obj["classes"]))


def to_json(tree: Node, schema: Schema, header: dict | None = None) -> str:
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "header": header or {},
        "schema": schema_to_obj(schema),
        "tree": _node_to_obj(tree),
    }
    return json.dumps(doc, indent=1) + "\n"


def from_json(text: str) -> tuple[Node, Schema]:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError("not a serialized tree")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported tree format version {doc.get('version')!r}")
    return _node_from_obj(doc["tree"]), schema_from_obj(doc["schema"])
