"""JSON documents for graphs with a dMf and for labeled merge trees; DOT export."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from .cwcomplex import CellId, MalformedInput, MultiGraph, Value, as_value
from .mergetree import GeneralizedMergeTree, L, R


def value_to_json(x: Value):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def value_from_json(x) -> Value:
    try:
        return as_value(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad value {x!r}: {exc}") from None


def dumps(doc: Mapping) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("top-level JSON value must be an object")
    return doc


# =============================================================================
# Graph + dMf
# =============================================================================

def graph_to_doc(g: MultiGraph, f: Mapping[CellId, Value], **extra) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "vertices": [{"id": v, "f": value_to_json(f[v])} for v in g.vertices],
        "edges": [{"id": e, "u": u, "v": v, "f": value_to_json(f[e])} for e, (u, v) in g.edges.items()],
    }
    doc.update(extra)
    return doc


def graph_from_doc(doc: Mapping) -> Tuple[MultiGraph, Dict[CellId, Value]]:
    try:
        verts, edges = doc["vertices"], doc["edges"]
        f: Dict[CellId, Value] = {}
        vids = []
        for item in verts:
            vids.append(str(item["id"]))
            if "f" not in item or item["f"] is None:
                raise MalformedInput(f"vertex {item['id']!r} has no value")
            f[str(item["id"])] = value_from_json(item["f"])
        emap = {}
        for item in edges:
            e = str(item["id"])
            if e in emap:
                raise MalformedInput(f"duplicate edge id {e!r}")
            emap[e] = (str(item["u"]), str(item["v"]))
            if "f" not in item or item["f"] is None:
                raise MalformedInput(f"edge {e!r} has no value")
            f[e] = value_from_json(item["f"])
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"graph document is missing a field: {exc}") from None
    return MultiGraph(tuple(vids), emap), f


# =============================================================================
# Trees
# =============================================================================

def tree_to_doc(t: GeneralizedMergeTree, labels: Optional[Mapping] = None, **extra) -> Dict[str, Any]:
    nodes = []
    for n in t.postorder():
        nodes.append({
            "id": str(n),
            "chirality": t.chirality[n],
            "label": None if labels is None else value_to_json(labels[n]),
            "children": [str(c) for c in t.children[n]],
        })
    doc: Dict[str, Any] = {"root": str(t.root), "nodes": nodes}
    doc.update(extra)
    return doc


def tree_from_doc(doc: Mapping) -> Tuple[GeneralizedMergeTree, Optional[Dict[str, Value]]]:
    try:
        root = str(doc["root"])
        children, chirality, labels = {}, {}, {}
        for item in doc["nodes"]:
            n = str(item["id"])
            if n in children:
                raise MalformedInput(f"duplicate node id {n!r}")
            ch = item["chirality"]
            if ch not in (L, R):
                raise MalformedInput(f"node {n!r} has chirality {ch!r}")
            chirality[n] = ch
            children[n] = tuple(str(c) for c in item.get("children", []))
            labels[n] = item.get("label")
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"tree document is missing a field: {exc}") from None
    for n, cs in children.items():
        for c in cs:
            if c not in children:
                raise MalformedInput(f"node {n!r} lists unknown child {c!r}")
    if root not in children:
        raise MalformedInput(f"root {root!r} is not among the nodes")
    present = [x is not None for x in labels.values()]
    if any(present) and not all(present):
        raise MalformedInput("either every node or no node carries a label")
    lab = {n: value_from_json(x) for n, x in labels.items()} if all(present) and present else None
    return GeneralizedMergeTree(root, children, chirality), lab


def detect_kind(doc: Mapping) -> str:
    if "vertices" in doc and "edges" in doc:
        return "graph"
    if "root" in doc and "nodes" in doc:
        return "tree"
    raise MalformedInput("document is neither a graph nor a tree")


# =============================================================================
# DOT
# =============================================================================

def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: MultiGraph, f: Mapping[CellId, Value], critical=None) -> str:
    crit = set(g.cells if critical is None else critical)
    lines = ["graph G {", "  node [shape=circle];"]
    for v in g.vertices:
        style = "" if v in crit else ", style=dashed"
        lines.append(f"  {_q(v)} [label={_q(value_to_json(f[v]))}{style}];")
    for e, (u, v) in g.edges.items():
        style = "" if e in crit else ", style=dashed"
        lines.append(f"  {_q(u)} -- {_q(v)} [label={_q(value_to_json(f[e]))}, id={_q(e)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_dot(t: GeneralizedMergeTree, labels: Optional[Mapping] = None) -> str:
    """Cycle nodes are boxes; the L child is emitted (and so drawn) first."""
    lines = ["digraph T {", "  rankdir=TB;", "  ordering=out;"]
    for n in t.postorder():
        text = str(n) if labels is None else str(value_to_json(labels[n]))
        shape = "box" if t.is_cycle_node(n) else "circle"
        lines.append(f"  {_q(n)} [label={_q(text)}, shape={shape}, xlabel={_q(t.chirality[n])}];")
    for n in t.postorder():
        for c in t.children[n]:
            lines.append(f"  {_q(n)} -> {_q(c)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
