"""From a generalized Morse labeled merge tree back to a critical dMf on a multigraph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

from .cwcomplex import CellId, MultiGraph, Value
from .mergetree import (L, GeneralizedMergeTree, Labeling, NodeId, cycle_nodes, is_morse_order,
                        oldest_two_child_descendant, require_gmt, underlying_tree)


@dataclass
class PhiResult:
    graph: MultiGraph
    dmf: Dict[CellId, Value]
    cell_of_node: Dict[NodeId, CellId]


def _cell_ids(nodes) -> Dict[NodeId, CellId]:
    ids = {n: str(n) for n in nodes}
    if len(set(ids.values())) != len(ids):
        ids = {n: f"c{i}" for i, n in enumerate(nodes)}
    return ids


def path_sequence(t: GeneralizedMergeTree, n: Optional[NodeId] = None) -> List[NodeId]:
    """Nodes of a cycle-free tree in path order (vertex, edge, vertex, ...).

    Below a merge node of chirality L the block of its L child comes first;
    below one of chirality R the block of its R child comes last.  The merge
    node itself sits between the two blocks.
    """
    n = t.root if n is None else n
    cs = t.children[n]
    if not cs:
        return [n]
    if len(cs) != 2:
        raise ValueError(f"cycle node {n!r} in a tree that should have none")
    same = t.child_with(n, t.chirality[n])
    other = cs[0] if cs[1] == same else cs[1]
    if t.chirality[n] == L:
        return path_sequence(t, same) + [n] + path_sequence(t, other)
    return path_sequence(t, other) + [n] + path_sequence(t, same)


def phi_path(t_bar: GeneralizedMergeTree, labels: Labeling, ids: Dict[NodeId, CellId] = None) -> PhiResult:
    if cycle_nodes(t_bar):
        raise ValueError("phi_path needs a tree without cycle nodes")
    seq = path_sequence(t_bar)
    ids = ids or _cell_ids(t_bar.nodes)
    vertices = tuple(ids[n] for n in seq[0::2])
    edges = {ids[seq[i]]: (ids[seq[i - 1]], ids[seq[i + 1]]) for i in range(1, len(seq), 2)}
    dmf = {ids[n]: labels[n] for n in seq}
    return PhiResult(MultiGraph(vertices, edges), dmf, {n: ids[n] for n in seq})


def phi(t: GeneralizedMergeTree, labels: Labeling, check: bool = True) -> PhiResult:
    """Path for the underlying tree plus one parallel edge per cycle node."""
    if check:
        require_gmt(t)
        if not is_morse_order(t, labels):
            raise ValueError("labels are not a Morse labeling of the tree")
    ids = _cell_ids(t.nodes)
    bar, bar_labels = underlying_tree(t, labels)
    base = phi_path(bar, bar_labels, ids)
    edges = dict(base.graph.edges)
    dmf = dict(base.dmf)
    cell_of_node = dict(base.cell_of_node)
    for c in cycle_nodes(t):
        d = oldest_two_child_descendant(t, c)
        edges[ids[c]] = edges[ids[d]]
        dmf[ids[c]] = labels[c]
        cell_of_node[c] = ids[c]
    return PhiResult(MultiGraph(base.graph.vertices, edges), dmf, cell_of_node)
