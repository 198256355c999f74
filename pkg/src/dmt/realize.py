"""Realizing a generalized merge tree by a dMf on a simple (or planar) graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx

from .cwcomplex import CellId, MultiGraph, Value
from .invert import _cell_ids, phi_path
from .mergetree import (GeneralizedMergeTree, NodeId, cycle_count_below, cycle_nodes, is_morse_order,
                        leaf_count, require_gmt, sc_order, underlying_tree)

SIMPLE, PLANAR = "simple", "planar"


class NotRealizable(ValueError):
    def __init__(self, report: "RealizabilityReport", mode: str):
        self.report = report
        self.mode = mode
        bad = report.violations_for(mode)
        super().__init__(f"tree is not {mode}-realizable; violations (cycle node, |C|, leaves, bound): {bad}")


# (cycle node, |C(T(c_u))|, leaves of T(c_u), bound)
Violation = Tuple[NodeId, int, int, int]


@dataclass
class RealizabilityReport:
    realizable_simple: bool
    realizable_planar: bool
    simple_violations: List[Violation] = field(default_factory=list)
    planar_violations: List[Violation] = field(default_factory=list)
    mode: str = SIMPLE

    @property
    def violations(self) -> List[Violation]:
        return self.violations_for(self.mode)

    def violations_for(self, mode: str) -> List[Violation]:
        return self.simple_violations if mode == SIMPLE else self.planar_violations

    @property
    def ok(self) -> bool:
        return self.realizable_simple if self.mode == SIMPLE else self.realizable_planar


def simple_bound(leaves: int) -> int:
    return (leaves - 2) * (leaves - 1) // 2


def planar_bound(leaves: int) -> int:
    return 2 * leaves - 5


def check_realizable(t: GeneralizedMergeTree, mode: str = SIMPLE) -> RealizabilityReport:
    if mode not in (SIMPLE, PLANAR):
        raise ValueError(f"unknown mode {mode!r}")
    simple, planar = [], []
    for c in cycle_nodes(t):
        cu = t.children[c][0]
        n, ell = cycle_count_below(t, cu), leaf_count(t, cu)
        if not n < simple_bound(ell):
            simple.append((c, n, ell, simple_bound(ell)))
        if not n < planar_bound(ell):
            planar.append((c, n, ell, planar_bound(ell)))
    return RealizabilityReport(not simple, not planar, simple, planar, mode)


def planarity_oracle(g: MultiGraph) -> bool:
    if not g.is_simple():
        raise ValueError("planarity_oracle expects a simple graph")
    if len(g.edges) <= 8:
        return True
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges.values())
    return nx.check_planarity(h)[0]


@dataclass
class Realization:
    graph: MultiGraph
    dmf: Dict[CellId, Value]
    labels: Dict[NodeId, Value]
    cell_of_node: Dict[NodeId, CellId]


def _realize(t: GeneralizedMergeTree, mode: str, order: Optional[Mapping[NodeId, Value]]) -> Realization:
    require_gmt(t)
    report = check_realizable(t, mode)
    if not report.ok:
        raise NotRealizable(report, mode)
    labels = dict(sc_order(t) if order is None else order)
    if order is not None and not is_morse_order(t, labels):
        raise ValueError("order is not a Morse order on the tree")

    ids = _cell_ids(t.nodes)
    bar, bar_labels = underlying_tree(t, labels)
    base = phi_path(bar, bar_labels, ids)
    vertices = base.graph.vertices
    edges = dict(base.graph.edges)
    dmf = dict(base.dmf)
    adjacent = {frozenset(uv) for uv in edges.values()}

    # ascending sweep with a union-find whose roots know their member vertices
    parent: Dict[CellId, CellId] = {}
    members: Dict[CellId, List[CellId]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for n in sorted(t.nodes, key=lambda n: labels[n]):
        cell = ids[n]
        if not t.is_cycle_node(n):
            if cell in vertices:
                parent[cell], members[cell] = cell, [cell]
            else:
                a, b = find(edges[cell][0]), find(edges[cell][1])
                parent[b] = a
                members[a].extend(members.pop(b))
            continue
        cu = ids[t.children[n][0]]
        comp = sorted(members[find(edges[cu][0])], key=lambda v: dmf[v])
        chosen = None
        for i, v in enumerate(comp):
            for u in comp[i + 1:]:
                if frozenset((v, u)) in adjacent:
                    continue
                if mode == PLANAR and not planarity_oracle(
                        MultiGraph(vertices, {**edges, cell: (v, u)})):
                    continue
                chosen = (v, u)
                break
            if chosen:
                break
        # the counting bounds guarantee a free pair; running out is a bug
        assert chosen is not None, f"no admissible pair for cycle node {n!r} despite the bound"
        edges[cell] = chosen
        dmf[cell] = labels[n]
        adjacent.add(frozenset(chosen))
    return Realization(MultiGraph(vertices, edges), dmf, labels, {n: ids[n] for n in t.nodes})


def realize_simple(t: GeneralizedMergeTree, order: Optional[Mapping[NodeId, Value]] = None) -> Realization:
    """Simple graph realizing ``t``; labels default to the sublevel-connected order.

    Cycle edges are inserted by ascending label, each on the smallest
    non-adjacent vertex pair (ordered by value of the lower, then of the upper
    endpoint) inside the component that corresponds to the cycle node's child.
    """
    return _realize(t, SIMPLE, order)


def realize_planar(t: GeneralizedMergeTree, order: Optional[Mapping[NodeId, Value]] = None) -> Realization:
    """As :func:`realize_simple`, skipping pairs whose edge would break planarity."""
    return _realize(t, PLANAR, order)
