"""Induced generalized Morse labeled merge tree of a dMf on a connected multigraph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .cwcomplex import (DMF, CellId, MultiGraph, UnionFind, Value, component_of, critical_cells,
                        is_connected, require_dmf, sublevel)
from .mergetree import (L, GeneralizedMergeTree, NodeId, canonical_form, flip_chirality, opposite,
                        subtree)


class DisconnectedInput(ValueError):
    pass


@dataclass
class InducedTreeResult:
    tree: GeneralizedMergeTree
    labeling: Dict[NodeId, Value]
    correspondence: Dict[CellId, NodeId]

    @property
    def cell_of_node(self) -> Dict[NodeId, CellId]:
        return {n: c for c, n in self.correspondence.items()}


def induce_merge_tree(g: MultiGraph, f: DMF, check: bool = True) -> InducedTreeResult:
    """Build M(g, f).

    The filtration is replayed bottom-up with a union-find; every component
    remembers the node of its largest critical cell and its minimal value.  A
    critical edge inside one component becomes a cycle node over that
    component's node; a critical edge joining two components becomes a merge
    node whose children are the two component nodes, the one from the component
    with the smaller minimum listed first (it inherits the parent's chirality
    once the root is known).  Node ids are the ids of the critical cells.
    """
    if check:
        require_dmf(g, f)
    if not is_connected(g):
        raise DisconnectedInput("induce requires connected input; map over components externally")

    crit = set(critical_cells(g, f))
    uf = UnionFind()
    top: Dict[CellId, NodeId] = {}
    low: Dict[CellId, Value] = {}
    children: Dict[NodeId, tuple] = {}
    last = None
    for c in sorted(g.cells, key=lambda c: (f[c], g.is_edge(c))):
        if not g.is_edge(c):
            uf.add(c)
            low[c] = f[c]
            if c in crit:
                top[c] = c
                children[c] = ()
                last = c
            continue
        u, v = g.edges[c]
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv:
            if c in crit:
                children[c] = (top[ru],)
                top[ru] = c
                last = c
            continue
        if c in crit:
            first, second = (ru, rv) if low[ru] < low[rv] else (rv, ru)
            children[c] = (top[first], top[second])
            last = c
            new_top = c
        else:
            # matched edge: the newcomer vertex carries no node of its own
            new_top = top.get(ru) if ru in top else top.get(rv)
        m = min(low[ru], low[rv])
        r = uf.union(ru, rv)
        low[r] = m
        top[r] = new_top

    chirality = {last: L}
    stack = [last]
    while stack:
        n = stack.pop()
        cs = children[n]
        if len(cs) == 1:
            chirality[cs[0]] = chirality[n]
        elif len(cs) == 2:
            chirality[cs[0]] = chirality[n]
            chirality[cs[1]] = opposite(chirality[n])
        stack.extend(cs)

    tree = GeneralizedMergeTree(last, children, chirality)
    labeling = {n: f[n] for n in children}
    return InducedTreeResult(tree, labeling, {c: c for c in children})


def subtree_component_check(g: MultiGraph, f: DMF, s: CellId, result: InducedTreeResult = None) -> bool:
    """The rooted subtree at M(s) against the tree induced by the component of s
    at level f(s); chiralities are compared flipped when M(s) has chirality R."""
    result = result or induce_merge_tree(g, f)
    node = result.correspondence[s]
    comp = component_of(sublevel(g, f, f[s]), s)
    sub_g = g.subgraph(comp)
    sub_f = {c: f[c] for c in comp}
    local = induce_merge_tree(sub_g, sub_f, check=False)
    mine = subtree(result.tree, node)
    if result.tree.chirality[node] != L:
        mine = flip_chirality(mine)
    return canonical_form(mine, result.labeling) == canonical_form(local.tree, local.labeling)
