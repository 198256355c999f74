"""
Cancelling critical cells along the induced merge tree.

Leaves are visited by descending label.  Each leaf is paired with its youngest
ancestor that is neither a cycle node nor already matched: directly when the
two cells are incident, after a sublevel symmetry when one makes them
incident, and otherwise according to the chosen :class:`CancelPolicy`.

Internally a matched pair is remembered by its two *values*.  Symmetries
permute values over fixed cell positions, so value pairs survive them; the
cell-level matching is read off at the end.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .cwcomplex import (DMF, CellId, MultiGraph, UnionFind, Value, critical_cells, closing_edges,
                        is_connected, require_dmf)
from .induce import DisconnectedInput, induce_merge_tree
from .mergetree import NodeId

Pair = Tuple[CellId, CellId]  # (vertex, edge)


class CancelPolicy(enum.Enum):
    SKIP = "skip"
    REWIRE = "rewire"
    FLOWLINE = "flowline"


class FlowPathError(RuntimeError):
    """No or several gradient paths where exactly one must exist."""


@dataclass(frozen=True)
class TraceStep:
    leaf: NodeId
    ancestor: Optional[NodeId]
    case: str  # 2a, 2b, 2c-i, 2c-ii, 2c-iii, or "root" when no ancestor is left
    note: str = ""


@dataclass
class CancelOutcome:
    matching: FrozenSet[Pair]
    graph: MultiGraph
    dmf: Dict[CellId, Value]
    trace: List[TraceStep] = field(default_factory=list)

    @property
    def critical(self) -> List[CellId]:
        used = {c for pair in self.matching for c in pair}
        return sorted((c for c in self.graph.cells if c not in used), key=lambda c: self.dmf[c])

    @property
    def critical_vertices(self) -> List[CellId]:
        return [c for c in self.critical if self.graph.is_vertex(c)]

    @property
    def critical_edges(self) -> List[CellId]:
        return [c for c in self.critical if self.graph.is_edge(c)]

    def cases(self) -> List[str]:
        return [s.case for s in self.trace]


# =============================================================================
# Matchings as gradient fields
# =============================================================================

def is_acyclic_matching(g: MultiGraph, pairs: Iterable[Pair]) -> bool:
    """Whether ``pairs`` is a discrete gradient: a matching of incident cells
    whose modified Hasse diagram has no directed cycle."""
    pairs = list(pairs)
    cells = [c for pr in pairs for c in pr]
    if len(cells) != len(set(cells)):
        return False
    if any(not g.is_vertex(v) or not g.is_edge(e) or not g.is_incident(v, e) for v, e in pairs):
        return False
    matched = set(pairs)
    h = nx.DiGraph()
    h.add_nodes_from(g.cells)
    for e, (u, v) in g.edges.items():
        for x in (u, v):
            if (x, e) in matched:
                h.add_edge(x, e)
            else:
                h.add_edge(e, x)
    return nx.is_directed_acyclic_graph(h)


def matched_edges_form_forest(g: MultiGraph, pairs: Iterable[Pair]) -> bool:
    uf = UnionFind(g.vertices)
    for _, e in pairs:
        u, v = g.edges[e]
        if uf.connected(u, v):
            return False
        uf.union(u, v)
    return True


def gradient_flow_path(g: MultiGraph, matching: Iterable[Pair], source: CellId, target: CellId,
                       f: Optional[DMF] = None) -> List[CellId]:
    """The alternating path ``source, e1, v1, ..., ek, vk, target`` in which
    every ``(v_i, e_i)`` is matched and ``v_i`` is the far end of ``e_i``.

    With ``f`` given only cells below ``f[target]`` may be used.  Raises
    :class:`FlowPathError` unless exactly one such path exists.
    """
    partner = {e: v for v, e in matching}
    bound = None if f is None else f[target]
    incident: Dict[CellId, List[CellId]] = {v: [] for v in g.vertices}
    for e, (a, b) in g.edges.items():
        incident[a].append(e)
        incident[b].append(e)
    found: List[List[CellId]] = []
    stack = [(source, None, [source])]
    while stack:
        x, came, path = stack.pop()
        for e in incident[x]:
            if e == came:
                continue
            if e == target:
                found.append(path + [e])
                continue
            w = partner.get(e)
            if w is None or w == x or w in path:
                continue
            if bound is not None and (f[e] >= bound or f[w] >= bound):
                continue
            stack.append((w, e, path + [e, w]))
        if len(found) > 1:
            break
    if len(found) != 1:
        raise FlowPathError(f"expected one gradient path from {source!r} to {target!r}, found {len(found)}")
    return found[0]


def reverse_flow(matching: Iterable[Pair], path: Sequence[CellId]) -> Set[Pair]:
    """Reverse the gradient along ``path``; both its ends become matched."""
    out = set(matching)
    for i in range(1, len(path) - 1, 2):
        out.discard((path[i + 1], path[i]))
    for i in range(0, len(path) - 1, 2):
        out.add((path[i], path[i + 1]))
    return out


# =============================================================================
# Sublevel symmetries
# =============================================================================

def _components_containing(g: MultiGraph, f: DMF, a: CellId, b: CellId, below: Value
                           ) -> Iterator[Tuple[Value, Set[CellId]]]:
    """Distinct components of sublevel complexes under ``below`` that hold both
    ``a`` and ``b``, smallest first, each with its level."""
    uf = UnionFind()
    members: Dict[CellId, Set[CellId]] = {}
    for c in sorted((c for c in g.cells if f[c] < below), key=lambda c: (f[c], g.is_edge(c))):
        if g.is_vertex(c):
            uf.add(c)
            members[c] = {c}
            touched = c
        else:
            u, v = g.edges[c]
            ru, rv = uf.find(u), uf.find(v)
            if ru != rv:
                r = uf.union(ru, rv)
                other = rv if r == ru else ru
                members[r] |= members.pop(other)
            touched = uf.find(u)
            members[touched].add(c)
        if a in uf.parent and b in uf.parent and uf.find(a) == uf.find(b) == uf.find(touched):
            yield f[c], set(members[uf.find(a)])


def _vertex_automorphisms(g: MultiGraph, comp: Set[CellId], fixed: Tuple[CellId, CellId]
                          ) -> Iterator[Dict[CellId, CellId]]:
    """Vertex maps of the component preserving edge multiplicities, with
    ``fixed[0] -> fixed[1]``."""
    verts = [v for v in g.vertices if v in comp]
    mult: Dict[FrozenSet, int] = {}
    deg = {v: 0 for v in verts}
    for e in comp:
        if e in g.edges:
            u, v = g.edges[e]
            mult[frozenset((u, v))] = mult.get(frozenset((u, v)), 0) + 1
            deg[u] += 1
            deg[v] += 1
    src, dst = fixed
    if deg[src] != deg[dst]:
        return
    # breadth-first order from the pinned vertex keeps the search tight
    order, seen = [src], {src}
    for x in order:
        for y in verts:
            if y not in seen and frozenset((x, y)) in mult:
                seen.add(y)
                order.append(y)
    order += [v for v in verts if v not in seen]

    def rec(i, amap, used):
        if i == len(order):
            yield dict(amap)
            return
        x = order[i]
        for z in ([dst] if i == 0 else verts):
            if z in used or deg[z] != deg[x]:
                continue
            if all(mult.get(frozenset((x, y)), 0) == mult.get(frozenset((z, amap[y])), 0) for y in order[:i]):
                amap[x] = z
                used.add(z)
                yield from rec(i + 1, amap, used)
                used.discard(z)
                del amap[x]

    yield from rec(0, {}, set())


def _cell_automorphisms(g: MultiGraph, comp: Set[CellId], vmap: Dict[CellId, CellId]
                        ) -> Iterator[Dict[CellId, CellId]]:
    """Extend a vertex automorphism to edges, trying every matching of parallel classes."""
    classes: Dict[FrozenSet, List[CellId]] = {}
    for e in sorted(c for c in comp if c in g.edges):
        classes.setdefault(frozenset(g.edges[e]), []).append(e)
    keys = list(classes)
    options = []
    for k in keys:
        u, v = tuple(k)
        image = classes[frozenset((vmap[u], vmap[v]))]
        options.append([list(zip(classes[k], perm)) for perm in itertools.permutations(image)])
    for combo in itertools.product(*options):
        a = dict(vmap)
        for pairs in combo:
            a.update(pairs)
        yield a


def find_symmetry_equivalence(g: MultiGraph, f: DMF, c_cell: CellId, p_cell: CellId,
                              matching: Iterable[Pair] = (), cap: int = 12,
                              report: Optional[dict] = None) -> Optional[Dict[CellId, CellId]]:
    """A sublevel automorphism ``a`` after which ``c_cell``'s value sits on a
    vertex incident to ``p_cell``.

    The new function is ``f o a``: position ``x`` takes the value of ``a(x)``.
    Candidates are automorphisms of single components of sublevel complexes
    below ``f[p_cell]`` (extended by the identity) that keep every pair of
    ``matching`` incident once transported.  Components with more than ``cap``
    cells are skipped; ``report["capped"]`` records whether that happened.
    Returns ``{}`` (the identity) when the cells are already incident and
    ``None`` when the search finds nothing.
    """
    if report is not None:
        report.setdefault("capped", False)
    if g.is_incident(c_cell, p_cell):
        return {}
    matching = list(matching)
    seen: Set[FrozenSet] = set()
    for y in dict.fromkeys(g.edges[p_cell]):
        for _, comp in _components_containing(g, f, c_cell, y, f[p_cell]):
            key = frozenset(comp)
            if key in seen:
                continue
            seen.add(key)
            if len(comp) > cap:
                if report is not None:
                    report["capped"] = True
                continue
            for vmap in _vertex_automorphisms(g, comp, (y, c_cell)):
                for a in _cell_automorphisms(g, comp, vmap):
                    inv = {v: k for k, v in a.items()}
                    if all(g.is_incident(inv.get(v, v), inv.get(e, e)) for v, e in matching):
                        return a
    return None


def apply_symmetry(f: DMF, a: Dict[CellId, CellId]) -> Dict[CellId, Value]:
    return {x: f[a.get(x, x)] for x in f}


# =============================================================================
# The sweep
# =============================================================================

def _rewire(g: MultiGraph, f: DMF, c_cell: CellId, p_cell: CellId) -> MultiGraph:
    """Re-attach ``p_cell``: its end in the component of ``c_cell`` below
    ``f[p_cell]`` moves to ``c_cell``, the other end stays."""
    uf = UnionFind(v for v in g.vertices if f[v] < f[p_cell])
    for e, (u, v) in g.edges.items():
        if f[e] < f[p_cell]:
            uf.union(u, v)
    a, b = g.edges[p_cell]
    keep = b if uf.connected(a, c_cell) else a
    return g.with_edge(p_cell, keep, c_cell)


def cancel(g: MultiGraph, f: DMF, policy: CancelPolicy = CancelPolicy.FLOWLINE,
           symmetry_cap: int = 12) -> CancelOutcome:
    policy = CancelPolicy(policy)
    require_dmf(g, f)
    if not is_connected(g):
        raise DisconnectedInput("cancel requires connected input")
    if len(critical_cells(g, f)) != len(g.cells):
        raise ValueError("cancel expects a dMf whose cells are all critical")

    induced = induce_merge_tree(g, f, check=False)
    t, label = induced.tree, induced.labeling
    val: Dict[CellId, Value] = dict(f)
    pos: Dict[Value, CellId] = {x: c for c, x in val.items()}
    pairs: Dict[Value, Value] = {}  # vertex value -> edge value
    matched: Set[Value] = set()
    trace: List[TraceStep] = []

    def cell_pairs():
        return [(pos[x], pos[y]) for x, y in pairs.items()]

    for c in sorted(t.leaves(), key=lambda n: label[n], reverse=True):
        p = next((a for a in t.ancestors(c) if not t.is_cycle_node(a) and label[a] not in matched), None)
        if p is None:
            trace.append(TraceStep(c, None, "root"))
            continue
        vc, ep = pos[label[c]], pos[label[p]]
        lc, lp = label[c], label[p]
        if g.is_incident(vc, ep):
            case, note = "2a", ""
        else:
            info: dict = {}
            a = find_symmetry_equivalence(g, val, vc, ep, cell_pairs(), symmetry_cap, info)
            note = "symmetry search capped" if info.get("capped") else ""
            if a is not None:
                val = apply_symmetry(val, a)
                pos = {x: cc for cc, x in val.items()}
                case = "2b"
            elif policy is CancelPolicy.SKIP:
                trace.append(TraceStep(c, p, "2c-i", note))
                continue
            elif policy is CancelPolicy.REWIRE:
                g = _rewire(g, val, vc, ep)
                case = "2c-ii"
            else:
                path = gradient_flow_path(g, cell_pairs(), vc, ep, val)
                new = reverse_flow(cell_pairs(), path)
                pairs = {val[v]: val[e] for v, e in new}
                matched = set(pairs) | set(pairs.values())
                trace.append(TraceStep(c, p, "2c-iii", note))
                continue
        pairs[lc] = lp
        matched |= {lc, lp}
        trace.append(TraceStep(c, p, case, note))

    return CancelOutcome(frozenset(cell_pairs()), g, val, trace)


def optimal_critical_counts(g: MultiGraph) -> Tuple[int, int]:
    """(1, b1) for a connected graph: the least numbers of critical vertices and edges."""
    return 1, len(g.edges) - len(g.vertices) + 1


def closing_edges_after(outcome: CancelOutcome) -> List[CellId]:
    return closing_edges(outcome.graph, outcome.dmf)
