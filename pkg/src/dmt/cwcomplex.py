"""
Multigraphs (1-dimensional regular CW complexes) and discrete Morse functions on them.

Cells are referred to by opaque string ids.  Vertex ids and edge ids share one
namespace, so a cell id identifies exactly one vertex or one edge.  Values are
exact: ``int`` or ``fractions.Fraction``; floats are rejected so that the
2-1 and incidence rules compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

Value = Union[int, Fraction]
CellId = str
DMF = Mapping[CellId, Value]


class MalformedInput(ValueError):
    """Structurally broken input (missing values, dangling ids, loops...)."""


# =============================================================================
# Union-find
# =============================================================================

class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, items: Iterable = ()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def connected(self, a, b) -> bool:
        return self.find(a) == self.find(b)


# =============================================================================
# Multigraph
# =============================================================================

@dataclass(frozen=True)
class MultiGraph:
    """A finite multigraph without degenerate loops.

    ``edges`` maps an edge id to its (ordered for storage, unordered in meaning)
    endpoint pair.  Parallel edges are distinct ids with the same endpoints.
    """

    vertices: Tuple[CellId, ...] = ()
    edges: Dict[CellId, Tuple[CellId, CellId]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", {e: (u, v) for e, (u, v) in self.edges.items()})
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise MalformedInput("duplicate vertex id")
        for e, (u, v) in self.edges.items():
            if e in vset:
                raise MalformedInput(f"id {e!r} used for both a vertex and an edge")
            if u not in vset or v not in vset:
                raise MalformedInput(f"edge {e!r} has an endpoint outside the vertex set")
            if u == v:
                raise MalformedInput(f"edge {e!r} is a degenerate loop at {u!r}")

    __hash__ = None  # type: ignore[assignment]

    @property
    def cells(self) -> Tuple[CellId, ...]:
        return self.vertices + tuple(self.edges)

    def is_vertex(self, c: CellId) -> bool:
        return c in self._vertex_set

    def is_edge(self, c: CellId) -> bool:
        return c in self.edges

    @property
    def _vertex_set(self) -> frozenset:
        vs = self.__dict__.get("_vs")
        if vs is None:
            vs = frozenset(self.vertices)
            object.__setattr__(self, "_vs", vs)
        return vs

    def endpoints(self, e: CellId) -> Tuple[CellId, CellId]:
        return self.edges[e]

    def incident_edges(self, v: CellId) -> List[CellId]:
        return [e for e, (a, b) in self.edges.items() if a == v or b == v]

    def is_incident(self, v: CellId, e: CellId) -> bool:
        return v in self.edges[e]

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges.values():
            key = frozenset((u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def subgraph(self, cells: Iterable[CellId]) -> "MultiGraph":
        keep = set(cells)
        return MultiGraph(
            tuple(v for v in self.vertices if v in keep),
            {e: uv for e, uv in self.edges.items() if e in keep},
        )

    def without_edges(self, removed: Iterable[CellId]) -> "MultiGraph":
        gone = set(removed)
        return MultiGraph(self.vertices, {e: uv for e, uv in self.edges.items() if e not in gone})

    def with_edge(self, e: CellId, u: CellId, v: CellId) -> "MultiGraph":
        edges = dict(self.edges)
        edges[e] = (u, v)
        return MultiGraph(self.vertices, edges)

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return (set(self.vertices) == set(other.vertices)
                and {e: frozenset(uv) for e, uv in self.edges.items()}
                == {e: frozenset(uv) for e, uv in other.edges.items()})


# =============================================================================
# Values and validation
# =============================================================================

def as_value(x) -> Value:
    """Coerce ``x`` to an exact value; ints stay ints, integral fractions collapse to int."""
    if isinstance(x, bool):
        raise MalformedInput(f"boolean is not a valid value: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise MalformedInput(f"not a rational value: {x!r}") from err
        return int(q) if q.denominator == 1 else q
    raise MalformedInput(f"values must be int or rational strings, got {type(x).__name__}: {x!r}")


@dataclass
class ValidationReport:
    ok: bool
    violations: List[str] = field(default_factory=list)
    malformed: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_dmf(g: MultiGraph, f: DMF) -> ValidationReport:
    """Check that ``f`` is a discrete Morse function on ``g``.

    Missing or non-exact values are reported under ``malformed``; violations of
    weak monotonicity, the 2-1 rule or the incidence rule under ``violations``.
    """
    malformed = [f"missing value for cell {c!r}" for c in g.cells if c not in f]
    for c in g.cells:
        if c in f:
            try:
                as_value(f[c])
            except MalformedInput as err:
                malformed.append(f"cell {c!r}: {err}")
    extra = [c for c in f if c not in g.edges and not g.is_vertex(c)]
    malformed.extend(f"value given for unknown cell {c!r}" for c in extra)
    if malformed:
        return ValidationReport(False, [], malformed)

    violations = []
    for e, (u, v) in g.edges.items():
        for w in (u, v):
            if f[w] > f[e]:
                violations.append(f"not weakly increasing: f({w})={f[w]} > f({e})={f[e]}")

    by_value: Dict[Value, List[CellId]] = {}
    for c in g.cells:
        by_value.setdefault(f[c], []).append(c)
    for val, cs in by_value.items():
        if len(cs) >= 3:
            violations.append(f"not at most 2-1: value {val} taken by {sorted(cs)}")
        elif len(cs) == 2:
            a, b = cs
            if g.is_edge(a) and not g.is_edge(b):
                a, b = b, a
            if not (g.is_vertex(a) and g.is_edge(b) and g.is_incident(a, b)):
                violations.append(
                    f"non-incident equal pair: f({a}) = f({b}) = {val}")
    return ValidationReport(not violations, violations, [])


def require_dmf(g: MultiGraph, f: DMF) -> None:
    rep = validate_dmf(g, f)
    if rep.malformed:
        raise MalformedInput("; ".join(rep.malformed))
    if not rep.ok:
        raise ValueError("not a discrete Morse function: " + "; ".join(rep.violations))


def critical_cells(g: MultiGraph, f: DMF) -> List[CellId]:
    """Cells that are the unique preimage of their value, sorted by value."""
    counts: Dict[Value, int] = {}
    for c in g.cells:
        counts[f[c]] = counts.get(f[c], 0) + 1
    return sorted((c for c in g.cells if counts[f[c]] == 1), key=lambda c: f[c])


def is_critical(g: MultiGraph, f: DMF, c: CellId) -> bool:
    val = f[c]
    return sum(1 for x in g.cells if f[x] == val) == 1


# =============================================================================
# Sublevel complexes, components, Betti numbers
# =============================================================================

@dataclass(frozen=True)
class SublevelComplex:
    parent: MultiGraph
    threshold: Value
    strict: bool
    graph: MultiGraph

    __hash__ = None  # type: ignore[assignment]


def sublevel(g: MultiGraph, f: DMF, a: Value, strict: bool = False) -> SublevelComplex:
    if strict:
        keep = [c for c in g.cells if f[c] < a]
    else:
        keep = [c for c in g.cells if f[c] <= a]
    return SublevelComplex(g, a, strict, g.subgraph(keep))


def _as_graph(x) -> MultiGraph:
    return x.graph if isinstance(x, SublevelComplex) else x


def components(sub) -> List[frozenset]:
    """Connected components as frozensets of cells (vertices and edges)."""
    g = _as_graph(sub)
    uf = UnionFind(g.vertices)
    for u, v in g.edges.values():
        uf.union(u, v)
    groups: Dict[CellId, set] = {}
    for v in g.vertices:
        groups.setdefault(uf.find(v), set()).add(v)
    for e, (u, _) in g.edges.items():
        groups[uf.find(u)].add(e)
    return [frozenset(s) for s in groups.values()]


def component_of(sub, s: CellId) -> frozenset:
    for comp in components(sub):
        if s in comp:
            return comp
    raise KeyError(f"cell {s!r} is not in the complex")


def betti(g) -> Tuple[int, int]:
    g = _as_graph(g)
    uf = UnionFind(g.vertices)
    b0 = len(g.vertices)
    for u, v in g.edges.values():
        if not uf.connected(u, v):
            uf.union(u, v)
            b0 -= 1
    return b0, len(g.edges) - len(g.vertices) + b0


def is_connected(g: MultiGraph) -> bool:
    return len(g.vertices) > 0 and betti(g)[0] == 1


# =============================================================================
# Closing edges
# =============================================================================

def is_closing_edge(g: MultiGraph, f: DMF, e: CellId) -> bool:
    if not is_critical(g, f, e):
        raise ValueError(f"closing is only defined for critical edges; {e!r} is matched")
    u, v = g.endpoints(e)
    below = sublevel(g, f, f[e], strict=True).graph
    uf = UnionFind(below.vertices)
    for a, b in below.edges.values():
        uf.union(a, b)
    return u in uf.parent and v in uf.parent and uf.connected(u, v)


def closing_edges(g: MultiGraph, f: DMF) -> List[CellId]:
    """All closing edges in ascending order of value.

    One sweep over the filtration: a critical edge is closing exactly when its
    endpoints are already joined by cells of strictly smaller value.
    """
    crit = set(critical_cells(g, f))
    uf = UnionFind()
    out = []
    # at equal values a vertex enters before its matched edge
    for c in sorted(g.cells, key=lambda c: (f[c], g.is_edge(c))):
        if g.is_vertex(c):
            uf.add(c)
            continue
        u, v = g.endpoints(c)
        if uf.connected(u, v):
            if c in crit:
                out.append(c)
        else:
            uf.union(u, v)
    return out


def induced_spanning_tree(g: MultiGraph, f: DMF) -> Tuple[MultiGraph, Dict[CellId, Value]]:
    closing = set(closing_edges(g, f))
    tree = g.without_edges(closing)
    return tree, {c: f[c] for c in tree.cells}


def make_index_ordered_dmf(g: MultiGraph, vertex_order: Sequence[CellId],
                           edge_order: Sequence[CellId]) -> Dict[CellId, int]:
    if sorted(vertex_order) != sorted(g.vertices):
        raise ValueError("vertex_order is not a permutation of the vertices")
    if sorted(edge_order) != sorted(g.edges):
        raise ValueError("edge_order is not a permutation of the edges")
    f = {v: i for i, v in enumerate(vertex_order)}
    n = len(vertex_order)
    f.update({e: n + i for i, e in enumerate(edge_order)})
    return f


def graph_from_values(vertices: Mapping[CellId, Value],
                      edges: Mapping[CellId, Tuple[CellId, CellId, Value]]
                      ) -> Tuple[MultiGraph, Dict[CellId, Value]]:
    """Build ``(g, f)`` from ``{vertex: value}`` and ``{edge: (u, v, value)}``."""
    g = MultiGraph(tuple(vertices), {e: (u, v) for e, (u, v, _) in edges.items()})
    f: Dict[CellId, Value] = {v: as_value(x) for v, x in vertices.items()}
    f.update({e: as_value(x) for e, (_, _, x) in edges.items()})
    return g, f


def cell_with_value(f: DMF, value: Value) -> Optional[CellId]:
    for c, x in f.items():
        if x == value:
            return c
    return None
