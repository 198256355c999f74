"""
Exhaustive generation of small instances and the independent oracles used to
check the two-way correspondence between dMfs and merge trees.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import random
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .cwcomplex import (CellId, MultiGraph, UnionFind, Value, betti, closing_edges, critical_cells,
                        make_index_ordered_dmf)
from .induce import InducedTreeResult, induce_merge_tree, subtree_component_check
from .invert import phi
from .io import graph_to_doc, tree_to_doc
from .mergetree import (GeneralizedMergeTree, L, R, is_morse_order, iso_gml, label_to_order,
                        merge_equivalent_orders, morse_orders, opposite, order_to_label, sc_order,
                        validate_gmt)
from .realize import NotRealizable, check_realizable, planarity_oracle, realize_planar, realize_simple

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationBudget:
    max_vertices: int = 4
    max_edges: int = 6
    max_tree_nodes: int = 9
    seed: int = 0

    def __post_init__(self):
        if self.max_vertices < 1 or self.max_tree_nodes < 1 or self.max_edges < 0:
            raise ValueError("budget bounds must be positive (edges may be 0)")


# =============================================================================
# Multigraphs
# =============================================================================

def _multiplicity_canon(n: int, mult: Dict[Tuple[int, int], int]) -> tuple:
    """Smallest multiplicity table over vertex relabelings that respect degree."""
    deg = [0] * n
    for (i, j), k in mult.items():
        deg[i] += k
        deg[j] += k
    classes: Dict[int, List[int]] = {}
    for v in range(n):
        classes.setdefault(deg[v], []).append(v)
    keys = sorted(classes)
    best = None
    for combo in itertools.product(*(itertools.permutations(classes[k]) for k in keys)):
        order = [v for block in combo for v in block]  # order[new] = old
        where = {old: new for new, old in enumerate(order)}
        table = tuple(sorted((min(where[i], where[j]), max(where[i], where[j]), k) for (i, j), k in mult.items()))
        if best is None or table < best:
            best = table
    return (n, tuple(deg[v] for v in sorted(range(n), key=lambda v: deg[v])), best)


def _is_connected_table(n: int, mult) -> bool:
    uf = UnionFind(range(n))
    for (i, j) in mult:
        uf.union(i, j)
    return len({uf.find(v) for v in range(n)}) == 1


def _graph_from_table(n: int, mult) -> MultiGraph:
    vertices = tuple(f"v{i}" for i in range(n))
    edges, k = {}, 0
    for (i, j), m in sorted(mult.items()):
        for _ in range(m):
            edges[f"e{k}"] = (f"v{i}", f"v{j}")
            k += 1
    return MultiGraph(vertices, edges)


def enumerate_multigraphs(budget: EnumerationBudget) -> Iterator[MultiGraph]:
    """Connected loopless multigraphs within the budget, one per isomorphism
    class, ordered by (vertices, edges).  The single vertex is included."""
    for n in range(1, budget.max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(max(n - 1, 0), budget.max_edges + 1):
            seen: Set[tuple] = set()
            for counts in _compositions(m, len(pairs)):
                mult = {pr: k for pr, k in zip(pairs, counts) if k}
                if not _is_connected_table(n, mult):
                    continue
                key = _multiplicity_canon(n, mult)
                if key in seen:
                    continue
                seen.add(key)
                yield _graph_from_table(n, mult)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def graph_automorphisms(g: MultiGraph) -> List[Dict[CellId, CellId]]:
    """Every cell permutation preserving incidence, parallel edges included."""
    verts = list(g.vertices)
    classes: Dict[frozenset, List[CellId]] = {}
    for e in g.edges:
        classes.setdefault(frozenset(g.edges[e]), []).append(e)
    mult = {k: len(v) for k, v in classes.items()}
    out = []
    for perm in itertools.permutations(verts):
        vmap = dict(zip(verts, perm))
        if any(mult.get(frozenset(vmap[x] for x in key), 0) != k for key, k in mult.items()):
            continue
        options = []
        for key, es in classes.items():
            u, w = tuple(key)
            image = classes[frozenset((vmap[u], vmap[w]))]
            options.append([list(zip(es, p)) for p in itertools.permutations(image)])
        for combo in itertools.product(*options):
            a = dict(vmap)
            for pairs in combo:
                a.update(pairs)
            out.append(a)
    return out


def enumerate_critical_dmfs(g: MultiGraph) -> Iterator[Dict[CellId, int]]:
    """Index-ordered dMfs on ``g``, one per orbit of the automorphism group."""
    auts = graph_automorphisms(g)
    cells = list(g.cells)
    for vo in itertools.permutations(g.vertices):
        for eo in itertools.permutations(g.edges):
            f = make_index_ordered_dmf(g, vo, eo)
            key = tuple(f[c] for c in cells)
            # keep f only if no automorphism produces a smaller value tuple
            if all(tuple(f[a[c]] for c in cells) >= key for a in auts):
                yield f


# =============================================================================
# Trees
# =============================================================================

def _shapes(size: int, chirality: str, allow_leaf: bool = True) -> Iterator[Tuple[str, tuple]]:
    """Chiral tree shapes as nested tuples (chirality, children)."""
    if size == 1:
        if allow_leaf:
            yield (chirality, ())
        return
    for child in _shapes(size - 1, chirality, allow_leaf=False):
        yield (chirality, (child,))
    for left in range(1, size - 1):
        right = size - 1 - left
        # the first slot copies the parent's chirality, the second takes the other one
        for a in _shapes(left, chirality):
            for b in _shapes(right, opposite(chirality)):
                yield (chirality, (a, b))


def _tree_from_shape(shape) -> GeneralizedMergeTree:
    children, chirality = {}, {}
    counter = itertools.count()

    def build(s):
        n = next(counter)
        chirality[n] = s[0]
        children[n] = tuple(build(c) for c in s[1])
        return n

    root = build(shape)
    return GeneralizedMergeTree(root, children, chirality)


def enumerate_gmt_shapes(max_nodes: int) -> Iterator[GeneralizedMergeTree]:
    """Every generalized merge tree with at most ``max_nodes`` nodes; distinct
    shapes are non-isomorphic because the child slots carry fixed chiralities."""
    for size in range(1, max_nodes + 1):
        for shape in _shapes(size, L, allow_leaf=True):
            yield _tree_from_shape(shape)


def enumerate_gml_trees(budget: EnumerationBudget) -> Iterator[Tuple[GeneralizedMergeTree, Dict[int, int]]]:
    for t in enumerate_gmt_shapes(budget.max_tree_nodes):
        for seq in morse_orders(t):
            yield t, {n: i for i, n in enumerate(seq)}


def brute_force_labelings(t: GeneralizedMergeTree) -> List[Dict]:
    """All labelings 0..n-1 that pass the axiom check (filter oracle)."""
    nodes = list(t.nodes)
    out = []
    for perm in itertools.permutations(range(len(nodes))):
        lab = dict(zip(nodes, perm))
        if is_morse_order(t, lab):
            out.append(lab)
    return out


# =============================================================================
# Oracles
# =============================================================================

def value_partitions(g: MultiGraph, f) -> List[Tuple[Value, frozenset]]:
    """For every value a: the components of the sublevel complex at a, each
    given as the set of values on it."""
    uf = UnionFind()
    out = []
    for c in sorted(g.cells, key=lambda c: (f[c], g.is_edge(c))):
        if g.is_vertex(c):
            uf.add(c)
        else:
            uf.union(*g.edges[c])
        present = [x for x in g.cells if f[x] <= f[c]]
        groups: Dict[CellId, set] = {}
        for x in present:
            anchor = x if g.is_vertex(x) else g.edges[x][0]
            groups.setdefault(uf.find(anchor), set()).add(f[x])
        out.append((f[c], frozenset(frozenset(s) for s in groups.values())))
    return out


def cm_equivalent_direct(g1: MultiGraph, f1, g2: MultiGraph, f2) -> bool:
    """Component-merge equivalence decided from the definition: matching values
    on cells of the same dimension, and identical value-partitions of every
    sublevel complex (which pins down every merge and every closed circle).
    Only defined for dMfs whose cells are all critical."""
    for g, f in ((g1, f1), (g2, f2)):
        if len(critical_cells(g, f)) != len(g.cells):
            raise ValueError("the direct cm check needs dMfs whose cells are all critical")
    kinds1 = {f1[c]: g1.is_edge(c) for c in g1.cells}
    kinds2 = {f2[c]: g2.is_edge(c) for c in g2.cells}
    if kinds1 != kinds2:
        return False
    return value_partitions(g1, f1) == value_partitions(g2, f2)


def planar_by_minors(g: MultiGraph) -> bool:
    """Planarity by searching for a K5 or K3,3 minor.

    A minor is given by disjoint connected branch sets; we enumerate every
    partition of the vertices into connected blocks and look for five
    pairwise adjacent blocks or a 3+3 split with all cross adjacencies.
    """
    verts = list(g.vertices)
    n = len(verts)
    adj = {v: set() for v in verts}
    for u, v in g.edges.values():
        adj[u].add(v)
        adj[v].add(u)

    def connected(block):
        block = set(block)
        start = next(iter(block))
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in block and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == block

    def has_forbidden(blocks):
        m = len(blocks)
        touch = [[False] * m for _ in range(m)]
        for i in range(m):
            reach = set().union(*(adj[x] for x in blocks[i]))
            for j in range(m):
                touch[i][j] = i != j and bool(reach & blocks[j])
        for five in itertools.combinations(range(m), 5):
            if all(touch[a][b] for a, b in itertools.combinations(five, 2)):
                return True
        for six in itertools.combinations(range(m), 6):
            for side in itertools.combinations(six[1:], 2):
                left = (six[0],) + side
                right = [x for x in six if x not in left]
                if all(touch[a][b] for a in left for b in right):
                    return True
        return False

    # restricted growth strings with at least five blocks
    def partitions(i, blocks):
        if len(blocks) + (n - i) < 5:
            return
        if i == n:
            yield blocks
            return
        v = verts[i]
        for b in blocks:
            b.add(v)
            yield from partitions(i + 1, blocks)
            b.discard(v)
        blocks.append({v})
        yield from partitions(i + 1, blocks)
        blocks.pop()

    for blocks in partitions(0, []):
        if all(connected(b) for b in blocks) and has_forbidden([frozenset(b) for b in blocks]):
            return False
    return True


# =============================================================================
# Suite
# =============================================================================

@dataclass
class Counterexample:
    prop: str
    instance: dict
    detail: str = ""


@dataclass
class SuiteReport:
    counts: Dict[str, int] = field(default_factory=dict)
    failures: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def bump(self, key: str, k: int = 1):
        self.counts[key] = self.counts.get(key, 0) + k

    def fail(self, prop: str, instance: dict, detail: str = ""):
        self.failures.append(Counterexample(prop, instance, detail))

    def dump(self, directory: str) -> List[str]:
        os.makedirs(directory, exist_ok=True)
        paths = []
        for i, cx in enumerate(self.failures):
            path = os.path.join(directory, f"counterexample_{i:03d}_{cx.prop}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump({"property": cx.prop, "detail": cx.detail, "instance": cx.instance},
                          fh, sort_keys=True, indent=2)
            paths.append(path)
        return paths


InduceFn = Callable[..., InducedTreeResult]


def roundtrip_suite(budget: EnumerationBudget, induce_fn: InduceFn = induce_merge_tree,
                    max_failures: int = 20, direct_cm_cells: int = 6,
                    rational_samples: int = 50) -> SuiteReport:
    """Check every correspondence property on every instance in the budget.

    ``induce_fn`` is injectable so that a deliberately broken construction can
    be shown to be caught.
    """
    rep = SuiteReport()

    def full():
        return len(rep.failures) >= max_failures

    small: List[Tuple[MultiGraph, dict, InducedTreeResult]] = []
    for g in enumerate_multigraphs(budget):
        rep.bump("graphs")
        b1 = betti(g)[1]
        for f in enumerate_critical_dmfs(g):
            if full():
                return rep
            rep.bump("dmfs")
            inst = graph_to_doc(g, f)
            res = induce_fn(g, f)
            t, lab = res.tree, res.labeling
            if not validate_gmt(t).ok or not is_morse_order(t, lab):
                rep.fail("induced_tree_valid", inst)
                continue
            back = phi(t, lab, check=False)
            again = induce_fn(back.graph, back.dmf)
            if not iso_gml(again.tree, again.labeling, t, lab):
                rep.fail("graph_roundtrip", inst)
            if len(closing_edges(g, f)) != b1:
                rep.fail("closing_count_is_b1", inst)
            for s in critical_cells(g, f):
                if not subtree_component_check(g, f, s, res):
                    rep.fail("subtree_component", inst, f"cell {s}")
                    break
            if len(g.cells) <= direct_cm_cells:
                if not cm_equivalent_direct(g, f, back.graph, back.dmf):
                    rep.fail("cm_direct_roundtrip", inst)
                small.append((g, f, res))

    # cm equivalence decided directly must agree with tree isomorphism on tiny graphs
    for (g1, f1, r1), (g2, f2, r2) in itertools.combinations(small, 2):
        if full():
            return rep
        rep.bump("cm_pairs")
        direct = cm_equivalent_direct(g1, f1, g2, f2)
        via_tree = iso_gml(r1.tree, r1.labeling, r2.tree, r2.labeling)
        if direct != via_tree:
            rep.fail("cm_vs_tree_iso", {"a": graph_to_doc(g1, f1), "b": graph_to_doc(g2, f2)},
                     f"direct={direct} tree={via_tree}")

    for t in enumerate_gmt_shapes(budget.max_tree_nodes):
        if full():
            return rep
        rep.bump("shapes")
        sc = sc_order(t)
        if not is_morse_order(t, sc):
            rep.fail("sc_is_morse", tree_to_doc(t))
        for seq in morse_orders(t):
            if full():
                return rep
            rep.bump("labeled_trees")
            lab = {n: i for i, n in enumerate(seq)}
            inst = tree_to_doc(t, lab)
            if not (is_morse_order(t, lab, "min_child") and is_morse_order(t, lab, "path")):
                rep.fail("morse_formulations_agree", inst)
            if label_to_order(t, order_to_label(t, lab)) != lab:
                rep.fail("label_order_inverse", inst)
            back = phi(t, lab, check=False)
            again = induce_fn(back.graph, back.dmf)
            if not iso_gml(again.tree, again.labeling, t, lab):
                rep.fail("tree_roundtrip", inst)
            if not merge_equivalent_orders(t, lab, sc):
                rep.fail("orders_merge_equivalent", inst)
        for mode, fn in (("simple", realize_simple), ("planar", realize_planar)):
            if not check_realizable(t, mode).ok:
                continue
            rep.bump(f"realized_{mode}")
            try:
                r = fn(t)
            except (NotRealizable, AssertionError) as exc:
                rep.fail(f"realize_{mode}", tree_to_doc(t), str(exc))
                continue
            again = induce_fn(r.graph, r.dmf)
            if not r.graph.is_simple() or not iso_gml(again.tree, again.labeling, t, r.labels):
                rep.fail(f"realize_{mode}_roundtrip", tree_to_doc(t, r.labels))
            if mode == "planar" and not planarity_oracle(r.graph):
                rep.fail("realize_planar_is_planar", tree_to_doc(t, r.labels))
    # the correspondence only sees the order of the labels: resample them as
    # random increasing rationals and check the round trip again
    rng = random.Random(budget.seed)
    pool = list(enumerate_gml_trees(budget))
    for t, lab in rng.sample(pool, min(rational_samples, len(pool))):
        if full():
            return rep
        rep.bump("rational_labelings")
        acc, frac = Fraction(rng.randint(-5, 5)), {}
        for n in sorted(lab, key=lab.get):
            acc += Fraction(rng.randint(1, 9), rng.randint(1, 9))
            frac[n] = acc
        back = phi(t, frac, check=False)
        again = induce_fn(back.graph, back.dmf)
        if not iso_gml(again.tree, again.labeling, t, frac):
            rep.fail("rational_roundtrip", tree_to_doc(t, frac))
    log.info("roundtrip suite counts: %s", rep.counts)
    return rep


def flip_one_chirality(induce_fn: InduceFn = induce_merge_tree) -> InduceFn:
    """A broken induce that flips the chirality of the first leaf it can."""

    def broken(g, f, check=True):
        res = induce_fn(g, f, check)
        t = res.tree
        leaves = [n for n in t.postorder() if t.is_leaf(n)]
        if not leaves:
            return res
        ch = dict(t.chirality)
        ch[leaves[0]] = R if ch[leaves[0]] == L else L
        return InducedTreeResult(GeneralizedMergeTree(t.root, t.children, ch), res.labeling, res.correspondence)

    return broken
