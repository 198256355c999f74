"""
Generalized merge trees: rooted chiral binary trees whose single-child inner
nodes ("cycle nodes") record the birth of a 1-cycle.

A tree is stored as a root plus a child table and a chirality table.  Morse
orders and Morse labelings are plain dicts ``node -> rank`` / ``node -> value``;
every function comparing them only uses the order of the values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .cwcomplex import MalformedInput, ValidationReport, Value

NodeId = Hashable
Labeling = Mapping[NodeId, Value]
L, R = "L", "R"


def opposite(ch: str) -> str:
    return R if ch == L else L


@dataclass(frozen=True)
class GeneralizedMergeTree:
    root: NodeId
    children: Dict[NodeId, Tuple[NodeId, ...]] = field(default_factory=dict)
    chirality: Dict[NodeId, str] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        kids = {n: tuple(self.children.get(n, ())) for n in self.chirality}
        for n, cs in self.children.items():
            kids.setdefault(n, tuple(cs))
        kids.setdefault(self.root, ())
        for cs in list(kids.values()):
            for c in cs:
                kids.setdefault(c, ())
        # list the L child first; order is re-derivable from chirality
        object.__setattr__(self, "children", {
            n: tuple(sorted(cs, key=lambda c: self.chirality.get(c) != L)) for n, cs in kids.items()})
        object.__setattr__(self, "chirality", dict(self.chirality))

    @property
    def nodes(self) -> Tuple[NodeId, ...]:
        return tuple(self.children)

    @property
    def parent(self) -> Dict[NodeId, NodeId]:
        p = self.__dict__.get("_parent")
        if p is None:
            p = {c: n for n, cs in self.children.items() for c in cs}
            object.__setattr__(self, "_parent", p)
        return p

    def __len__(self):
        return len(self.children)

    def __contains__(self, n):
        return n in self.children

    def is_leaf(self, n) -> bool:
        return n != self.root and not self.children[n]

    def is_cycle_node(self, n) -> bool:
        return len(self.children[n]) == 1

    def leaves(self) -> List[NodeId]:
        return [n for n in self.postorder() if self.is_leaf(n)]

    def child_with(self, n, ch: str) -> Optional[NodeId]:
        for c in self.children[n]:
            if self.chirality[c] == ch:
                return c
        return None

    def postorder(self, start=None) -> List[NodeId]:
        """Children before parents; L child before R child."""
        start = self.root if start is None else start
        out, stack = [], [(start, False)]
        while stack:
            n, done = stack.pop()
            if done:
                out.append(n)
                continue
            stack.append((n, True))
            for c in reversed(self.children[n]):
                stack.append((c, False))
        return out

    def ancestors(self, n) -> Iterator[NodeId]:
        p = self.parent
        while n in p:
            n = p[n]
            yield n

    def depth(self, n) -> int:
        return sum(1 for _ in self.ancestors(n))

    def __eq__(self, other):
        if not isinstance(other, GeneralizedMergeTree):
            return NotImplemented
        return (self.root == other.root
                and {n: frozenset(c) for n, c in self.children.items()}
                == {n: frozenset(c) for n, c in other.children.items()}
                and self.chirality == other.chirality)


# =============================================================================
# Construction helpers
# =============================================================================

def chirality_from_labeling(root, children: Mapping, labels: Labeling) -> Dict[NodeId, str]:
    """Chiralities forced by a labeling meant to be Morse.

    The root is L, an only child copies its parent, and of two siblings the one
    whose subtree holds the smaller minimum copies the parent.
    """
    sub_min: Dict[NodeId, Value] = {}

    def smin(n):
        if n not in sub_min:
            sub_min[n] = min([labels[n]] + [smin(c) for c in children.get(n, ())])
        return sub_min[n]

    ch = {root: L}
    stack = [root]
    while stack:
        n = stack.pop()
        cs = list(children.get(n, ()))
        if len(cs) == 1:
            ch[cs[0]] = ch[n]
        elif len(cs) == 2:
            a, b = sorted(cs, key=smin)
            ch[a], ch[b] = ch[n], opposite(ch[n])
        stack.extend(cs)
    return ch


def tree_from_labeled_children(root, children: Mapping, labels: Labeling) -> GeneralizedMergeTree:
    return GeneralizedMergeTree(root, {n: tuple(c) for n, c in children.items()},
                                chirality_from_labeling(root, children, labels))


# =============================================================================
# Validation
# =============================================================================

def validate_gmt(t: GeneralizedMergeTree, allow_loops: bool = False) -> ValidationReport:
    """Check the gMT axioms.

    ``allow_loops`` exempts a leaf that is the only child of a cycle node.  Such
    a node is a degenerate loop: trees induced by dMfs with matched cells can
    contain one (collapsing a matched pair can turn a parallel edge into a loop),
    while trees of critical dMfs on multigraphs never do.
    """
    malformed, violations = [], []
    seen_parent: Dict[NodeId, NodeId] = {}
    for n, cs in t.children.items():
        for c in cs:
            if c not in t.children:
                malformed.append(f"node {n!r} lists unknown child {c!r}")
            elif c in seen_parent:
                malformed.append(f"node {c!r} has two parents")
            else:
                seen_parent[c] = n
    if t.root in seen_parent:
        malformed.append(f"root {t.root!r} has a parent")
    reached, stack = set(), [t.root]
    while stack:
        n = stack.pop()
        if n in reached:
            malformed.append(f"structural cycle through {n!r}")
            break
        reached.add(n)
        stack.extend(c for c in t.children.get(n, ()) if c in t.children)
    orphans = set(t.children) - reached
    if orphans:
        malformed.append(f"nodes unreachable from the root: {sorted(map(str, orphans))}")
    missing = [n for n in t.children if t.chirality.get(n) not in (L, R)]
    if missing:
        malformed.append(f"nodes without a valid chirality: {sorted(map(str, missing))}")
    if malformed:
        return ValidationReport(False, [], malformed)

    if t.chirality[t.root] != L:
        violations.append("root chirality must be L")
    for n, cs in t.children.items():
        if len(cs) > 2:
            violations.append(f"node {n!r} has {len(cs)} children")
        elif len(cs) == 1:
            (c,) = cs
            if t.chirality[c] != t.chirality[n]:
                violations.append(f"only child {c!r} must share the chirality of {n!r}")
            if not t.children[c] and not allow_loops:
                violations.append(f"leaf {c!r} has no sibling")
        elif len(cs) == 2:
            a, b = cs
            if t.chirality[a] == t.chirality[b]:
                violations.append(f"children of {n!r} have equal chirality")
    return ValidationReport(not violations, violations, [])


def require_gmt(t: GeneralizedMergeTree) -> None:
    rep = validate_gmt(t)
    if not rep.ok:
        raise ValueError("not a generalized merge tree: " + "; ".join(rep.malformed + rep.violations))


# =============================================================================
# Morse orders and labelings
# =============================================================================

def _subtree_min(t: GeneralizedMergeTree, o: Labeling) -> Dict[NodeId, NodeId]:
    best: Dict[NodeId, NodeId] = {}
    for n in t.postorder():
        m = n
        for c in t.children[n]:
            if o[best[c]] < o[m]:
                m = best[c]
        best[n] = m
    return best


def is_morse_order(t: GeneralizedMergeTree, o: Labeling, formulation: str = "axioms") -> bool:
    """Whether ``o`` (ranks or injective labels) is a Morse order on ``t``.

    ``formulation`` selects one of three equivalent checks: ``"axioms"`` (the
    subtree minimum has the root's chirality), ``"min_child"`` (the minimum lies
    below the child of the root's chirality) or ``"path"`` (every node between
    root and minimum has the root's chirality).  All three require the maximum
    of every subtree at its root.
    """
    if set(o) != set(t.children) or len(set(o.values())) != len(o):
        return False
    for n, cs in t.children.items():
        if any(o[c] > o[n] for c in cs):
            return False
    best = _subtree_min(t, o)
    for p in t.children:
        m = best[p]
        if formulation == "axioms":
            if t.chirality[m] != t.chirality[p]:
                return False
        elif formulation == "min_child":
            if m == p:
                continue
            side = t.child_with(p, t.chirality[p])
            if side is None or best[side] != m:
                return False
        elif formulation == "path":
            n = m
            while n != p:
                if t.chirality[n] != t.chirality[p]:
                    return False
                n = t.parent[n]
        else:
            raise ValueError(f"unknown formulation {formulation!r}")
    return True


is_morse_labeling = is_morse_order


def label_to_order(t: GeneralizedMergeTree, labels: Labeling) -> Dict[NodeId, int]:
    if not is_morse_order(t, labels):
        raise ValueError("labeling is not a Morse labeling")
    return {n: i for i, n in enumerate(sorted(t.children, key=lambda n: labels[n]))}


def order_to_label(t: GeneralizedMergeTree, order: Mapping[NodeId, int]) -> Dict[NodeId, int]:
    if sorted(order.values()) != list(range(len(t))) or not is_morse_order(t, order):
        raise ValueError("not a Morse order with ranks 0..n-1")
    return dict(order)


# =============================================================================
# Path words and the sublevel-connected order
# =============================================================================

def path_word(t: GeneralizedMergeTree, n) -> str:
    chain = [n] + list(t.ancestors(n))
    return "".join(t.chirality[x] for x in reversed(chain))


def sc_compare(t: GeneralizedMergeTree, a, b) -> int:
    """-1 if a <_sc b, 1 if b <_sc a, 0 if a == b."""
    if a == b:
        return 0
    wa, wb = path_word(t, a), path_word(t, b)
    k = 0
    while k + 1 < len(wa) and k + 1 < len(wb) and wa[k + 1] == wb[k + 1]:
        k += 1
    # the shared prefix ends at the lowest common ancestor (chirality wa[k])
    na = wa[k + 1] if k + 1 < len(wa) else None
    nb = wb[k + 1] if k + 1 < len(wb) else None
    if nb is None:
        return -1
    if na is None:
        return 1
    first = wa[k]
    return -1 if na == first else 1


def sc_order(t: GeneralizedMergeTree) -> Dict[NodeId, int]:
    ranked = sorted(t.children, key=cmp_to_key(lambda a, b: sc_compare(t, a, b)))
    return {n: i for i, n in enumerate(ranked)}


# =============================================================================
# Counting, subtrees, underlying tree
# =============================================================================

def cycle_nodes(t: GeneralizedMergeTree) -> List[NodeId]:
    return [n for n in t.postorder() if t.is_cycle_node(n)]


def subtree(t: GeneralizedMergeTree, v) -> GeneralizedMergeTree:
    keep = t.postorder(v)
    return GeneralizedMergeTree(v, {n: t.children[n] for n in keep},
                                {n: t.chirality[n] for n in keep})


def leaf_count(t: GeneralizedMergeTree, v=None) -> int:
    v = t.root if v is None else v
    if v == t.root and not t.children[v]:
        return 1
    return sum(1 for n in t.postorder(v) if not t.children[n])


def cycle_count_below(t: GeneralizedMergeTree, v=None) -> int:
    v = t.root if v is None else v
    return sum(1 for n in t.postorder(v) if len(t.children[n]) == 1)


def flip_chirality(t: GeneralizedMergeTree) -> GeneralizedMergeTree:
    return GeneralizedMergeTree(t.root, t.children, {n: opposite(c) for n, c in t.chirality.items()})


def underlying_tree(t: GeneralizedMergeTree, labels: Optional[Labeling] = None
                    ) -> Tuple[GeneralizedMergeTree, Optional[Dict[NodeId, Value]]]:
    """Splice out every cycle node, linking its parent to its child."""

    def skip(n):
        while len(t.children[n]) == 1:
            n = t.children[n][0]
        return n

    root = skip(t.root)
    children, chirality = {}, {}
    for n in t.postorder(root):
        if len(t.children[n]) == 1:
            continue
        children[n] = tuple(skip(c) for c in t.children[n])
        chirality[n] = t.chirality[n]
    chirality[root] = L
    bar = GeneralizedMergeTree(root, children, chirality)
    lab = None if labels is None else {n: labels[n] for n in children}
    return bar, lab


def oldest_two_child_descendant(t: GeneralizedMergeTree, c) -> NodeId:
    if len(t.children[c]) != 1:
        raise ValueError(f"{c!r} is not a cycle node")
    n = c
    while len(t.children[n]) == 1:
        n = t.children[n][0]
    if not t.children[n]:
        raise ValueError(f"cycle chain below {c!r} ends in a leaf; malformed tree")
    return n


# =============================================================================
# Isomorphism and equivalences
# =============================================================================

def canonical_form(t: GeneralizedMergeTree, labels: Optional[Labeling] = None, n=None):
    """Nested tuple encoding; equal encodings <=> chirality-preserving isomorphism."""
    enc: Dict[NodeId, tuple] = {}
    for x in t.postorder(t.root if n is None else n):
        lab = None if labels is None else labels[x]
        enc[x] = (t.chirality[x], lab, tuple(enc[c] for c in t.children[x]))
    return enc[t.root if n is None else n]


def iso_gml(t1: GeneralizedMergeTree, l1: Labeling, t2: GeneralizedMergeTree, l2: Labeling) -> bool:
    return canonical_form(t1, l1) == canonical_form(t2, l2)


def _ranks(labels: Labeling) -> Dict[NodeId, int]:
    return {n: i for i, n in enumerate(sorted(labels, key=lambda n: labels[n]))}


def order_equivalent(t1: GeneralizedMergeTree, l1: Labeling, t2: GeneralizedMergeTree, l2: Labeling) -> bool:
    return iso_gml(t1, _ranks(l1), t2, _ranks(l2))


def merge_equivalent(t1: GeneralizedMergeTree, t2: GeneralizedMergeTree) -> bool:
    return canonical_form(t1) == canonical_form(t2)


def merge_equivalent_orders(t: GeneralizedMergeTree, o1: Labeling, o2: Labeling) -> bool:
    """Two Morse orders on one tree agree on subtree maxima and on which leaf
    is the minimum of which rooted subtree."""
    best1, best2 = _subtree_min(t, o1), _subtree_min(t, o2)
    for p in t.children:
        top1 = max(t.postorder(p), key=lambda n: o1[n])
        top2 = max(t.postorder(p), key=lambda n: o2[n])
        if top1 != top2:
            return False
        if t.children[p] and best1[p] != best2[p]:
            return False
    return True


def relabel_nodes(t: GeneralizedMergeTree, mapping: Mapping) -> GeneralizedMergeTree:
    return GeneralizedMergeTree(
        mapping[t.root],
        {mapping[n]: tuple(mapping[c] for c in cs) for n, cs in t.children.items()},
        {mapping[n]: ch for n, ch in t.chirality.items()},
    )


def morse_orders(t: GeneralizedMergeTree, start=None) -> Iterator[List[NodeId]]:
    """Every Morse order on T(start) as an ascending node list.

    A Morse order on T(p) is a shuffle of Morse orders on the child subtrees
    that starts inside the child of p's chirality, followed by p.
    """
    p = t.root if start is None else start
    cs = t.children[p]
    if not cs:
        yield [p]
    elif len(cs) == 1:
        for seq in morse_orders(t, cs[0]):
            yield seq + [p]
    else:
        first = t.child_with(p, t.chirality[p])
        other = cs[0] if cs[1] == first else cs[1]
        other_orders = list(morse_orders(t, other))
        for a in morse_orders(t, first):
            for b in other_orders:
                for merged in _shuffles_starting_with_first(a, b):
                    yield merged + [p]


def _shuffles_starting_with_first(a: Sequence, b: Sequence) -> Iterator[List]:
    def rec(i, j):
        if i == len(a):
            yield list(b[j:])
            return
        if j == len(b):
            yield list(a[i:])
            return
        for rest in rec(i + 1, j):
            yield [a[i]] + rest
        for rest in rec(i, j + 1):
            yield [b[j]] + rest

    for rest in rec(1, 0):
        yield [a[0]] + rest
