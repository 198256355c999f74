"""Hypothesis strategies for multigraphs with dMfs and for labeled merge trees."""

from hypothesis import strategies as st

from dmt.cwcomplex import MultiGraph
from dmt.mergetree import GeneralizedMergeTree, L, opposite


@st.composite
def connected_multigraphs(draw, max_vertices=6, max_extra_edges=4):
    n = draw(st.integers(1, max_vertices))
    edges = {}
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges[f"e{len(edges)}"] = (f"v{j}", f"v{i}")
    if n > 1:
        for _ in range(draw(st.integers(0, max_extra_edges))):
            a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            edges[f"e{len(edges)}"] = (f"v{a}", f"v{b}")
    return MultiGraph(tuple(f"v{i}" for i in range(n)), edges)


@st.composite
def graphs_with_dmf(draw, max_vertices=6, max_extra_edges=4, matched=True, rational=False):
    """A random face-respecting cell sequence turned into values; optionally a
    vertex directly followed by one of its edges shares that edge's value."""
    g = draw(connected_multigraphs(max_vertices, max_extra_edges))
    rnd = draw(st.randoms(use_true_random=False))
    placed, seq = set(), []
    remaining = list(g.cells)
    while remaining:
        ready = [c for c in remaining if g.is_vertex(c) or all(x in placed for x in g.edges[c])]
        c = rnd.choice(ready)
        remaining.remove(c)
        placed.add(c)
        seq.append(c)
    f = {c: i for i, c in enumerate(seq)}
    if matched:
        i = 0
        while i < len(seq) - 1:
            v, e = seq[i], seq[i + 1]
            if g.is_vertex(v) and g.is_edge(e) and v in g.edges[e] and rnd.random() < 0.5:
                f[e] = f[v]
                i += 2
            else:
                i += 1
    if rational:
        from fractions import Fraction
        f = {c: Fraction(2 * x + 1, 3) for c, x in f.items()}
    return g, f


@st.composite
def critical_dmfs(draw, max_vertices=5, max_extra_edges=3):
    return draw(graphs_with_dmf(max_vertices, max_extra_edges, matched=False))


def _random_shape(rnd, size, chirality, allow_leaf, children, chir, counter):
    """Subtree sizes are 1 (a leaf) or at least 3; a cycle node needs a
    non-leaf child, a merge node two feasible parts."""
    n = counter[0]
    counter[0] += 1
    chir[n] = chirality
    if size == 1 and allow_leaf:
        children[n] = ()
        return n
    options = [("cycle", None)] if size - 1 >= 3 else []
    options += [("merge", k) for k in range(1, size - 1) if k != 2 and size - 1 - k != 2]
    kind, left = rnd.choice(options)
    if kind == "cycle":
        children[n] = (_random_shape(rnd, size - 1, chirality, False, children, chir, counter),)
    else:
        a = _random_shape(rnd, left, chirality, True, children, chir, counter)
        b = _random_shape(rnd, size - 1 - left, opposite(chirality), True, children, chir, counter)
        children[n] = (a, b)
    return n


def _random_morse_sequence(rnd, t, p):
    cs = t.children[p]
    if not cs:
        return [p]
    if len(cs) == 1:
        return _random_morse_sequence(rnd, t, cs[0]) + [p]
    first = t.child_with(p, t.chirality[p])
    other = cs[0] if cs[1] == first else cs[1]
    a, b = _random_morse_sequence(rnd, t, first), _random_morse_sequence(rnd, t, other)
    out, i, j = [a[0]], 1, 0
    while i < len(a) or j < len(b):
        if j == len(b) or (i < len(a) and rnd.random() < len(a[i:]) / (len(a[i:]) + len(b[j:]))):
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    return out + [p]


def _sizes_ok(size):
    # a tree of size 2 would be a cycle over a leaf, which is not allowed
    return size != 2


@st.composite
def gml_trees(draw, max_nodes=15):
    size = draw(st.integers(1, max_nodes).filter(_sizes_ok))
    rnd = draw(st.randoms(use_true_random=False))
    children, chir = {}, {}
    root = _random_shape(rnd, size, L, True, children, chir, [0])
    t = GeneralizedMergeTree(root, children, chir)
    seq = _random_morse_sequence(rnd, t, root)
    return t, {n: i for i, n in enumerate(seq)}
