"""Hand-transcribed instances shared by the test modules.

Vertex ids are ``v<value>`` and edge ids ``e<value>`` so that a cell can be
read off from its value; tree node ids are the labels themselves.
"""

from dmt.cwcomplex import graph_from_values
from dmt.mergetree import GeneralizedMergeTree, L, R, tree_from_labeled_children


def _graph(vertex_values, edge_list):
    vertices = {f"v{x}": x for x in vertex_values}
    edges = {f"e{val}": (f"v{u}", f"v{v}", val) for (u, v), val in edge_list}
    return graph_from_values(vertices, edges)


# ---------------------------------------------------------------------------
# cancellation instances (all cells critical)
# ---------------------------------------------------------------------------

CANCEL_ONE_EDGES = [((6, 7), 11), ((6, 8), 9), ((6, 5), 12), ((5, 3), 15), ((5, 4), 13),
                    ((3, 4), 14), ((3, 1), 17), ((4, 1), 16), ((1, 2), 18), ((1, 0), 19),
                    ((2, 0), 10)]


def cancel_one():
    return _graph(range(9), CANCEL_ONE_EDGES)


# tree drawn next to the first cancellation instance: node -> children (L first)
CANCEL_ONE_TREE = {19: (18,), 18: (10, 17), 10: (0, 2), 17: (16,), 16: (15, 1), 15: (14,),
                   14: (3, 13), 13: (12, 4), 12: (5, 11), 11: (7, 9), 9: (8, 6)}


def cancel_one_tree():
    chir = {19: L}
    stack = [19]
    while stack:
        n = stack.pop()
        cs = CANCEL_ONE_TREE.get(n, ())
        if len(cs) == 1:
            chir[cs[0]] = chir[n]
        elif len(cs) == 2:
            chir[cs[0]], chir[cs[1]] = L, R
        stack.extend(cs)
    t = GeneralizedMergeTree(19, dict(CANCEL_ONE_TREE), chir)
    return t, {n: n for n in t.nodes}


def cancel_two():
    return _graph(range(6), [((2, 3), 10), ((5, 3), 8), ((1, 3), 9), ((2, 4), 6), ((2, 0), 7)])


def cancel_three():
    return _graph(range(7), [((6, 4), 7), ((4, 3), 9), ((1, 3), 12), ((3, 2), 10), ((1, 2), 11),
                             ((2, 5), 8), ((1, 0), 14), ((2, 0), 13)])


# ---------------------------------------------------------------------------
# sublevel-connected order example: node ids are the drawn labels
# ---------------------------------------------------------------------------

SC_CHILDREN = {32: (28, 31), 31: (30, 29), 28: (27,), 27: (14, 26), 26: (25, 24), 24: (23,),
               23: (22,), 22: (21, 20), 20: (19,), 19: (15, 18), 18: (16, 17), 14: (13,),
               13: (11, 12), 11: (10,), 10: (0, 9), 9: (8,), 8: (7,), 7: (3, 6), 6: (5, 4),
               3: (2, 1)}


def sc_tree():
    labels = {n: n for n in range(33)}
    return tree_from_labeled_children(32, SC_CHILDREN, labels), labels


SC_PATH_VERTICES = [0, 4, 5, 2, 1, 12, 25, 21, 16, 17, 15, 30, 29]
SC_PATH_EDGES = [10, 6, 7, 3, 13, 27, 26, 22, 18, 19, 32, 31]


# ---------------------------------------------------------------------------
# the level-7 component-merge pair (contains matched cells)
# ---------------------------------------------------------------------------

def cm_left():
    return _graph([0, 1, 2, 3, 4, 6], [((3, 6), 7), ((3, 2), 3), ((2, 0), 2), ((6, 4), 6),
                                       ((4, 1), 4), ((2, 4), 5), ((3, 6), 8)])


def cm_right():
    return _graph([0, 1, 2, 3, 4, 6], [((2, 0), 2), ((2, 4), 4), ((4, 6), 6), ((4, 1), 7),
                                       ((0, 3), 5), ((6, 1), 8), ((3, 1), 3)])


# ---------------------------------------------------------------------------
# small trees
# ---------------------------------------------------------------------------

def triangle():
    return graph_from_values({"a": 0, "b": 1, "c": 2},
                             {"ab": ("a", "b", 3), "bc": ("b", "c", 4), "ac": ("a", "c", 5)})


def triangle_tree():
    t = GeneralizedMergeTree(5, {5: (4,), 4: (3, 2), 3: (0, 1)},
                             {5: L, 4: L, 3: L, 0: L, 1: R, 2: R})
    return t, {n: n for n in t.nodes}


def two_leaf_cycle_tree():
    t = GeneralizedMergeTree(3, {3: (2,), 2: (0, 1)}, {3: L, 2: L, 0: L, 1: R})
    return t, {0: 0, 1: 1, 2: 2, 3: 3}
