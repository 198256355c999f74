import pytest
from hypothesis import given, settings

import worked_examples as W
from strategies import gml_trees
from dmt.cwcomplex import betti, critical_cells, validate_dmf
from dmt.induce import induce_merge_tree
from dmt.invert import path_sequence, phi, phi_path
from dmt.mergetree import cycle_nodes, iso_gml, leaf_count, underlying_tree


def test_path_sequence_of_sc_example():
    t, lab = W.sc_tree()
    bar, bl = underlying_tree(t, lab)
    seq = path_sequence(bar)
    assert seq[0::2] == W.SC_PATH_VERTICES
    assert seq[1::2] == W.SC_PATH_EDGES


def test_phi_path_rejects_cycles():
    t, lab = W.triangle_tree()
    with pytest.raises(ValueError):
        phi_path(t, lab)


def test_phi_of_sc_example():
    t, lab = W.sc_tree()
    out = phi(t, lab)
    g, f = out.graph, out.dmf
    assert len(g.vertices) == 13 and len(g.edges) == 20
    assert betti(g) == (1, 8)
    assert validate_dmf(g, f).ok and len(critical_cells(g, f)) == 33
    # each cycle node doubles the edge of its oldest two-child descendant
    assert set(g.edges["28"]) == set(g.edges["27"])
    assert set(g.edges["8"]) == set(g.edges["7"]) == set(g.edges["9"])
    res = induce_merge_tree(g, f)
    assert iso_gml(res.tree, res.labeling, t, lab)


def test_phi_of_triangle_tree():
    t, lab = W.triangle_tree()
    out = phi(t, lab)
    assert len(out.graph.vertices) == 3 and len(out.graph.edges) == 3
    assert not out.graph.is_simple()
    res = induce_merge_tree(out.graph, out.dmf)
    assert iso_gml(res.tree, res.labeling, t, lab)


def test_phi_rejects_non_morse_labels():
    t, lab = W.triangle_tree()
    with pytest.raises(ValueError):
        phi(t, {n: -x for n, x in lab.items()})


@settings(max_examples=300, deadline=None)
@given(gml_trees(max_nodes=25))
def test_phi_round_trip(tl):
    t, lab = tl
    out = phi(t, lab)
    g, f = out.graph, out.dmf
    assert validate_dmf(g, f).ok
    assert set(critical_cells(g, f)) == set(g.cells)
    assert len(g.vertices) == leaf_count(t) and betti(g)[1] == len(cycle_nodes(t))
    res = induce_merge_tree(g, f)
    assert iso_gml(res.tree, res.labeling, t, lab)
    for n, c in out.cell_of_node.items():
        assert res.correspondence[c] == c and f[c] == lab[n]
