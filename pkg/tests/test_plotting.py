import worked_examples as W
from dmt.cancel import CancelPolicy, cancel
from dmt.plotting import _edge_curvatures, draw_counts, draw_graph, draw_tree, graph_layout, tree_layout


def is_png(path):
    with open(path, "rb") as fh:
        return fh.read(4) == b"\x89PNG"


def test_parallel_edges_fan_out():
    g, _ = W.cm_left()
    rad = _edge_curvatures(g)
    assert rad["e7"] != rad["e8"]
    assert rad["e2"] == 0


def test_layouts_cover_every_node():
    g, _ = W.cancel_one()
    assert set(graph_layout(g)) == set(g.vertices)
    t, _ = W.sc_tree()
    pos = tree_layout(t)
    assert set(pos) == set(t.nodes)
    assert pos[32][1] == 0 and all(pos[n][1] == -t.depth(n) for n in t.nodes)
    # leaves sit on distinct columns
    xs = [pos[n][0] for n in t.leaves()]
    assert len(set(xs)) == len(xs)


def test_figures_written(tmp_path):
    g, f = W.cancel_two()
    out = cancel(g, f, CancelPolicy.FLOWLINE)
    assert is_png(draw_graph(out.graph, out.dmf, str(tmp_path / "g.png"), matching=out.matching, title="flow"))
    t, lab = W.sc_tree()
    assert is_png(draw_tree(t, lab, str(tmp_path / "t.png")))
    assert is_png(draw_counts({"a": 3, "b": 400}, str(tmp_path / "c.png"), title="counts"))
