import json
from fractions import Fraction

import pytest

import worked_examples as W
from dmt import cli, io
from dmt.cwcomplex import MalformedInput
from dmt.mergetree import iso_gml


def write(path, doc):
    path.write_text(io.dumps(doc))
    return str(path)


@pytest.fixture
def graph_file(tmp_path):
    return write(tmp_path / "graph.json", io.graph_to_doc(*W.cancel_one()))


@pytest.fixture
def tree_file(tmp_path):
    return write(tmp_path / "tree.json", io.tree_to_doc(*W.sc_tree()))


# -----------------------------------------------------------------------------
# documents
# -----------------------------------------------------------------------------

def test_values_round_trip_exactly():
    for x in (0, -3, Fraction(7, 3), Fraction(4, 2)):
        assert io.value_from_json(io.value_to_json(x)) == x
    assert io.value_to_json(Fraction(7, 3)) == "7/3"
    with pytest.raises(MalformedInput):
        io.value_from_json(0.5)


def test_graph_doc_round_trip():
    g, f = W.cm_left()
    g2, f2 = io.graph_from_doc(io.loads(io.dumps(io.graph_to_doc(g, f))))
    assert g2 == g and f2 == f


def test_tree_doc_round_trip():
    t, lab = W.sc_tree()
    t2, lab2 = io.tree_from_doc(io.loads(io.dumps(io.tree_to_doc(t, lab))))
    assert iso_gml(t2, lab2, t, lab)
    t3, lab3 = io.tree_from_doc(io.tree_to_doc(t))
    assert lab3 is None and len(t3) == len(t)


@pytest.mark.parametrize("text", ["[1, 2]", "{not json", '{"vertices": [{"id": "a"}], "edges": []}',
                                  '{"root": "r", "nodes": [{"id": "r", "chirality": "X"}]}',
                                  '{"foo": 1}'])
def test_malformed_documents(text):
    with pytest.raises(MalformedInput):
        doc = io.loads(text)
        if io.detect_kind(doc) == "graph":
            io.graph_from_doc(doc)
        else:
            io.tree_from_doc(doc)


def test_partial_labels_rejected():
    doc = io.tree_to_doc(*W.triangle_tree())
    doc["nodes"][0]["label"] = None
    with pytest.raises(MalformedInput):
        io.tree_from_doc(doc)


def test_dot_export():
    g, f = W.cm_left()
    text = io.graph_to_dot(g, f, critical=["v0"])
    assert text.startswith("graph G {") and "style=dashed" in text and '"v3" -- "v6"' in text
    t, lab = W.triangle_tree()
    text = io.tree_to_dot(t, lab)
    assert '"5" [label="5", shape=box' in text and '"4" -> "3"' in text


# -----------------------------------------------------------------------------
# command line
# -----------------------------------------------------------------------------

def test_validate(graph_file, tree_file, tmp_path, capsys):
    assert cli.run(["validate", "-i", graph_file]) == 0
    assert cli.run(["validate", "-i", tree_file]) == 0
    g, f = W.triangle()
    bad = write(tmp_path / "bad.json", io.graph_to_doc(g, dict(f, a=0, b=0)))
    assert cli.run(["validate", "-i", bad]) == 1
    assert "non-incident equal pair" in capsys.readouterr().err
    t, lab = W.triangle_tree()
    bad = write(tmp_path / "badt.json", io.tree_to_doc(t, {n: -x for n, x in lab.items()}))
    assert cli.run(["validate", "-i", bad]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert cli.run(["validate", "-i", str(broken)]) == 2
    assert cli.run(["validate", "-i", str(tmp_path / "missing.json")]) == 2


def test_induce_matches_drawn_tree(graph_file, tmp_path):
    out = tmp_path / "tree.json"
    assert cli.run(["induce", "-i", graph_file, "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    t, lab = io.tree_from_doc(doc)
    ref, ref_lab = W.cancel_one_tree()
    assert iso_gml(t, lab, ref, ref_lab)
    assert doc["correspondence"]["e19"] == "e19"
    assert cli.run(["validate", "-i", str(out)]) == 0


def test_invert_and_realize(tree_file, tmp_path):
    out = tmp_path / "g.json"
    assert cli.run(["invert", "-i", tree_file, "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["vertices"]) == 13 and len(doc["edges"]) == 20 and "cell_of_node" in doc
    assert cli.run(["validate", "-i", str(out)]) == 0
    for extra in ([], ["--planar"]):
        out = tmp_path / "r.json"
        assert cli.run(["realize", "-i", tree_file, "-o", str(out)] + extra) == 0
        g, f = io.graph_from_doc(json.loads(out.read_text()))
        assert g.is_simple() and len(g.edges) == 20
        assert cli.run(["validate", "-i", str(out)]) == 0


def test_realize_reports_violation(tmp_path, capsys):
    tf = write(tmp_path / "t.json", io.tree_to_doc(*W.two_leaf_cycle_tree()))
    out = tmp_path / "r.json"
    assert cli.run(["realize", "-i", tf, "--planar", "-o", str(out)]) == 3
    doc = json.loads(out.read_text())
    assert doc == {"mode": "planar", "realizable": False,
                   "violations": [{"bound": -1, "cycle_node": "3", "cycles_below": 0, "leaves": 2}]}


@pytest.mark.parametrize("policy,critical", [("skip", ["v0", "v1", "e10"]), ("rewire", ["v0"]),
                                             ("flowline", ["v0"])])
def test_cancel_policies(tmp_path, policy, critical):
    gf = write(tmp_path / "g.json", io.graph_to_doc(*W.cancel_two()))
    out = tmp_path / "o.json"
    assert cli.run(["cancel", "-i", gf, "--policy", policy, "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["critical"] == critical
    assert any(s["case"].startswith("2c") and s["leaf"] == "v1" and s["ancestor"] == "e10" for s in doc["trace"])
    assert cli.run(["validate", "-i", str(out)]) == 0


def test_equiv_relations(tmp_path, capsys):
    a = write(tmp_path / "a.json", io.graph_to_doc(*W.cm_left()))
    b = write(tmp_path / "b.json", io.graph_to_doc(*W.cm_right()))
    assert cli.run(["equiv", a, b, "--relation", "cm"]) == 0
    assert capsys.readouterr().out == "equivalent\n"
    t, lab = W.sc_tree()
    t1 = write(tmp_path / "t1.json", io.tree_to_doc(t, lab))
    t2 = write(tmp_path / "t2.json", io.tree_to_doc(t, {n: 3 * x + 1 for n, x in lab.items()}))
    assert cli.run(["equiv", t1, t2, "--relation", "cm"]) == 1
    assert capsys.readouterr().out == "not equivalent\n"
    assert cli.run(["equiv", t1, t2, "--relation", "order"]) == 0
    assert cli.run(["equiv", t1, a, "--relation", "merge"]) == 1
    bare = write(tmp_path / "bare.json", io.tree_to_doc(t))
    assert cli.run(["equiv", bare, t1, "--relation", "merge"]) == 0
    assert cli.run(["equiv", bare, t1, "--relation", "cm"]) == 2


def test_verify_small_budget(tmp_path, capsys):
    report = tmp_path / "rep"
    code = cli.run(["verify", "--max-vertices", "3", "--max-edges", "3", "--max-tree-nodes", "5",
                    "--report", str(report), "--dump-dir", str(tmp_path / "cx")])
    assert code == 0
    out = capsys.readouterr().out
    assert "dmfs\t" in out
    rows = (report / "counts.tsv").read_text().splitlines()
    assert rows[0] == "property_group\tinstances" and len(rows) > 5
    assert (report / "counts.png").stat().st_size > 0
    assert not (tmp_path / "cx").exists()


def test_export_dot(graph_file, tree_file, tmp_path):
    out = tmp_path / "g.dot"
    assert cli.run(["export-dot", "-i", graph_file, "-o", str(out)]) == 0
    assert out.read_text().startswith("graph G {")
    assert cli.run(["export-dot", "-i", tree_file, "-o", str(out)]) == 0
    assert out.read_text().startswith("digraph T {")


def test_outputs_are_byte_identical(graph_file, tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        assert cli.run(["cancel", "-i", graph_file, "-o", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_figures_are_written(graph_file, tree_file, tmp_path):
    for cmd, src in (("induce", graph_file), ("invert", tree_file), ("realize", tree_file), ("cancel", graph_file)):
        png = tmp_path / f"{cmd}.png"
        assert cli.run([cmd, "-i", src, "-o", str(tmp_path / f"{cmd}.json"), "--figure", str(png)]) == 0
        assert png.read_bytes()[:4] == b"\x89PNG"


def test_color_switch(monkeypatch, tmp_path, capsys):
    g, f = W.triangle()
    bad = write(tmp_path / "bad.json", io.graph_to_doc(g, dict(f, a=0, b=0)))
    monkeypatch.setenv("DMT_COLOR", "1")
    cli.run(["validate", "-i", bad])
    assert "\033[31m" in capsys.readouterr().err
    monkeypatch.setenv("DMT_COLOR", "0")
    cli.run(["validate", "-i", bad])
    assert "\033[" not in capsys.readouterr().err


def test_main_exits_with_code(tree_file):
    with pytest.raises(SystemExit) as exc:
        cli.main(["validate", "-i", tree_file])
    assert exc.value.code == 0
