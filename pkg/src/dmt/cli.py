"""Command-line entry point: ``dmt <subcommand> ...``.

Exit codes: 0 success, 1 validation failure (or "not equivalent"), 2 malformed
input, 3 tree not realizable, 4 verification counterexample.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from typing import List, Optional, Sequence

from . import io
from .cancel import CancelPolicy, cancel
from .cwcomplex import MalformedInput, critical_cells, validate_dmf
from .harness import EnumerationBudget, roundtrip_suite
from .induce import induce_merge_tree
from .invert import phi
from .mergetree import is_morse_order, iso_gml, merge_equivalent, order_equivalent, validate_gmt
from .realize import NotRealizable, check_realizable, realize_planar, realize_simple

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED, EXIT_UNREALIZABLE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4

log = logging.getLogger("dmt")


def _use_color() -> bool:
    env = os.environ.get("DMT_COLOR")
    if env is not None:
        return env.strip() == "1"
    return sys.stderr.isatty()


def _diag(msg: str, level: str = "error") -> None:
    colors = {"error": "31", "warn": "33", "ok": "32"}
    if _use_color():
        msg = f"\033[{colors.get(level, '0')}m{msg}\033[0m"
    print(msg, file=sys.stderr)


def _read(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return io.loads(fh.read())
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_graph(path: str):
    doc = _read(path)
    if io.detect_kind(doc) != "graph":
        raise MalformedInput(f"{path} is not a graph document")
    return io.graph_from_doc(doc)


def _read_tree(path: str, need_labels: bool = True):
    doc = _read(path)
    if io.detect_kind(doc) != "tree":
        raise MalformedInput(f"{path} is not a tree document")
    t, lab = io.tree_from_doc(doc)
    if need_labels and lab is None:
        raise MalformedInput(f"{path} carries no labels")
    return t, lab


def _tree_of(path: str):
    """A labeled tree from either kind of document (graphs go through induce)."""
    doc = _read(path)
    if io.detect_kind(doc) == "graph":
        g, f = io.graph_from_doc(doc)
        res = induce_merge_tree(g, f)
        return res.tree, res.labeling
    return io.tree_from_doc(doc)


# =============================================================================
# Subcommands
# =============================================================================

def cmd_validate(a) -> int:
    doc = _read(a.input)
    if io.detect_kind(doc) == "graph":
        g, f = io.graph_from_doc(doc)
        rep = validate_dmf(g, f)
        if rep.malformed:
            for m in rep.malformed:
                _diag(f"malformed: {m}")
            return EXIT_MALFORMED
        problems = rep.violations
    else:
        t, lab = io.tree_from_doc(doc)
        rep = validate_gmt(t)
        if rep.malformed:
            for m in rep.malformed:
                _diag(f"malformed: {m}")
            return EXIT_MALFORMED
        problems = list(rep.violations)
        if not problems and lab is not None and not is_morse_order(t, lab):
            problems.append("labels are not a Morse labeling")
    for p in problems:
        _diag(f"violation: {p}")
    if problems:
        return EXIT_INVALID
    _diag("ok", "ok")
    return EXIT_OK


def cmd_induce(a) -> int:
    g, f = _read_graph(a.input)
    res = induce_merge_tree(g, f)
    corr = {str(c): str(n) for c, n in res.correspondence.items()}
    _write(io.dumps(io.tree_to_doc(res.tree, res.labeling, correspondence=corr)), a.output)
    if a.figure:
        from .plotting import draw_tree
        draw_tree(res.tree, res.labeling, a.figure)
    return EXIT_OK


def cmd_invert(a) -> int:
    t, lab = _read_tree(a.input)
    out = phi(t, lab)
    cell_of_node = {str(n): c for n, c in out.cell_of_node.items()}
    _write(io.dumps(io.graph_to_doc(out.graph, out.dmf, cell_of_node=cell_of_node)), a.output)
    if a.figure:
        from .plotting import draw_graph
        draw_graph(out.graph, out.dmf, a.figure)
    return EXIT_OK


def cmd_realize(a) -> int:
    t, _ = _read_tree(a.input, need_labels=False)
    mode = "planar" if a.planar else "simple"
    try:
        r = (realize_planar if a.planar else realize_simple)(t)
    except NotRealizable as exc:
        _diag(str(exc))
        rows = [{"cycle_node": str(c), "cycles_below": n, "leaves": ell, "bound": b}
                for c, n, ell, b in exc.report.violations_for(mode)]
        _write(io.dumps({"realizable": False, "mode": mode, "violations": rows}), a.output)
        return EXIT_UNREALIZABLE
    labels = {str(n): io.value_to_json(x) for n, x in r.labels.items()}
    cell_of_node = {str(n): c for n, c in r.cell_of_node.items()}
    _write(io.dumps(io.graph_to_doc(r.graph, r.dmf, labels=labels, cell_of_node=cell_of_node)), a.output)
    if a.figure:
        from .plotting import draw_graph
        draw_graph(r.graph, r.dmf, a.figure)
    return EXIT_OK


def cmd_cancel(a) -> int:
    g, f = _read_graph(a.input)
    out = cancel(g, f, CancelPolicy(a.policy))
    doc = io.graph_to_doc(
        out.graph, out.dmf,
        pairs=sorted([[v, e] for v, e in out.matching], key=lambda p: out.dmf[p[0]]),
        critical=out.critical,
        trace=[{"leaf": str(s.leaf), "ancestor": None if s.ancestor is None else str(s.ancestor),
                "case": s.case, "note": s.note} for s in out.trace],
    )
    _write(io.dumps(doc), a.output)
    if a.figure:
        from .plotting import draw_graph
        draw_graph(out.graph, out.dmf, a.figure, matching=out.matching, title=f"policy {a.policy}")
    return EXIT_OK


def cmd_equiv(a) -> int:
    t1, l1 = _tree_of(a.first)
    t2, l2 = _tree_of(a.second)
    if a.relation == "merge":
        same = merge_equivalent(t1, t2)
    elif l1 is None or l2 is None:
        raise MalformedInput("cm and order equivalence need labeled inputs")
    elif a.relation == "cm":
        same = iso_gml(t1, l1, t2, l2)
    else:
        same = order_equivalent(t1, l1, t2, l2)
    print("equivalent" if same else "not equivalent")
    return EXIT_OK if same else EXIT_INVALID


def cmd_verify(a) -> int:
    budget = EnumerationBudget(a.max_vertices, a.max_edges, a.max_tree_nodes, a.seed)
    rep = roundtrip_suite(budget)
    for key in sorted(rep.counts):
        print(f"{key}\t{rep.counts[key]}")
    if a.report:
        os.makedirs(a.report, exist_ok=True)
        with open(os.path.join(a.report, "counts.tsv"), "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, delimiter="\t")
            w.writerow(["property_group", "instances"])
            for key in sorted(rep.counts):
                w.writerow([key, rep.counts[key]])
        from .plotting import draw_counts
        draw_counts(rep.counts, os.path.join(a.report, "counts.png"), title="instances checked")
    if rep.ok:
        _diag("all properties hold", "ok")
        return EXIT_OK
    paths = rep.dump(a.dump_dir)
    for cx, p in zip(rep.failures, paths):
        _diag(f"counterexample for {cx.prop}: {p}")
    return EXIT_COUNTEREXAMPLE


def cmd_export_dot(a) -> int:
    doc = _read(a.input)
    if io.detect_kind(doc) == "graph":
        g, f = io.graph_from_doc(doc)
        crit = critical_cells(g, f) if validate_dmf(g, f).ok else None
        text = io.graph_to_dot(g, f, crit)
    else:
        t, lab = io.tree_from_doc(doc)
        text = io.tree_to_dot(t, lab)
    _write(text, a.output)
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmt", description="Discrete Morse functions on multigraphs and merge trees.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def io_args(sp, figure=True):
        sp.add_argument("-i", "--input", required=True)
        sp.add_argument("-o", "--output", help="output file (default: stdout)")
        if figure:
            sp.add_argument("--figure", help="also render a PNG figure to this path")

    sp = sub.add_parser("validate", help="check a graph+dMf or a tree document")
    sp.add_argument("-i", "--input", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("induce", help="induced merge tree of a graph+dMf")
    io_args(sp)
    sp.set_defaults(func=cmd_induce)

    sp = sub.add_parser("invert", help="path-plus-parallel-edges dMf of a labeled tree")
    io_args(sp)
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("realize", help="simple (or planar) graph realizing a tree")
    io_args(sp)
    sp.add_argument("--planar", action="store_true")
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("cancel", help="cancel critical cells along the merge tree")
    io_args(sp)
    sp.add_argument("--policy", choices=[x.value for x in CancelPolicy], default="flowline")
    sp.set_defaults(func=cmd_cancel)

    sp = sub.add_parser("equiv", help="compare two graphs or trees")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--relation", choices=["cm", "order", "merge"], default="cm")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("verify", help="run the exhaustive round-trip suite")
    sp.add_argument("--max-vertices", type=int, default=4)
    sp.add_argument("--max-edges", type=int, default=6)
    sp.add_argument("--max-tree-nodes", type=int, default=9)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dump-dir", default="counterexamples")
    sp.add_argument("--report", help="directory for counts.tsv and counts.png")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export-dot", help="Graphviz rendering of a graph or tree document")
    io_args(sp, figure=False)
    sp.set_defaults(func=cmd_export_dot)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except MalformedInput as exc:
        _diag(f"malformed input: {exc}")
        return EXIT_MALFORMED
    except NotRealizable as exc:
        _diag(str(exc))
        return EXIT_UNREALIZABLE
    except ValueError as exc:
        _diag(f"invalid input: {exc}")
        return EXIT_INVALID


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
