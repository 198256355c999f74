"""Static matplotlib renderings of graphs (with values and gradient arrows) and merge trees."""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402
from matplotlib.patches import FancyArrowPatch  # noqa: E402

from .cwcomplex import CellId, MultiGraph, Value  # noqa: E402
from .io import value_to_json  # noqa: E402
from .mergetree import GeneralizedMergeTree  # noqa: E402

Point = Tuple[float, float]


def graph_layout(g: MultiGraph, seed: int = 0) -> Dict[CellId, Point]:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges.values())
    if len(g.vertices) == 1:
        return {g.vertices[0]: (0.0, 0.0)}
    return {v: tuple(p) for v, p in nx.kamada_kawai_layout(h).items()} if nx.is_connected(h) \
        else {v: tuple(p) for v, p in nx.spring_layout(h, seed=seed).items()}


def _edge_curvatures(g: MultiGraph) -> Dict[CellId, float]:
    groups: Dict[frozenset, list] = {}
    for e, uv in g.edges.items():
        groups.setdefault(frozenset(uv), []).append(e)
    rad = {}
    for es in groups.values():
        for i, e in enumerate(es):
            # 0, +0.25, -0.25, +0.5, ... so parallel edges fan out
            k = (i + 1) // 2
            rad[e] = 0.25 * k * (1 if i % 2 else -1)
    return rad


def draw_graph(g: MultiGraph, f: Mapping[CellId, Value], path: str,
               matching: Iterable[Tuple[CellId, CellId]] = (), title: Optional[str] = None,
               pos: Optional[Dict[CellId, Point]] = None) -> str:
    """Write a figure of ``g``; critical cells are dark, matched ones grey, and
    each matched pair gets an arrow from the vertex into its edge."""
    pos = pos or graph_layout(g)
    matching = list(matching)
    matched = {c for pr in matching for c in pr}
    rad = _edge_curvatures(g)
    fig, ax = plt.subplots(figsize=(5, 4))
    for e, (u, v) in g.edges.items():
        color = "0.6" if e in matched else "black"
        ax.add_patch(FancyArrowPatch(pos[u], pos[v], arrowstyle="-", color=color, lw=1.5,
                                     connectionstyle=f"arc3,rad={rad[e]}"))
        (x0, y0), (x1, y1) = pos[u], pos[v]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        # offset the label toward the bulge of a curved edge
        mx, my = mx - rad[e] * (y1 - y0) / 2, my + rad[e] * (x1 - x0) / 2
        ax.text(mx, my, str(value_to_json(f[e])), fontsize=8, color="tab:blue", ha="center", va="center",
                bbox=dict(boxstyle="round,pad=0.1", fc="white", ec="none"))
    for vtx, e in matching:
        (x0, y0) = pos[vtx]
        u, w = g.edges[e]
        other = w if u == vtx else u
        x1, y1 = pos[other]
        tip = (x0 + 0.45 * (x1 - x0), y0 + 0.45 * (y1 - y0))
        ax.annotate("", xy=tip, xytext=(x0, y0), arrowprops=dict(arrowstyle="->", color="tab:red", lw=2))
    for v in g.vertices:
        x, y = pos[v]
        ax.scatter([x], [y], s=160, zorder=3, color="0.6" if v in matched else "black")
        ax.text(x, y + 0.08, str(value_to_json(f[v])), fontsize=9, ha="center", va="bottom")
    ax.set_aspect("equal")
    ax.axis("off")
    ax.autoscale_view()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def tree_layout(t: GeneralizedMergeTree) -> Dict[object, Point]:
    """Leaves spread left to right in post-order (L child first); inner nodes
    centred over their children; depth grows downward."""
    pos: Dict[object, Point] = {}
    x = 0
    for n in t.postorder():
        cs = t.children[n]
        if not cs:
            pos[n] = (float(x), 0.0)
            x += 1
        else:
            pos[n] = (sum(pos[c][0] for c in cs) / len(cs), 0.0)
    return {n: (p[0], -float(t.depth(n))) for n, p in pos.items()}


def draw_tree(t: GeneralizedMergeTree, labels: Optional[Mapping] = None, path: str = "tree.png",
              title: Optional[str] = None) -> str:
    pos = tree_layout(t)
    fig, ax = plt.subplots(figsize=(max(4, 0.5 * len(t)), 4))
    for n, cs in t.children.items():
        for c in cs:
            ax.plot([pos[n][0], pos[c][0]], [pos[n][1], pos[c][1]], color="black", lw=1)
    for n in t.nodes:
        x, y = pos[n]
        marker = "s" if t.is_cycle_node(n) else "o"
        color = "tab:blue" if t.chirality[n] == "L" else "tab:orange"
        ax.scatter([x], [y], marker=marker, s=140, color=color, zorder=3)
        text = str(n) if labels is None else str(value_to_json(labels[n]))
        ax.text(x + 0.15, y, text, fontsize=8, va="center")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def draw_counts(counts: Mapping[str, int], path: str, title: Optional[str] = None) -> str:
    keys = list(counts)
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.barh(keys, [counts[k] for k in keys], color="tab:blue")
    ax.set_xscale("log")
    ax.set_xlabel("instances checked")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
