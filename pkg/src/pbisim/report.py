"""Report rendering: delimited tables plus a transition-graph figure.

For an explicit system the states are coloured by bisimilarity class; for a
machine a depth-bounded fragment is drawn with frontier states hollow.
Figures go to PNG next to the .tsv files.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import networkx as nx

from .core import bisim_finite
from .machines import reachable_fragment


def _write_tsv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(header)
        writer.writerows(rows)


def _draw(plts, block_of, frontier, out_path, title):
    graph = nx.MultiDiGraph()
    for i, name in enumerate(plts.state_names):
        graph.add_node(i, label=name)
    for src, action, dist in plts.transitions:
        for tgt, prob in dist.entries:
            label = action if prob == 1 else f"{action}:{prob}"
            graph.add_edge(src, tgt, label=label)

    pos = nx.spring_layout(graph, seed=7)
    cmap = plt.colormaps["tab20"]
    colors = [cmap(block_of[i] % 20) for i in range(plts.num_states)]
    fig, ax = plt.subplots(figsize=(max(6, plts.num_states * 0.45),) * 2)
    nx.draw_networkx_nodes(
        graph,
        pos,
        ax=ax,
        node_color=colors,
        edgecolors=["red" if i in frontier else "black" for i in range(plts.num_states)],
        node_size=600,
    )
    nx.draw_networkx_labels(
        graph, pos, ax=ax, labels={i: n for i, n in enumerate(plts.state_names)}, font_size=7
    )
    nx.draw_networkx_edges(graph, pos, ax=ax, connectionstyle="arc3,rad=0.08", arrowsize=9)
    edge_labels = {}
    for src, tgt, data in graph.edges(data=True):
        edge_labels.setdefault((src, tgt), []).append(data["label"])
    nx.draw_networkx_edge_labels(
        graph,
        pos,
        ax=ax,
        edge_labels={k: ", ".join(v) for k, v in edge_labels.items()},
        font_size=6,
    )
    ax.set_title(title)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def report_plts(plts, out_dir, title="explicit system"):
    """Blocks and transitions as .tsv plus a class-coloured graph figure."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    partition = bisim_finite(plts)
    _write_tsv(
        out_dir / "states.tsv",
        ["state", "class"],
        [(plts.state_names[i], partition.block_of(i)) for i in range(plts.num_states)],
    )
    _write_tsv(
        out_dir / "transitions.tsv",
        ["source", "action", "target", "prob"],
        [
            (plts.state_names[src], action, plts.state_names[tgt], str(prob))
            for src, action, dist in plts.transitions
            for tgt, prob in dist.entries
        ],
    )
    _write_tsv(
        out_dir / "classes.tsv",
        ["class", "members"],
        [(i, " ".join(plts.state_names[s] for s in block)) for i, block in enumerate(partition.blocks)],
    )
    _draw(
        plts,
        {i: partition.block_of(i) for i in range(plts.num_states)},
        frontier=set(),
        out_path=out_dir / "graph.png",
        title=title,
    )
    return partition


def report_fragment(machine, roots, depth, out_dir, budget=2000, title="fragment"):
    """Depth-bounded fragment tables and figure; nodes coloured by level,
    frontier states outlined."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frag = reachable_fragment(machine, roots, depth, budget=budget)
    plts = frag.plts
    _write_tsv(
        out_dir / "states.tsv",
        ["state", "level", "frontier"],
        [
            (plts.state_names[i], frag.levels[i], int(i in frag.frontier))
            for i in range(plts.num_states)
        ],
    )
    _write_tsv(
        out_dir / "transitions.tsv",
        ["source", "action", "target", "prob"],
        [
            (plts.state_names[src], action, plts.state_names[tgt], str(prob))
            for src, action, dist in plts.transitions
            for tgt, prob in dist.entries
        ],
    )
    _draw(
        plts,
        frag.levels,
        frontier=frag.frontier,
        out_path=out_dir / "graph.png",
        title=title,
    )
    return frag
