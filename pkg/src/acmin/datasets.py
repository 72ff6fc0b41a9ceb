"""Dataset conversion and synthetic attributed-graph generators."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import AttributedGraph, load_graph, load_labels, save_graph


@dataclass
class LabeledGraph:
    graph: AttributedGraph
    labels: np.ndarray | None
    node_names: list[str] | None = None
    class_names: list[str] | None = None


def read_linqs(content_path, cites_path) -> LabeledGraph:
    """Read the LINQS citation format (``.content`` + ``.cites``).

    Content lines are ``paper_id <binary word flags...> class``; cites lines are
    ``cited citing`` and become the directed edge citing -> cited. Citations
    naming papers absent from the content file are dropped.
    """
    names, rows, classes = [], [], []
    with open(content_path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            names.append(parts[0])
            rows.append(np.array(parts[1:-1], dtype=np.float64))
            classes.append(parts[-1])
    index = {name: i for i, name in enumerate(names)}
    feats = np.vstack(rows)
    node, attr = np.nonzero(feats)
    class_names = sorted(set(classes))
    cls_index = {c: i for i, c in enumerate(class_names)}
    labels = np.array([cls_index[c] for c in classes], dtype=np.int64)

    src, dst = [], []
    with open(cites_path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) != 2:
                continue
            cited, citing = parts
            if cited in index and citing in index:
                src.append(index[citing])
                dst.append(index[cited])
    g = AttributedGraph.from_arrays(len(names), src, dst, node, attr, feats[node, attr], d=feats.shape[1])
    return LabeledGraph(g, labels, names, class_names)


def write_tsv_dataset(data: LabeledGraph, out_dir, stem: str) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"graph": out / f"{stem}.edges.tsv", "attrs": out / f"{stem}.attrs.tsv"}
    save_graph(data.graph, paths["graph"], paths["attrs"])
    if data.labels is not None:
        paths["labels"] = out / f"{stem}.labels.tsv"
        with open(paths["labels"], "w", encoding="utf-8") as fh:
            for i, lab in enumerate(data.labels):
                fh.write(f"{i}\t{lab}\n")
    return paths


def data_dir() -> Path:
    return Path(os.environ.get("ACMIN_DATA", Path(__file__).resolve().parents[2] / "data"))


def find_dataset(name: str, root=None) -> LabeledGraph | None:
    """Locate ``name`` under the data directory as converted TSVs or LINQS raw files.

    Looks for ``<root>/<name>/<name>.{edges,attrs,labels}.tsv`` first, then
    ``<root>/<name>/<name>.{content,cites}``. Returns None when neither exists.
    """
    base = Path(root) if root is not None else data_dir()
    folder = base / name
    edges = folder / f"{name}.edges.tsv"
    if edges.exists():
        g = load_graph(edges, folder / f"{name}.attrs.tsv")
        labels_path = folder / f"{name}.labels.tsv"
        labels = load_labels(labels_path, g.n) if labels_path.exists() else None
        return LabeledGraph(g, labels)
    content = folder / f"{name}.content"
    if content.exists():
        return read_linqs(content, folder / f"{name}.cites")
    return None


# synthetic graphs -----------------------------------------------------------

def planted_cliques(clique_size=10, n_cliques=2, attrs_per_clique=1, seed=None) -> LabeledGraph:
    """Bidirected cliques chained by one bidirected edge between consecutive
    cliques; every clique owns ``attrs_per_clique`` exclusive attributes."""
    n = clique_size * n_cliques
    src, dst = [], []
    for c in range(n_cliques):
        members = range(c * clique_size, (c + 1) * clique_size)
        for i in members:
            for j in members:
                if i != j:
                    src.append(i)
                    dst.append(j)
    for c in range(n_cliques - 1):
        a, b = (c + 1) * clique_size - 1, (c + 1) * clique_size
        src += [a, b]
        dst += [b, a]
    labels = np.repeat(np.arange(n_cliques), clique_size)
    an = np.repeat(np.arange(n), attrs_per_clique)
    ai = labels[an] * attrs_per_clique + np.tile(np.arange(attrs_per_clique), n)
    g = AttributedGraph.from_arrays(n, src, dst, an, ai, d=n_cliques * attrs_per_clique)
    return LabeledGraph(g, labels)


def random_attributed_graph(n, rng, p_edge=0.2, d=None, p_attr=0.3, weighted=True) -> AttributedGraph:
    """Erdos-Renyi digraph without self-loops plus a random sparse attribute matrix.

    Some nodes may end up dangling or attribute-less, which exercises both
    fallbacks of the walk operator.
    """
    d = max(1, n // 2) if d is None else d
    adj = rng.random((n, n)) < p_edge
    np.fill_diagonal(adj, False)
    src, dst = np.nonzero(adj)
    mask = rng.random((n, d)) < p_attr
    an, ai = np.nonzero(mask)
    w = rng.uniform(0.1, 2.0, size=len(an)) if weighted else np.ones(len(an))
    return AttributedGraph.from_arrays(n, src, dst, an, ai, w, d=d)


def strongly_connected_graph(n, rng, p_edge=0.15, d=None, p_attr=0.3) -> AttributedGraph:
    """Random attributed digraph that contains a directed Hamiltonian cycle."""
    g = random_attributed_graph(n, rng, p_edge, d, p_attr)
    coo = g.adjacency.tocoo()
    perm = rng.permutation(n)
    src = np.concatenate([coo.row, perm])
    dst = np.concatenate([coo.col, np.roll(perm, -1)])
    ra = g.attrs.tocoo()
    return AttributedGraph.from_arrays(n, src, dst, ra.row, ra.col, ra.data, d=g.d)


def attributed_sbm(n, k, avg_out_degree, p_in, d, attrs_per_node, attr_purity, rng,
                   class_sizes=None) -> LabeledGraph:
    """Directed stochastic block model with class-correlated binary attributes.

    Each node emits ``avg_out_degree`` edges on average; a fraction ``p_in`` of
    them stay inside its class. Attributes are split into k blocks; each of a
    node's attributes comes from its own class block with probability
    ``attr_purity`` and uniformly from all attributes otherwise.
    """
    if class_sizes is None:
        labels = rng.integers(0, k, size=n)
    else:
        labels = np.repeat(np.arange(k), class_sizes)[:n]
        rng.shuffle(labels)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(k + 1))

    m = rng.poisson(avg_out_degree * n)
    src = rng.integers(0, n, size=m)
    inside = rng.random(m) < p_in
    dst = rng.integers(0, n, size=m)
    cls = labels[src[inside]]
    lo, hi = bounds[cls], bounds[cls + 1]
    dst[inside] = order[lo + (rng.random(len(cls)) * (hi - lo)).astype(np.int64)]
    keep = src != dst
    src, dst = src[keep], dst[keep]

    block = max(1, d // k)
    an = np.repeat(np.arange(n), attrs_per_node)
    pure = rng.random(len(an)) < attr_purity
    ai = rng.integers(0, d, size=len(an))
    ai[pure] = labels[an[pure]] * block + rng.integers(0, block, size=int(pure.sum()))
    ai = np.minimum(ai, d - 1)
    key = np.unique(an * d + ai)
    an, ai = key // d, key % d
    g = AttributedGraph.from_arrays(n, src, dst, an, ai, d=d)
    return LabeledGraph(g, labels)


def cora_like(seed=0) -> LabeledGraph:
    """Synthetic stand-in with Cora's shape: 2708 nodes, ~5.4K edges, 1433
    binary attributes, ~49K associations, 7 imbalanced classes."""
    rng = np.random.default_rng(seed)
    sizes = [818, 426, 418, 351, 298, 217, 180]
    return attributed_sbm(2708, 7, 2.0, 0.8, 1433, 18, 0.35, rng, class_sizes=sizes)


def scaling_graph(total_entries, k=10, seed=0) -> AttributedGraph:
    """Attributed SBM whose |E_V| + |E_R| is close to ``total_entries``.

    Average out-degree and attributes per node are fixed, so n grows linearly
    with the requested size.
    """
    rng = np.random.default_rng(seed)
    deg, per_node = 10, 10
    n = max(int(total_entries / (deg + per_node)), 10 * k)
    return attributed_sbm(n, k, deg, 0.7, 1000, per_node, 0.5, rng).graph
