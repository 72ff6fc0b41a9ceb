import numpy as np

from acmin.datasets import (
    attributed_sbm,
    cora_like,
    find_dataset,
    planted_cliques,
    read_linqs,
    scaling_graph,
    strongly_connected_graph,
    write_tsv_dataset,
)
from acmin.graph import build_pv


CONTENT = """p1\t1\t0\t1\tA
p2\t0\t1\t0\tB
p3\t1\t1\t0\tA
"""
CITES = """p1\tp2
p2\tp3
p9\tp1
"""


def test_read_linqs(tmp_path):
    (tmp_path / "x.content").write_text(CONTENT)
    (tmp_path / "x.cites").write_text(CITES)
    data = read_linqs(tmp_path / "x.content", tmp_path / "x.cites")
    g = data.graph
    assert (g.n, g.d, g.m) == (3, 3, 2)
    # "cited citing" -> citing -> cited
    assert g.adjacency[1, 0] == 1 and g.adjacency[2, 1] == 1
    assert data.labels.tolist() == [0, 1, 0]
    assert g.attrs.nnz == 5


def test_find_dataset(tmp_path):
    assert find_dataset("cora", tmp_path) is None
    (tmp_path / "x").mkdir()
    (tmp_path / "x" / "x.content").write_text(CONTENT)
    (tmp_path / "x" / "x.cites").write_text(CITES)
    raw = find_dataset("x", tmp_path)
    write_tsv_dataset(raw, tmp_path / "y", "y")
    conv = find_dataset("y", tmp_path)
    assert (conv.graph.adjacency != raw.graph.adjacency).nnz == 0
    np.testing.assert_array_equal(conv.labels, raw.labels)


def test_generators_shape():
    data = cora_like(0)
    g = data.graph
    assert (g.n, g.d) == (2708, 1433)
    assert len(np.unique(data.labels)) == 7
    assert 4500 < g.m < 6000
    assert 40000 < g.attrs.nnz < 50000

    pc = planted_cliques(10, 2)
    assert pc.graph.m == 2 * 90 + 2

    rng = np.random.default_rng(0)
    sc = strongly_connected_graph(30, rng)
    # a Hamiltonian cycle means no dangling nodes
    assert sc.out_degree.min() >= 1 and np.all(build_pv(sc).diagonal() == 0)

    sbm = attributed_sbm(500, 5, 4.0, 0.9, 100, 5, 0.8, rng)
    inside = sbm.labels[sbm.graph.adjacency.tocoo().row] == sbm.labels[sbm.graph.adjacency.tocoo().col]
    assert inside.mean() > 0.8


def test_scaling_graph_size():
    g = scaling_graph(200000, k=10, seed=1)
    total = g.m + g.attrs.nnz
    assert 0.85 * 200000 < total < 1.05 * 200000
