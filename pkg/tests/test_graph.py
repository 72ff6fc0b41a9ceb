import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from acmin.datasets import random_attributed_graph
from acmin.graph import (
    AttributedGraph,
    ParseError,
    ValidationError,
    WalkOperator,
    apply_walk,
    build_pv,
    build_rhat,
    load_graph,
    load_labels,
    save_graph,
)

from conftest import dense_w, two_cycle


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_two_cycle(tmp_path):
    e = write(tmp_path / "e.tsv", "0\t1\n1\t0\n")
    a = write(tmp_path / "a.tsv", "0\t0\t1.0\n1\t0\t1.0\n")
    g = load_graph(e, a)
    assert (g.n, g.m, g.d) == (2, 2, 1)
    assert g.out_degree.tolist() == [1, 1]
    assert g.in_degree.tolist() == [1, 1]


def test_empty_attribute_file(tmp_path):
    e = write(tmp_path / "e.tsv", "0\t1\n")
    a = write(tmp_path / "a.tsv", "")
    g = load_graph(e, a)
    assert g.d == 0 and g.attrs.nnz == 0 and g.n == 2


def test_header_dedup_and_self_loops(tmp_path):
    e = write(tmp_path / "e.tsv", "# comment\n#n=5\td=3\n0\t1\n0\t1\n2\t2\n")
    a = write(tmp_path / "a.tsv", "0\t2\t1.5\n0\t2\t0.5\n3\t1\n")
    g = load_graph(e, a)
    assert (g.n, g.m, g.d) == (5, 2, 3)
    assert g.adjacency[2, 2] == 1.0
    assert g.attrs[0, 2] == pytest.approx(2.0)
    assert g.attrs[3, 1] == 1.0  # default weight


@pytest.mark.parametrize("text,lineno", [("0\t1\nfoo\tbar\n", 2), ("0\n", 1), ("0\t1\t2\n", 1), ("0\t-1\n", 1)])
def test_malformed_edge_line(tmp_path, text, lineno):
    e = write(tmp_path / "e.tsv", text)
    with pytest.raises(ParseError) as info:
        load_graph(e)
    assert info.value.lineno == lineno
    assert f":{lineno}:" in str(info.value)


def test_negative_weight(tmp_path):
    e = write(tmp_path / "e.tsv", "0\t1\n")
    a = write(tmp_path / "a.tsv", "0\t0\t-2\n")
    with pytest.raises(ValidationError):
        load_graph(e, a)


def test_header_smaller_than_ids(tmp_path):
    e = write(tmp_path / "e.tsv", "#n=2\n0\t5\n")
    with pytest.raises(ValidationError):
        load_graph(e)


def test_save_load_roundtrip(tmp_path, rng):
    g = random_attributed_graph(15, rng)
    save_graph(g, tmp_path / "e.tsv", tmp_path / "a.tsv")
    h = load_graph(tmp_path / "e.tsv", tmp_path / "a.tsv")
    assert (h.n, h.d) == (g.n, g.d)
    assert (h.adjacency != g.adjacency).nnz == 0
    np.testing.assert_array_equal(h.attrs.toarray(), g.attrs.toarray())


def test_load_labels(tmp_path):
    p = write(tmp_path / "l.tsv", "1\t7\n0\t3\n2\t7\n")
    assert load_labels(p, 3).tolist() == [0, 1, 1]
    with pytest.raises(ValidationError):
        load_labels(p, 4)


def test_from_arrays_range_check():
    with pytest.raises(ValidationError):
        AttributedGraph.from_arrays(2, [0], [2])
    with pytest.raises(ValidationError):
        AttributedGraph.from_arrays(2, [0], [1], [0], [3], d=2)


# P_V and R-hat ---------------------------------------------------------------

def test_pv_examples():
    np.testing.assert_array_equal(build_pv(two_cycle()).toarray(), [[0, 1], [1, 0]])
    g = AttributedGraph.from_arrays(4, [0, 0], [1, 2])
    pv = build_pv(g).toarray()
    np.testing.assert_array_equal(pv[0], [0, 0.5, 0.5, 0])
    # nodes 1..3 are dangling -> self-loops
    np.testing.assert_array_equal(pv[3], [0, 0, 0, 1])
    np.testing.assert_array_equal(pv[1], [0, 1, 0, 0])


def test_rhat_examples():
    g = two_cycle()
    rhat = build_rhat(g).toarray()
    np.testing.assert_allclose(rhat, [[0.5], [0.5]])
    np.testing.assert_allclose(rhat @ g.attrs.toarray().T, [[0.5, 0.5], [0.5, 0.5]])

    g = two_cycle(((0, 0, 2.0), (1, 0, 1.0)))
    pr = build_rhat(g) @ g.attrs.T
    np.testing.assert_allclose(pr.toarray()[0], [2 / 3, 1 / 3], atol=1e-15)


def test_rhat_empty_row():
    g = AttributedGraph.from_arrays(3, [0, 1], [1, 2], [0, 1], [0, 0], d=1)
    rhat = build_rhat(g)
    assert rhat.getrow(2).nnz == 0


def test_walk_beta_one_two_nodes():
    g = two_cycle(((0, 0, 2.0), (1, 0, 1.0)))
    op = WalkOperator(g, 0.2, 1.0)
    x = np.array([[1.0, 0.0], [0.0, 1.0]])
    np.testing.assert_allclose(apply_walk(op, x), [[2 / 3, 1 / 3], [2 / 3, 1 / 3]], atol=1e-15)


def test_walk_beta_zero_is_pv(rng):
    g = random_attributed_graph(12, rng)
    op = WalkOperator(g, 0.2, 0.0)
    x = rng.standard_normal((12, 3))
    np.testing.assert_allclose(apply_walk(op, x), op.pv @ x, atol=1e-15)


def test_walk_rejects_bad_shape(rng):
    op = WalkOperator(random_attributed_graph(5, rng), 0.2, 0.3)
    with pytest.raises(ValueError):
        op.apply(np.ones((4, 2)))


def test_walk_operator_is_sparse_only(rng):
    op = WalkOperator(random_attributed_graph(30, rng), 0.2, 0.35)
    for mat in (op._pv_scaled, op._rhat_scaled, op._rt):
        assert sp.issparse(mat)


@st.composite
def graphs(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    p_edge = draw(st.floats(0.0, 0.5))
    p_attr = draw(st.floats(0.0, 0.6))
    d = draw(st.integers(1, 30))
    return random_attributed_graph(n, np.random.default_rng(seed), p_edge, d, p_attr)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.floats(0.05, 0.95), st.floats(0.0, 1.0))
def test_walk_is_row_stochastic(g, alpha, beta):
    op = WalkOperator(g, alpha, beta)
    np.testing.assert_allclose(apply_walk(op, np.ones(g.n)), 1.0, atol=1e-10)
    assert np.abs(np.asarray(op.pv.sum(axis=1)).ravel() - 1).max() < 1e-12
    assert op.pv.data.min() >= 0
    if op.rhat.nnz:
        assert op.rhat.data.min() >= 0
    pr_rows = op.rhat @ (op.r_attrs.T @ np.ones(g.n))
    np.testing.assert_allclose(pr_rows[op.has_attrs], 1.0, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=30), st.floats(0.0, 1.0))
def test_walk_matches_dense_definition(g, beta):
    op = WalkOperator(g, 0.2, beta)
    ref = dense_w(g, beta)
    assert np.abs(op.dense() - ref).max() < 1e-12
    x = np.random.default_rng(g.n).standard_normal((g.n, 3))
    assert np.abs(apply_walk(op, x) - ref @ x).max() < 1e-12 * max(1.0, np.abs(x).max() * g.n)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=20))
def test_transpose_consistent(g):
    op = WalkOperator(g, 0.2, 0.35)
    x = np.random.default_rng(1).standard_normal(g.n)
    np.testing.assert_allclose(op.apply_transpose(x), op.dense().T @ x, atol=1e-12)


def test_degrees_match_storage(rng):
    g = random_attributed_graph(25, rng)
    a = g.adjacency.toarray()
    np.testing.assert_array_equal(g.out_degree, a.sum(axis=1))
    np.testing.assert_array_equal(g.in_degree, a.sum(axis=0))
