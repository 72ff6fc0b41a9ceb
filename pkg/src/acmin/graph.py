"""Attributed graph container, TSV ingestion and the attributed walk operator."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class ParseError(ValueError):
    """Malformed line in an input file."""

    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class AttributedGraph:
    """Directed graph with unit-weight edges and non-negative node attributes.

    ``adjacency`` is an n x n CSR matrix with one stored 1.0 per edge (src -> dst);
    ``attrs`` is the n x d CSR attribute matrix R.
    """

    adjacency: sp.csr_matrix
    attrs: sp.csr_matrix
    out_degree: np.ndarray = field(init=False, repr=False)
    in_degree: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a, r = self.adjacency, self.attrs
        if a.shape[0] != a.shape[1]:
            raise ValidationError(f"adjacency must be square, got {a.shape}")
        if r.shape[0] != a.shape[0]:
            raise ValidationError("attribute matrix row count differs from node count")
        if r.nnz and r.data.min() < 0:
            raise ValidationError("attribute weights must be non-negative")
        out_deg = np.diff(a.indptr).astype(np.int64)
        in_deg = np.bincount(a.indices, minlength=a.shape[0]).astype(np.int64)
        object.__setattr__(self, "out_degree", out_deg)
        object.__setattr__(self, "in_degree", in_deg)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def m(self) -> int:
        return self.adjacency.nnz

    @property
    def d(self) -> int:
        return self.attrs.shape[1]

    @classmethod
    def from_arrays(cls, n, src, dst, attr_node=(), attr_id=(), attr_weight=None, d=None):
        """Build a graph from id arrays, dropping duplicate edges and summing
        duplicate (node, attr) weights."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        attr_node = np.asarray(attr_node, dtype=np.int64)
        attr_id = np.asarray(attr_id, dtype=np.int64)
        if attr_weight is None:
            attr_weight = np.ones(len(attr_node))
        attr_weight = np.asarray(attr_weight, dtype=np.float64)
        if d is None:
            d = int(attr_id.max()) + 1 if len(attr_id) else 0
        for name, ids, bound in (("src", src, n), ("dst", dst, n),
                                 ("attr node", attr_node, n), ("attr", attr_id, d)):
            if len(ids) and (ids.min() < 0 or ids.max() >= bound):
                raise ValidationError(f"{name} id out of range [0, {bound})")
        if len(attr_weight) and attr_weight.min() < 0:
            raise ValidationError("attribute weights must be non-negative")

        if len(src):
            key = np.unique(src * n + dst)
            src, dst = key // n, key % n
        adj = sp.csr_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
        # coo -> csr sums duplicates, which is the attribute rule we want
        attrs = sp.csr_matrix((attr_weight, (attr_node, attr_id)), shape=(n, d))
        attrs.sum_duplicates()
        adj.sort_indices()
        attrs.sort_indices()
        return cls(adj, attrs)


_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)(?:\s+d\s*=\s*(\d+))?")


def _read_rows(path, min_cols, max_cols):
    rows, header = [], {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                hm = _HEADER.match(line)
                if hm:
                    header["n"] = int(hm.group(1))
                    if hm.group(2) is not None:
                        header["d"] = int(hm.group(2))
                continue
            parts = line.split()
            if not min_cols <= len(parts) <= max_cols:
                raise ParseError(path, lineno, f"expected {min_cols}-{max_cols} fields, got {len(parts)}")
            try:
                ids = [int(p) for p in parts[:2]]
                w = float(parts[2]) if len(parts) > 2 else 1.0
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            if min(ids) < 0:
                raise ParseError(path, lineno, "ids must be non-negative integers")
            if not np.isfinite(w):
                raise ParseError(path, lineno, "weight must be finite")
            if w < 0:
                raise ValidationError(f"{path}:{lineno}: negative attribute weight {w}")
            rows.append((ids[0], ids[1], w))
    return rows, header


def load_graph(edge_path, attr_path=None) -> AttributedGraph:
    """Read ``src<TAB>dst`` edges and ``node<TAB>attr[<TAB>weight]`` attributes.

    Node count is ``1 + max id`` unless an ``#n=<N> d=<D>`` header says otherwise.
    Self-loops are kept.
    """
    edges, header = _read_rows(edge_path, 2, 2)
    attrs, attr_header = ([], {}) if attr_path is None else _read_rows(attr_path, 2, 3)
    header = {**attr_header, **header}

    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    an = np.array([a[0] for a in attrs], dtype=np.int64)
    ai = np.array([a[1] for a in attrs], dtype=np.int64)
    aw = np.array([a[2] for a in attrs], dtype=np.float64)

    max_id = max([-1] + [int(x.max()) for x in (src, dst, an) if len(x)])
    n = max(header.get("n", 0), max_id + 1)
    if "n" in header and header["n"] < max_id + 1:
        raise ValidationError(f"header n={header['n']} but node id {max_id} present")
    d = max(header.get("d", 0), int(ai.max()) + 1 if len(ai) else 0)
    if "d" in header and header["d"] < d:
        raise ValidationError(f"header d={header['d']} but attribute id {d - 1} present")
    return AttributedGraph.from_arrays(n, src, dst, an, ai, aw, d=d)


def save_graph(g: AttributedGraph, edge_path, attr_path) -> None:
    coo = g.adjacency.tocoo()
    with open(edge_path, "w", encoding="utf-8") as fh:
        fh.write(f"#n={g.n}\td={g.d}\n")
        for s, t in zip(coo.row, coo.col):
            fh.write(f"{s}\t{t}\n")
    ra = g.attrs.tocoo()
    with open(attr_path, "w", encoding="utf-8") as fh:
        fh.write(f"#n={g.n}\td={g.d}\n")
        for i, j, w in zip(ra.row, ra.col, ra.data):
            fh.write(f"{i}\t{j}\t{float(w)!r}\n")


def load_labels(path, n=None) -> np.ndarray:
    """Read ``node<TAB>label``; labels are remapped to dense ids in order of first
    appearance by sorted label value."""
    rows, _ = _read_rows(path, 2, 2)
    nodes = np.array([r[0] for r in rows], dtype=np.int64)
    raw = np.array([r[1] for r in rows], dtype=np.int64)
    size = n if n is not None else (int(nodes.max()) + 1 if len(nodes) else 0)
    if len(nodes) and nodes.max() >= size:
        raise ValidationError(f"label for node {nodes.max()} outside [0, {size})")
    if len(np.unique(nodes)) != size:
        raise ValidationError(f"{path}: expected one label per node for {size} nodes")
    _, dense = np.unique(raw, return_inverse=True)
    labels = np.empty(size, dtype=np.int64)
    labels[nodes] = dense
    return labels


def build_pv(g: AttributedGraph) -> sp.csr_matrix:
    """Row-stochastic topological transition matrix D^-1 A.

    Dangling nodes get a self-loop so every row keeps unit mass.
    """
    n = g.n
    deg = g.out_degree
    dangling = np.flatnonzero(deg == 0)
    a = g.adjacency
    if len(dangling):
        a = (a + sp.csr_matrix((np.ones(len(dangling)), (dangling, dangling)), shape=(n, n))).tocsr()
        deg = np.where(deg == 0, 1, deg)
    pv = sp.diags(1.0 / deg) @ a
    pv = sp.csr_matrix(pv)
    pv.sort_indices()
    return pv


def build_rhat(g: AttributedGraph) -> sp.csr_matrix:
    """Normalized attribute matrix with R-hat R^T equal to the attributed transition matrix.

    Rows whose attribute mass R[i]·r is zero stay empty.
    """
    r = g.attrs
    col_mass = np.asarray(r.sum(axis=0)).ravel()
    row_norm = r @ col_mass
    scale = np.zeros(g.n)
    pos = row_norm > 0
    scale[pos] = 1.0 / row_norm[pos]
    rhat = sp.csr_matrix(sp.diags(scale) @ r)
    rhat.eliminate_zeros()
    rhat.sort_indices()
    return rhat


class WalkOperator:
    """Matrix-free W = (1-beta) P_V + beta R-hat R^T.

    Nodes without attributes route their beta share through P_V as well, so W
    stays row-stochastic. Nothing of size n x n is ever formed.
    """

    def __init__(self, g: AttributedGraph, alpha: float, beta: float):
        if not 0 < alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {alpha}")
        if not 0 <= beta <= 1:
            raise ValueError(f"beta must be in [0, 1], got {beta}")
        self.graph = g
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.pv = build_pv(g)
        self.rhat = build_rhat(g)
        self.r_attrs = g.attrs
        self.has_attrs = np.diff(self.rhat.indptr) > 0
        topo_weight = np.where(self.has_attrs, 1.0 - beta, 1.0)
        self._pv_scaled = sp.csr_matrix(sp.diags(topo_weight) @ self.pv)
        self._rhat_scaled = (beta * self.rhat).tocsr()
        self._rt = self.r_attrs.T.tocsr()

    @property
    def n(self) -> int:
        return self.graph.n

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Return W @ x for an n-vector or an n x c panel."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n:
            raise ValueError(f"panel has {x.shape[0]} rows, operator has {self.n}")
        return self._pv_scaled @ x + self._rhat_scaled @ (self._rt @ x)

    def apply_transpose(self, x: np.ndarray) -> np.ndarray:
        """Return W^T @ x."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n:
            raise ValueError(f"panel has {x.shape[0]} rows, operator has {self.n}")
        return self._pv_scaled.T @ x + self.r_attrs @ (self._rhat_scaled.T @ x)

    def dense(self) -> np.ndarray:
        """Explicit W; only for small graphs and tests."""
        return self._pv_scaled.toarray() + (self._rhat_scaled @ self._rt).toarray()


def apply_walk(op: WalkOperator, x: np.ndarray) -> np.ndarray:
    return op.apply(x)
