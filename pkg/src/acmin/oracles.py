"""Dense and Monte-Carlo references, exhaustive search, and the USC baseline.

Everything here is quadratic (or worse) in n and exists to check the
linear-time code path, or to reproduce the spectral baseline on small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AcminParams, Nci, walk_depth
from .graph import AttributedGraph, WalkOperator
from .linalg import kmeans, qr_thin

MAX_DENSE_N = 20000
MAX_BRUTE_N = 14


class CapExceededError(RuntimeError):
    """Input is too large for a dense or exhaustive routine."""


@dataclass
class DenseS:
    s: np.ndarray
    t: int
    alpha: float
    beta: float

    @property
    def n(self) -> int:
        return self.s.shape[0]


@dataclass
class WalkTrace:
    source: int
    counts: np.ndarray
    n_r: int


def _check_dense_cap(n, max_n):
    if n > max_n:
        raise CapExceededError(f"n={n} exceeds the dense cap of {max_n} nodes")


def materialize_s(op: WalkOperator, t: int | None = None, max_n: int = MAX_DENSE_N) -> DenseS:
    """S_t = alpha * sum_{l<=t} (1-alpha)^l W^l as a dense n x n array."""
    _check_dense_cap(op.n, max_n)
    t = walk_depth(op.alpha) if t is None else t
    eye = np.eye(op.n)
    s = eye.copy()
    for _ in range(t):
        s = (1.0 - op.alpha) * op.apply(s) + eye
    return DenseS(op.alpha * s, t, op.alpha, op.beta)


class _RowSampler:
    """Draws a column index for each requested row of a CSR matrix, proportional
    to the stored weights, using one global searchsorted."""

    def __init__(self, indptr, indices, data):
        self.indices = indices
        lengths = np.diff(indptr)
        row_of = np.repeat(np.arange(len(lengths)), lengths)
        cum = np.concatenate([[0.0], np.cumsum(data, dtype=np.float64)])
        before = cum[indptr[:-1]]
        totals = cum[indptr[1:]] - before
        totals[totals <= 0] = 1.0
        frac = np.minimum((cum[1:] - before[row_of]) / totals[row_of], 1.0)
        # entry e of row i covers (i + frac[e-1], i + frac[e]]
        self.keys = row_of + frac
        self.row_end = indptr[1:] - 1
        self.indptr = indptr

    def sample(self, rows, u):
        pos = np.searchsorted(self.keys, rows + u, side="left")
        pos = np.clip(pos, self.indptr[rows], self.row_end[rows])
        return self.indices[pos]


def simulate_walks(op: WalkOperator, source: int, n_r: int, max_len: int = 100, rng=None) -> WalkTrace:
    """Simulate ``n_r`` attributed random walks from ``source``.

    Each step: stop with probability alpha; otherwise take an attributed jump
    with probability beta (attribute drawn from R-hat[cur] * r, then the target
    from that attribute's column of R) or a topological step along P_V. Nodes
    without attributes always step topologically. Walks alive after
    ``max_len`` hops stop where they are.
    """
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    n = op.n
    pv = op.pv
    r = op.r_attrs
    col_mass = np.asarray(r.sum(axis=0)).ravel()
    # node -> attribute, proportional to R[cur, a] * r_a
    r_csr = r.tocsr()
    node_to_attr = _RowSampler(r_csr.indptr, r_csr.indices, r_csr.data * col_mass[r_csr.indices])
    # attribute -> node, proportional to R[j, a]
    r_csc = r.tocsc()
    attr_to_node = _RowSampler(r_csc.indptr, r_csc.indices, r_csc.data)
    topo = _RowSampler(pv.indptr, pv.indices, pv.data)
    has_attr = op.has_attrs

    counts = np.zeros(n, dtype=np.int64)
    cur = np.full(n_r, source, dtype=np.int64)
    for _ in range(max_len):
        if len(cur) == 0:
            break
        stop = rng.random(len(cur)) < op.alpha
        counts += np.bincount(cur[stop], minlength=n)
        cur = cur[~stop]
        if len(cur) == 0:
            break
        attributed = (rng.random(len(cur)) < op.beta) & has_attr[cur]
        nxt = np.empty_like(cur)
        a_idx = np.flatnonzero(attributed)
        t_idx = np.flatnonzero(~attributed)
        if len(a_idx):
            attrs = node_to_attr.sample(cur[a_idx], rng.random(len(a_idx)))
            nxt[a_idx] = attr_to_node.sample(attrs, rng.random(len(a_idx)))
        if len(t_idx):
            nxt[t_idx] = topo.sample(cur[t_idx], rng.random(len(t_idx)))
        cur = nxt
    counts += np.bincount(cur, minlength=n)
    return WalkTrace(source, counts, n_r)


def classic_conductance(g: AttributedGraph, cluster) -> float:
    """|cut(C)| / min(vol(C), vol(V \\ C)) with out-degree volumes."""
    mask = np.zeros(g.n, dtype=bool)
    mask[np.asarray(list(cluster), dtype=np.int64)] = True
    if not mask.any() or mask.all():
        raise ValueError("cluster must be a non-empty proper subset of the nodes")
    vol_in = int(g.out_degree[mask].sum())
    vol_out = int(g.out_degree[~mask].sum())
    denom = min(vol_in, vol_out)
    if denom == 0:
        raise ValueError("conductance undefined: zero volume on one side")
    coo = g.adjacency.tocoo()
    cut = int(np.count_nonzero(mask[coo.row] & ~mask[coo.col]))
    return cut / denom


def exact_aamc(s: DenseS | np.ndarray, y: Nci) -> float:
    """Average over clusters of sum_{j in C, l not in C} S[j, l] / |C|; empty clusters add 0."""
    s = s.s if isinstance(s, DenseS) else np.asarray(s)
    if s.shape[0] != y.n:
        raise ValueError("S and NCI sizes differ")
    total = 0.0
    for c in range(y.k):
        mask = y.assign == c
        size = int(mask.sum())
        if size == 0:
            continue
        total += s[np.ix_(mask, ~mask)].sum() / size
    return total / y.k


def trace_aamc(s: DenseS | np.ndarray, y: Nci) -> float:
    """(2/k) * trace(H (I - S) H^T) with H = (YY^T)^{-1/2} Y, evaluated densely."""
    s = s.s if isinstance(s, DenseS) else np.asarray(s)
    h = y.normalized()
    return float(2.0 / y.k * np.trace(h.T @ (h - s @ h)))


def mass_trace_aamc(s: DenseS | np.ndarray, y: Nci) -> float:
    """(1/k) * trace(H (D_m - S) H^T), D_m = diag of S's row masses.

    Equals ``exact_aamc`` for every S and every NCI.
    """
    s = s.s if isinstance(s, DenseS) else np.asarray(s)
    h = y.normalized()
    mass = s.sum(axis=1)
    return float(np.trace(h.T @ (mass[:, None] * h - s @ h)) / y.k)


def enumerate_partitions(n: int, k: int) -> np.ndarray:
    """All assignments of n nodes into exactly k non-empty clusters, one per
    partition (restricted growth strings, node 0 always in cluster 0)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rows = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)  # highest label used so far
    for pos in range(1, n):
        remaining = n - pos - 1
        parts, tops = [], []
        for lab in range(k):
            ok = lab <= top + 1
            new_top = np.maximum(top, lab)
            # enough nodes left to open the missing clusters
            ok &= (k - 1 - new_top) <= remaining
            if not ok.any():
                continue
            sel = rows[ok]
            parts.append(np.hstack([sel, np.full((len(sel), 1), lab, dtype=np.int8)]))
            tops.append(new_top[ok].astype(np.int8))
        rows = np.vstack(parts)
        top = np.concatenate(tops)
    return rows[top == k - 1]


def batch_aamc(s: np.ndarray, labels: np.ndarray, k: int, chunk: int = 65536) -> np.ndarray:
    """exact_aamc for every row of ``labels`` (B x n)."""
    mass = s.sum(axis=1)
    out = np.empty(len(labels))
    for start in range(0, len(labels), chunk):
        lab = labels[start:start + chunk]
        acc = np.zeros(len(lab))
        for c in range(k):
            m = (lab == c).astype(np.float64)
            size = m.sum(axis=1)
            within = np.einsum("bj,bj->b", m @ s, m)
            escaped = m @ mass - within
            acc += np.divide(escaped, size, out=np.zeros_like(escaped), where=size > 0)
        out[start:start + chunk] = acc / k
    return out


def brute_force_min_aamc(s: DenseS | np.ndarray, k: int, max_n: int = MAX_BRUTE_N) -> tuple[Nci, float]:
    """Exhaustive minimum of exact_aamc over partitions into exactly k clusters."""
    mat = s.s if isinstance(s, DenseS) else np.asarray(s)
    n = mat.shape[0]
    if n > max_n:
        raise CapExceededError(f"n={n} exceeds the enumeration cap of {max_n}")
    labels = enumerate_partitions(n, k)
    values = batch_aamc(mat, labels, k)
    best = int(np.argmin(values))
    return Nci(labels[best].astype(np.int64), k), float(values[best])


@dataclass
class UscResult:
    nci: Nci
    f: np.ndarray
    converged: bool


def dense_top_k(mat: np.ndarray, k: int, iters: int, rng, tol: float = 1e-8):
    """Orthogonal iteration on a dense matrix; returns a k x n row-orthonormal panel."""
    n = mat.shape[0]
    q = qr_thin(rng.standard_normal((n, k))).q
    converged = False
    for _ in range(iters):
        q_next = qr_thin(mat @ q).q
        dots = np.einsum("ij,ij->j", q_next, q)
        signs = np.where(dots < 0, -1.0, 1.0)
        delta = np.max(np.abs(q_next - q * signs))
        q = q_next
        if delta < tol:
            converged = True
            break
    return q.T.copy(), converged


def usc(g: AttributedGraph, params: AcminParams, max_n: int = MAX_DENSE_N) -> UscResult:
    """Unnormalized spectral clustering on the materialized S_t."""
    _check_dense_cap(g.n, max_n)
    if not 1 <= params.k <= g.n:
        raise ValueError(f"usc needs 1 <= k <= n, got k={params.k}, n={g.n}")
    op = WalkOperator(g, params.alpha, params.beta)
    s = materialize_s(op, params.t_walk, max_n)
    rng = np.random.default_rng(params.seed)
    f, converged = dense_top_k(s.s, params.k, params.t_e, rng)
    assign = kmeans(f.T, params.k, params.t_m, seed=rng)
    return UscResult(Nci(assign, params.k), f, converged)
