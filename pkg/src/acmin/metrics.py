"""External and internal clustering quality indices."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import AttributedGraph


def _as_labels(x) -> np.ndarray:
    a = getattr(x, "assign", x)
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError("labels must be a 1-D vector")
    return a


def _contingency(pred, truth):
    pred, truth = _as_labels(pred), _as_labels(truth)
    if len(pred) != len(truth):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(truth)} labels")
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    table = np.zeros((p.max() + 1 if len(p) else 0, t.max() + 1 if len(t) else 0), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return table


def clustering_accuracy(pred, truth) -> float:
    """Best one-to-one cluster/class matching (Hungarian), as a fraction of nodes."""
    table = _contingency(pred, truth)
    n = table.sum()
    if n == 0:
        return 1.0
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum() / n)


def nmi(pred, truth) -> float:
    """Normalized mutual information 2 I / (H_pred + H_truth), natural log."""
    table = _contingency(pred, truth).astype(np.float64)
    n = table.sum()
    if n == 0:
        return 1.0
    pxy = table / n
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    hx = -np.sum(px * np.log(px))
    hy = -np.sum(py * np.log(py))
    if hx == 0.0 or hy == 0.0:
        # one side is a single cluster: identical only if both are
        return 1.0 if hx == hy else 0.0
    nz = pxy > 0
    mi = np.sum(pxy[nz] * np.log(pxy[nz] / np.outer(px, py)[nz]))
    return float(np.clip(2.0 * mi / (hx + hy), 0.0, 1.0))


def modularity(g: AttributedGraph, y) -> float:
    """Directed modularity (1/m) sum_ij [A_ij - dout_i din_j / m] [c_i == c_j]."""
    labels = _as_labels(y)
    if len(labels) != g.n:
        raise ValueError("partition size differs from node count")
    m = g.m
    if m == 0:
        raise ValueError("modularity undefined on a graph without edges")
    coo = g.adjacency.tocoo()
    inside = np.count_nonzero(labels[coo.row] == labels[coo.col])
    k = labels.max() + 1
    out_tot = np.bincount(labels, weights=g.out_degree, minlength=k)
    in_tot = np.bincount(labels, weights=g.in_degree, minlength=k)
    return float(inside / m - np.dot(out_tot, in_tot) / m ** 2)


@dataclass
class MetricsReport:
    k: int
    n: int
    ca: float | None = None
    nmi: float | None = None
    modularity: float | None = None
    aamc: float | None = None
    provenance: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ca": self.ca,
            "nmi": self.nmi,
            "modularity": self.modularity,
            "aamc": self.aamc,
            "k": self.k,
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())
