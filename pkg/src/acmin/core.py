"""ACMin: greedy seeding, orthogonal iterations, NCI rounding and truncated AAMC."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import AttributedGraph, WalkOperator
from .linalg import qr_thin, svd_small

CONVERGENCE_TOL = 1e-8
X_TOL = 1e-9


@dataclass(frozen=True)
class Nci:
    """Hard assignment of n nodes to k clusters (one 1 per column of Y)."""

    assign: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assign, dtype=np.int64)
        if a.ndim != 1:
            raise ValueError("assignment must be a 1-D vector")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if len(a) and (a.min() < 0 or a.max() >= self.k):
            raise ValueError(f"cluster ids must lie in [0, {self.k})")
        a.setflags(write=False)
        object.__setattr__(self, "assign", a)

    @property
    def n(self) -> int:
        return len(self.assign)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assign, minlength=self.k)

    def n_empty(self) -> int:
        return int((self.sizes() == 0).sum())

    def indicator(self) -> np.ndarray:
        """Dense k x n binary Y."""
        y = np.zeros((self.k, self.n))
        y[self.assign, np.arange(self.n)] = 1.0
        return y

    def normalized(self) -> np.ndarray:
        """n x k panel ((YY^T)^{-1/2} Y)^T; empty clusters give zero columns."""
        sizes = self.sizes()
        inv = np.zeros(self.k)
        inv[sizes > 0] = 1.0 / np.sqrt(sizes[sizes > 0])
        h = np.zeros((self.n, self.k))
        h[np.arange(self.n), self.assign] = inv[self.assign]
        return h


def walk_depth(alpha: float) -> int:
    """Truncation depth ceil(1/alpha)."""
    return max(1, math.ceil(1.0 / alpha - 1e-9))


@dataclass
class AcminParams:
    k: int
    alpha: float = 0.2
    beta: float = 0.35
    t_e: int = 200
    t_m: int = 50
    seed: int = 0
    init: str = "greedy"  # or "random"
    tol: float = CONVERGENCE_TOL

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if self.t_e < 0 or self.t_m < 1:
            raise ValueError("t_e must be >= 0 and t_m >= 1")
        if self.init not in ("greedy", "random"):
            raise ValueError(f"unknown init {self.init!r}")

    @property
    def t_walk(self) -> int:
        return walk_depth(self.alpha)


@dataclass
class ClusterReport:
    best_nci: Nci
    best_aamc: float
    aamc_trace: list[float]
    iterations_run: int
    converged_at: int | None
    best_iteration: int
    degenerate: list[bool] = field(default_factory=list)
    ortho_error: list[float] = field(default_factory=list)
    deficient_steps: list[int] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "k": self.best_nci.k,
            "n": self.best_nci.n,
            "best_aamc": self.best_aamc,
            "best_iteration": self.best_iteration,
            "aamc_trace": list(self.aamc_trace),
            "degenerate": list(self.degenerate),
            "iterations_run": self.iterations_run,
            "converged_at": self.converged_at,
            "ortho_error": list(self.ortho_error),
            "deficient_steps": list(self.deficient_steps),
            "assignment": self.best_nci.assign.tolist(),
        }
        if include_timings:
            out["timings"] = dict(self.timings)
        return out

    def to_json(self, include_timings: bool = False) -> str:
        # wall-clock values are excluded by default so equal seeds give equal bytes
        return json.dumps(self.to_dict(include_timings), sort_keys=True)


def init_nci(op: WalkOperator, k: int, alpha: float | None = None) -> Nci:
    """Greedy seeding from high in-degree candidates scored by truncated RWR.

    Candidates are the top min(5k, n) nodes by in-degree; the k with the largest
    total RWR mass become centres, and each node joins the centre it reaches
    with the highest RWR probability. Ties go to the smaller node id / earlier
    centre. Nodes reaching no centre fall into cluster 0.
    """
    alpha = op.alpha if alpha is None else alpha
    n = op.n
    if not 1 <= k <= n:
        raise ValueError(f"init_nci needs 1 <= k <= n, got k={k}, n={n}")
    in_deg = op.graph.in_degree
    order = np.lexsort((np.arange(n), -in_deg))
    cand = order[: min(5 * k, n)]

    pi0 = np.zeros((n, len(cand)))
    pi0[cand, np.arange(len(cand))] = 1.0
    pi = pi0.copy()
    for _ in range(walk_depth(alpha)):
        pi = (1.0 - alpha) * (op.pv @ pi) + pi0
    pi *= alpha

    mass = pi.sum(axis=0)
    top = np.lexsort((cand, -mass))[:k]
    aff = pi[:, top]
    assign = np.argmax(aff, axis=1)
    return Nci(assign, k)


def random_nci(n: int, k: int, rng: np.random.Generator) -> Nci:
    return Nci(rng.integers(0, k, size=n), k)


def ortho_step(op: WalkOperator, f_prev: np.ndarray):
    """One orthogonal iteration on the k x n panel ``f_prev``.

    Returns ``(f_next, lam, deficient)`` with ``W f_prev^T = f_next^T lam``.
    """
    z = op.apply(f_prev.T)
    qr = qr_thin(z)
    return qr.q.T.copy(), qr.lam, qr.deficient


def has_converged(f_next: np.ndarray, f_prev: np.ndarray, tol: float = CONVERGENCE_TOL) -> bool:
    """Row-wise comparison after aligning each row's sign."""
    dots = np.einsum("ij,ij->i", f_next, f_prev)
    signs = np.where(dots < 0, -1.0, 1.0)
    return float(np.max(np.abs(f_next - signs[:, None] * f_prev))) < tol


def rounding_objective(f: np.ndarray, nci: Nci, x: np.ndarray | None = None) -> float:
    """||X F - (YY^T)^{-1/2} Y||_F^2; with X = None the best orthogonal X is used."""
    h = nci.normalized().T
    if x is None:
        svd = svd_small(h @ f.T)
        x = svd.u @ svd.v.T
    return float(((x @ f - h) ** 2).sum())


def gen_nci(f: np.ndarray, t_m: int = 50, seed=0) -> Nci:
    """Round a row-orthonormal k x n panel to a binary NCI.

    Alternates a greedy column sweep for Y (cluster sizes frozen per sweep) with
    an orthogonal Procrustes step for X, starting from X = I and Y = argmax of F.
    """
    f = np.asarray(f, dtype=np.float64)
    k, n = f.shape
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x = np.eye(k)
    m = f.T.copy()
    assign = np.argmax(m, axis=1)
    rows = np.arange(n)
    for _ in range(t_m):
        sizes = np.bincount(assign, minlength=k).astype(np.float64)
        # a node's current cluster has gamma >= 1, so 1/gamma is only read where defined
        inv_cur = np.zeros(k)
        inv_cur[sizes > 0] = 1.0 / np.sqrt(sizes[sizes > 0])
        score = m * (1.0 / np.sqrt(sizes + 1.0))
        score[rows, assign] = m[rows, assign] * inv_cur[assign]
        assign = np.argmax(score, axis=1)

        sizes = np.bincount(assign, minlength=k)
        inv = np.zeros(k)
        inv[sizes > 0] = 1.0 / np.sqrt(sizes[sizes > 0])
        # B = (YY^T)^{-1/2} Y F^T, one bincount per row of F
        b = np.stack([np.bincount(assign, weights=row, minlength=k) for row in f], axis=1)
        b *= inv[:, None]
        svd = svd_small(b, rng)
        x_new = svd.u @ svd.v.T
        done = np.max(np.abs(x_new - x)) < X_TOL
        x = x_new
        if done:
            break
        m = f.T @ x.T
    return Nci(assign, k)


def approx_aamc(op: WalkOperator, y: Nci, t: int | None = None) -> float:
    """Truncated AAMC (2/k) * trace(H0 (I - S_t) H0^T) without forming S_t."""
    if y.n != op.n:
        raise ValueError(f"NCI covers {y.n} nodes, graph has {op.n}")
    alpha = op.alpha
    t = walk_depth(alpha) if t is None else t
    h0 = y.normalized()
    h = h0.copy()
    for _ in range(t):
        h = (1.0 - alpha) * op.apply(h) + h0
    return float(2.0 / y.k * np.sum(h0 * (h0 - alpha * h)))


def _initial_panel(y0: Nci) -> tuple[np.ndarray, list[int]]:
    h = y0.normalized()
    qr = qr_thin(h)
    return qr.q.T.copy(), qr.deficient


def acmin(g: AttributedGraph, params: AcminParams, on_step=None) -> ClusterReport:
    """Run ACMin and keep the NCI with the smallest truncated AAMC.

    NCIs with an empty cluster are scored and traced but never replace a best
    NCI that has all k clusters populated. ``on_step(ell, f, phi)`` is called
    after every outer iteration when given.
    """
    k = params.k
    if not 1 <= k <= g.n:
        raise ValueError(f"acmin needs 1 <= k <= n, got k={k}, n={g.n}")
    rng = np.random.default_rng(params.seed)
    timings = {"setup": 0.0, "init": 0.0, "ortho": 0.0, "gen_nci": 0.0, "aamc": 0.0}

    t0 = time.perf_counter()
    op = WalkOperator(g, params.alpha, params.beta)
    timings["setup"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    y0 = init_nci(op, k, params.alpha) if params.init == "greedy" else random_nci(g.n, k, rng)
    f, deficient0 = _initial_panel(y0)
    timings["init"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    phi = approx_aamc(op, y0, params.t_walk)
    timings["aamc"] += time.perf_counter() - t0

    trace = [phi]
    degenerate = [y0.n_empty() > 0]
    best, best_phi, best_iter = y0, phi, 0
    ortho_err, deficient_steps = [], ([0] if deficient0 else [])
    converged_at = None
    iterations = 0

    for ell in range(1, params.t_e + 1):
        t0 = time.perf_counter()
        f_next, _, deficient = ortho_step(op, f)
        ortho_err.append(float(np.max(np.abs(f_next @ f_next.T - np.eye(k)))))
        if deficient:
            deficient_steps.append(ell)
        timings["ortho"] += time.perf_counter() - t0
        iterations = ell
        if has_converged(f_next, f, params.tol):
            f = f_next
            converged_at = ell
            break
        f = f_next

        t0 = time.perf_counter()
        y = gen_nci(f, params.t_m, rng)
        timings["gen_nci"] += time.perf_counter() - t0

        t0 = time.perf_counter()
        phi_l = approx_aamc(op, y, params.t_walk)
        timings["aamc"] += time.perf_counter() - t0

        trace.append(phi_l)
        is_degen = y.n_empty() > 0
        degenerate.append(is_degen)
        best_degen = best.n_empty() > 0
        if (not is_degen and (best_degen or phi_l < best_phi)) or (is_degen and best_degen and phi_l < best_phi):
            best, best_phi, best_iter = y, phi_l, ell
        if on_step is not None:
            on_step(ell, f, phi_l)

    return ClusterReport(
        best_nci=best,
        best_aamc=best_phi,
        aamc_trace=trace,
        iterations_run=iterations,
        converged_at=converged_at,
        best_iteration=best_iter,
        degenerate=degenerate,
        ortho_error=ortho_err,
        deficient_steps=deficient_steps,
        timings=timings,
    )
