"""Dense kernels: thin QR with a fixed sign convention, small SVD, EM k-means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-12
EXACT_SVD_MAX_K = 64


@dataclass
class QRResult:
    q: np.ndarray
    lam: np.ndarray
    deficient: list[int]

    def __iter__(self):
        # allows ``q, lam = qr_thin(z)``
        return iter((self.q, self.lam))


def qr_thin(z: np.ndarray) -> QRResult:
    """Thin QR ``z = q @ lam`` by classical Gram-Schmidt with one re-orthogonalization pass.

    The diagonal of ``lam`` is non-negative. A column whose residual falls below
    ``RANK_TOL * ||z||`` is replaced by the canonical basis vector that is least
    covered by the columns already built; its index is listed in ``deficient``.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2:
        raise ValueError("qr_thin expects a 2-D panel")
    n, k = z.shape
    if n < k:
        raise ValueError(f"qr_thin needs rows >= cols, got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("qr_thin input contains NaN or Inf")
    scale = np.linalg.norm(z)
    q = np.zeros((n, k))
    lam = np.zeros((k, k))
    covered = np.zeros(n)  # squared row norms of q[:, :j]
    deficient = []
    for j in range(k):
        v = z[:, j].copy()
        qj = q[:, :j]
        c1 = qj.T @ v
        v -= qj @ c1
        c2 = qj.T @ v
        v -= qj @ c2
        lam[:j, j] = c1 + c2
        nrm = np.linalg.norm(v)
        if nrm <= RANK_TOL * scale or nrm == 0.0:
            deficient.append(j)
            e = int(np.argmin(covered))
            v = -qj @ qj[e]
            v[e] += 1.0
            v -= qj @ (qj.T @ v)
            nrm_e = np.linalg.norm(v)
            q[:, j] = v / nrm_e
            lam[j, j] = 0.0
        else:
            q[:, j] = v / nrm
            lam[j, j] = nrm
        covered += q[:, j] ** 2
    return QRResult(q, lam, deficient)


@dataclass
class SmallSvd:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def _randomized_svd(a, rng, oversample=10, power_iters=4):
    k = a.shape[1]
    p = min(k, k + oversample)
    omega = rng.standard_normal((k, p))
    y = a @ omega
    for _ in range(power_iters):
        y, _ = np.linalg.qr(y)
        y = a @ (a.T @ y)
    basis, _ = np.linalg.qr(y)
    b = basis.T @ a
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    return basis @ ub, s, vt.T


def svd_small(a: np.ndarray, rng: np.random.Generator | None = None) -> SmallSvd:
    """Full SVD of a k x k matrix, ``a = u @ diag(sigma) @ v.T``.

    LAPACK is used up to ``EXACT_SVD_MAX_K``; above that a randomized range
    finder (full oversampled rank, so still exact up to rounding) drawn from
    ``rng`` is used.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"svd_small expects a non-empty square matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("svd_small input contains NaN or Inf")
    k = a.shape[0]
    if not np.any(a):
        return SmallSvd(np.eye(k), np.zeros(k), np.eye(k))
    if k <= EXACT_SVD_MAX_K:
        u, s, vt = np.linalg.svd(a)
        return SmallSvd(u, s, vt.T)
    if rng is None:
        rng = np.random.default_rng(0)
    u, s, v = _randomized_svd(a, rng)
    return SmallSvd(u, s, v)


def kmeans_objective(points: np.ndarray, assign: np.ndarray, centers: np.ndarray) -> float:
    return float(((points - centers[assign]) ** 2).sum())


def _centers(points, assign, k):
    counts = np.bincount(assign, minlength=k)
    sums = np.zeros((k, points.shape[1]))
    np.add.at(sums, assign, points)
    out = np.zeros_like(sums)
    nz = counts > 0
    out[nz] = sums[nz] / counts[nz, None]
    return out, counts


def kmeans(points: np.ndarray, k: int, t_m: int, seed=0, history: list | None = None) -> np.ndarray:
    """Lloyd/EM k-means on the rows of ``points`` starting from a random indicator.

    Returns the assignment vector. An emptied cluster is re-seeded with the point
    farthest from its current centre; argmin ties go to the lower cluster index.
    If ``history`` is given, the objective after every sweep is appended to it.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"kmeans needs 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    assign = rng.integers(0, k, size=n)
    centers, counts = _centers(points, assign, k)
    assign = _reseed_empty(points, assign, centers, counts)
    centers, counts = _centers(points, assign, k)
    sq_norms = (points ** 2).sum(axis=1)
    for _ in range(t_m):
        dist = sq_norms[:, None] - 2.0 * points @ centers.T + (centers ** 2).sum(axis=1)[None, :]
        new = np.argmin(dist, axis=1)
        new_centers, counts = _centers(points, new, k)
        new = _reseed_empty(points, new, new_centers, counts)
        new_centers, counts = _centers(points, new, k)
        if history is not None:
            history.append(kmeans_objective(points, new, new_centers))
        changed = not np.array_equal(new, assign)
        assign, centers = new, new_centers
        if not changed:
            break
    return assign


def _reseed_empty(points, assign, centers, counts):
    assign = assign.copy()
    for c in np.flatnonzero(counts == 0):
        dist = ((points - centers[assign]) ** 2).sum(axis=1)
        # only steal from clusters that keep at least one member
        sizes = np.bincount(assign, minlength=len(counts))
        dist[sizes[assign] <= 1] = -1.0
        far = int(np.argmax(dist))
        if dist[far] < 0:
            break
        assign[far] = c
        centers[c] = points[far]
    return assign
