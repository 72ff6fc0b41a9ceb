import numpy as np
import pytest

from acmin.graph import AttributedGraph


def dense_w(g: AttributedGraph, beta: float) -> np.ndarray:
    """Reference W built entry by entry from the definitions (no operator code)."""
    n = g.n
    a = g.adjacency.toarray()
    r = g.attrs.toarray()
    w = np.zeros((n, n))
    for i in range(n):
        deg = a[i].sum()
        pv_row = a[i] / deg if deg > 0 else np.eye(n)[i]
        # P_R[i, j] = R[i].R[j] / sum_l R[i].R[l]
        dots = np.array([r[i] @ r[j] for j in range(n)])
        total = dots.sum()
        if total > 0:
            w[i] = (1 - beta) * pv_row + beta * dots / total
        else:
            w[i] = pv_row
    return w


def dense_s(w: np.ndarray, alpha: float, t: int) -> np.ndarray:
    n = w.shape[0]
    s = np.zeros((n, n))
    p = np.eye(n)
    for ell in range(t + 1):
        s += alpha * (1 - alpha) ** ell * p
        p = p @ w
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def two_cycle(attrs=((0, 0, 1.0), (1, 0, 1.0))):
    an, ai, aw = zip(*attrs) if attrs else ((), (), ())
    return AttributedGraph.from_arrays(2, [0, 1], [1, 0], an, ai, aw, d=1)


def dominant_subspace(w: np.ndarray, k: int, key=np.abs) -> np.ndarray:
    """Orthonormal n x k basis of the invariant subspace for the k eigenvalues
    of ``w`` largest by ``key`` (modulus by default), via an ordered real Schur form.

    Fails if the k-th and (k+1)-th eigenvalues tie under ``key`` (e.g. a split
    complex pair) since the subspace is then not well defined.
    """
    from scipy.linalg import schur

    ev = np.linalg.eigvals(w)
    vals = np.sort(key(ev))[::-1]
    if k < len(vals):
        assert vals[k - 1] - vals[k] > 1e-9, "no gap after the k-th eigenvalue"
        thr = 0.5 * (vals[k - 1] + vals[k])
    else:
        thr = -np.inf
    _, z, sdim = schur(w, output="real", sort=lambda re, im: key(complex(re, im)) > thr)
    assert sdim == k
    return z[:, :k]


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral norm of the difference of orthogonal projectors onto span(a), span(b)."""
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    return float(np.linalg.norm(qa @ qa.T - qb @ qb.T, 2))


# acceptance reporting ------------------------------------------------------------

ACCEPTANCE: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  [{detail}]" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
