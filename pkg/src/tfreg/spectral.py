"""Second adjacency eigenvalue, expander mixing, and deletion bounds.

``lambda`` here is ``max(|lambda_2|, |lambda_n|)`` of the adjacency matrix.
"""

import math
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg
from threadpoolctl import threadpool_limits

from .graph import _as_vertex_set

DENSE_MAX_N = 4096


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralReport:
    lam: float
    method: str
    residual: float
    iterations: int
    tolerance: float
    regular: bool = True

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def thread_count():
    try:
        return max(1, int(os.environ.get("TFREG_THREADS", "1")))
    except ValueError:
        return 1


@contextmanager
def _blas_threads():
    with threadpool_limits(limits=thread_count()):
        yield


def dense_spectrum(G):
    """All adjacency eigenvalues, descending."""
    if G.n > DENSE_MAX_N:
        raise SpectralError(f"dense eigensolver limited to n <= {DENSE_MAX_N}, got n={G.n}")
    A = G.adjacency().toarray()
    with _blas_threads():
        ev = scipy.linalg.eigh(A, eigvals_only=True, driver="evd")
    return ev[::-1]


def _lambda_from_spectrum(ev):
    if len(ev) < 2:
        return 0.0
    return float(max(abs(ev[1]), abs(ev[-1])))


def compute_lambda(G, method="dense", tol=1e-6, max_iter=None, seed=0):
    """Return a :class:`SpectralReport` for ``G``.

    ``dense`` diagonalises the full matrix (any graph, ``n <= 4096``).
    ``lanczos`` requires a regular graph: the all-ones eigenvector is
    projected out at every step and the two extreme Ritz values of the
    remaining operator are iterated until both residuals are at most
    ``tol * d``.  The reported residual is the explicit ``||Ax - theta x||``
    of the winning Ritz pair.
    """
    regular = G.is_regular()
    if method == "dense":
        ev = dense_spectrum(G)
        return SpectralReport(_lambda_from_spectrum(ev), "dense", 0.0, 0, tol, regular)
    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")
    if not regular:
        raise SpectralError("lanczos path requires a regular graph; use method='dense'")
    return _lanczos(G, tol, max_iter, seed)


def _lanczos(G, tol, max_iter, seed):
    n = G.n
    d = int(G.degrees[0]) if n else 0
    if n <= 2 or d == 0:
        # deflated space is trivial or the matrix is zero
        ev = dense_spectrum(G) if n else np.zeros(0)
        return SpectralReport(_lambda_from_spectrum(ev), "lanczos", 0.0, 0, tol, True)
    if max_iter is None:
        max_iter = int(10 * math.sqrt(n))
    dim = n - 1
    max_iter = min(max_iter, dim)
    A = G.adjacency()
    ones = np.full(n, 1.0 / math.sqrt(n))

    def project(x):
        return x - ones * (ones @ x)

    rng = np.random.default_rng(seed)
    q = project(rng.standard_normal(n))
    q /= np.linalg.norm(q)
    Q = np.zeros((min(max_iter + 1, 128), n))
    Q[0] = q
    alphas, betas = [], []
    target = tol * d
    check_every = 5
    with _blas_threads():
        for j in range(max_iter):
            w = project(A @ Q[j])
            alpha = float(Q[j] @ w)
            w -= alpha * Q[j]
            if j:
                w -= betas[-1] * Q[j - 1]
            # full reorthogonalisation, twice for stability
            for _ in range(2):
                w -= Q[:j + 1].T @ (Q[:j + 1] @ w)
                w = project(w)
            beta = float(np.linalg.norm(w))
            alphas.append(alpha)
            exhausted = beta <= 1e-12 * d or j + 1 == dim
            if exhausted or (j + 1) % check_every == 0 or j + 1 == max_iter:
                theta, S = scipy.linalg.eigh_tridiagonal(np.array(alphas), np.array(betas))
                bounds = beta * np.abs(S[-1, [0, -1]])
                if exhausted or bounds.max() <= target:
                    return _finish(A, Q[:j + 1], theta, S, j + 1, tol, project)
            betas.append(beta)
            if j + 1 == len(Q):
                Q = np.concatenate([Q, np.zeros((min(len(Q), max_iter + 1 - len(Q)), n))])
            Q[j + 1] = w / beta
    raise SpectralError(f"Lanczos did not converge within {max_iter} iterations "
                        f"(residual bounds {bounds.tolist()} > {target})")


def _finish(A, Q, theta, S, iters, tol, project):
    idx = 0 if abs(theta[0]) >= abs(theta[-1]) else len(theta) - 1
    x = Q.T @ S[:, idx]
    x /= np.linalg.norm(x)
    r = project(A @ x) - theta[idx] * x
    return SpectralReport(float(abs(theta[idx])), "lanczos", float(np.linalg.norm(r)),
                          iters, tol, True)


def edge_count_between(G, S, T):
    """Ordered pairs ``(s, t)`` with ``s in S``, ``t in T`` and ``st`` an edge."""
    S = _as_vertex_set(G, S)
    T = _as_vertex_set(G, T)
    s = np.zeros(G.n)
    t = np.zeros(G.n)
    s[S] = 1.0
    t[T] = 1.0
    return int(round(s @ (G.adjacency() @ t)))


def mixing_deviation(G, S, T, lam):
    """Compare ``e(S, T)`` with the expected ``d|S||T|/n``.

    ``bound_ratio`` is the deviation divided by ``lam * sqrt(|S||T|)``; the
    expander mixing lemma says it never exceeds 1 for a d-regular graph.
    """
    if not G.is_regular():
        raise ValueError("mixing deviation is defined for regular graphs")
    S = _as_vertex_set(G, S)
    T = _as_vertex_set(G, T)
    d = int(G.degrees[0]) if G.n else 0
    e = edge_count_between(G, S, T)
    expected = d / G.n * len(S) * len(T)
    deviation = abs(e - expected)
    scale = lam * math.sqrt(len(S) * len(T))
    if scale > 0:
        ratio = deviation / scale
    else:
        ratio = 0.0 if deviation == 0 else math.inf
    return {"e_ST": e, "expected": expected, "deviation": deviation, "bound_ratio": ratio}


def deletion_bounds(base, delta_F):
    """Additive bounds after deleting a subgraph of max degree ``delta_F``.

    ``base`` maps ``"lambda"`` and/or ``"beta"`` to numbers.
    """
    if delta_F < 0:
        raise ValueError("delta_F must be nonnegative")
    out = {}
    if base.get("lambda") is not None:
        out["lambda_new"] = base["lambda"] + delta_F
    if base.get("beta") is not None:
        out["beta_new"] = base["beta"] + delta_F
    return out
