"""Graph Laplacian, a Jacobi eigensolver and the Fiedler quotient."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantVectorError, ConvergenceError
from .graph import Graph

__all__ = ["laplacian", "Spectrum", "jacobi_eigh", "eigen_lambda2", "fiedler_quotient", "algebraic_connectivity"]


def laplacian(g: Graph) -> np.ndarray:
    """Dense ``L = D - A`` as a float array."""
    L = np.zeros((g.n, g.n))
    if g.m:
        e = np.asarray(g.edges)
        L[e[:, 0], e[:, 1]] = -1.0
        L[e[:, 1], e[:, 0]] = -1.0
    L[np.diag_indices(g.n)] = -L.sum(axis=1)
    return L


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def fiedler_vector(self) -> np.ndarray:
        return self.eigenvectors[:, 1]


def _round_robin(m: int):
    """Yield ``m - 1`` rounds of disjoint index pairs covering all pairs once (m even)."""
    players = list(range(m))
    for _ in range(m - 1):
        yield [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        players = [players[0], players[-1]] + players[1:-1]


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 100, fail_tol: float = 1e-8):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the ``n // 2`` rotations of a round touch disjoint rows and columns
    and can be applied together.  Iteration stops once the off-diagonal
    Frobenius norm falls below ``tol * ||A||_F``.

    Returns
    -------
    eigenvalues : ndarray, ascending
    eigenvectors : ndarray, columns matched to ``eigenvalues``
    sweeps : int

    Raises :class:`ConvergenceError` if ``max_sweeps`` is reached with the
    off-diagonal norm still above ``fail_tol * ||A||_F``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise ValueError("matrix must be symmetric")
    V = np.eye(n)
    norm = np.linalg.norm(A)
    m = n + (n % 2)
    rounds = []
    for pairs in _round_robin(m):
        pq = np.array([(p, q) for p, q in pairs if q < n and p < n], dtype=int).reshape(-1, 2)
        rounds.append((pq[:, 0], pq[:, 1]))

    offmask = ~np.eye(n, dtype=bool)

    def off(M):
        return np.linalg.norm(M[offmask])

    sweeps = 0
    while norm > 0 and off(A) > tol * norm:
        if sweeps == max_sweeps:
            if off(A) > fail_tol * norm:
                raise ConvergenceError(
                    f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off(A):.3e}, norm {norm:.3e})"
                )
            break
        for P, Q in rounds:
            if P.size == 0:
                continue
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            theta = (A[Q, Q] - A[P, P]) / (2.0 * apq)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^T A J, rows first then columns
            rp, rq = A[P, :], A[Q, :]
            A[P, :] = c[:, None] * rp - s[:, None] * rq
            A[Q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, P], A[:, Q]
            A[:, P] = cp * c - cq * s
            A[:, Q] = cp * s + cq * c
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = V[:, P], V[:, Q]
            V[:, P] = vp * c - vq * s
            V[:, Q] = vp * s + vq * c
        A = 0.5 * (A + A.T)
        sweeps += 1
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], sweeps


def eigen_lambda2(L, **kwargs) -> Spectrum:
    """Full spectrum of a Laplacian via :func:`jacobi_eigh`."""
    L = np.asarray(L, dtype=float)
    if L.shape[0] < 2:
        raise ValueError("need at least two vertices for lambda_2")
    w, V, sweeps = jacobi_eigh(L, **kwargs)
    return Spectrum(w, V, sweeps)


def algebraic_connectivity(g: Graph) -> float:
    return eigen_lambda2(laplacian(g)).lambda2


def fiedler_quotient(g: Graph, x) -> float:
    """``2n * sum_E (x_u - x_v)^2 / sum_u sum_v (x_u - x_v)^2``.

    Its minimum over non-constant ``x`` is the algebraic connectivity.  The
    denominator runs over ordered pairs.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise ValueError(f"x must have length {g.n}")
    if x.max() - x.min() <= 1e-12:
        raise ConstantVectorError("Fiedler quotient is undefined for constant vectors")
    if g.m:
        e = np.asarray(g.edges)
        num = 2 * g.n * np.sum((x[e[:, 0]] - x[e[:, 1]]) ** 2)
    else:
        num = 0.0
    den = np.sum(np.subtract.outer(x, x) ** 2)
    return float(num / den)
