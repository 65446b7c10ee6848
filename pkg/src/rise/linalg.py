"""Dense symmetric eigensolver and Gram-route truncated left SVD.

``sym_eigh`` runs cyclic Jacobi sweeps. Pairs are visited in a fixed
round-robin schedule whose rounds consist of disjoint index pairs, so all
rotations of a round commute and can be applied with vectorized array
updates; the result is the same as rotating the pairs one by one.

``trunc_svd_left`` never touches the n-by-n product of a tall matrix: it
eigendecomposes the small d-by-d Gram matrix and maps eigenvectors back
through the data (U = Z v / sigma), so cost stays linear in the number of
rows. Columns belonging to near-zero singular values are completed with a
seeded random orthonormal basis, and every column is sign-canonicalized
(first non-negligible entry non-negative) for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .seeding import make_rng

OFF_DIAG_TOL = 1e-12   # relative to the Frobenius norm
SWEEP_CAP = 100
RANK_TOL = 1e-10       # relative to the largest singular value


class ConvergenceError(RuntimeError):
    """Jacobi sweep cap reached with off-diagonal mass above tolerance."""


@dataclass
class SymEig:
    values: np.ndarray   # descending
    vectors: np.ndarray  # orthonormal columns, vectors[:, j] pairs values[j]


@dataclass
class TruncatedSVD:
    left_vectors: np.ndarray      # (n, k), orthonormal columns
    singular_values: np.ndarray   # (k,) descending, non-negative


@lru_cache(maxsize=None)
def _round_robin_rounds(d: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule: rounds of disjoint pairs covering all C(d,2) pairs."""
    padded = d if d % 2 == 0 else d + 1
    players = list(range(padded))
    rounds = []
    for _ in range(padded - 1):
        ps, qs = [], []
        for i in range(padded // 2):
            a, b = players[i], players[padded - 1 - i]
            if a < d and b < d:  # skip the padding slot for odd d
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def sym_eigh(matrix: np.ndarray) -> SymEig:
    """Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.

    The input is symmetrized internally; asymmetry beyond a small relative
    tolerance is rejected. Sweeps stop once every off-diagonal magnitude
    falls below OFF_DIAG_TOL times the Frobenius norm.
    """
    S = np.asarray(matrix, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise ValueError("matrix contains non-finite values")
    d = S.shape[0]
    scale = max(1.0, float(np.abs(S).max())) if S.size else 1.0
    if float(np.abs(S - S.T).max()) > 1e-9 * scale:
        raise ValueError("matrix is not symmetric")

    A = (S + S.T) / 2.0
    if d == 1:
        return SymEig(values=A[0].copy(), vectors=np.ones((1, 1)))

    V = np.eye(d)
    tol = OFF_DIAG_TOL * float(np.linalg.norm(A))
    if tol == 0.0:
        return SymEig(values=np.zeros(d), vectors=V)

    iu = np.triu_indices(d, 1)
    converged = False
    for _ in range(SWEEP_CAP):
        if float(np.abs(A[iu]).max()) <= tol:
            converged = True
            break
        for P, Q in _round_robin_rounds(d):
            apq = A[P, Q]
            active = np.abs(apq) > tol
            if not active.any():
                continue
            p, q = P[active], Q[active]
            apq = apq[active]
            tau = (A[q, q] - A[p, p]) / (2.0 * apq)
            t = np.copysign(1.0, tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # disjoint plane rotations: columns, then rows
            colP, colQ = A[:, p], A[:, q]
            A[:, p] = colP * c - colQ * s
            A[:, q] = colP * s + colQ * c
            rowP, rowQ = A[p, :], A[q, :]
            A[p, :] = c[:, None] * rowP - s[:, None] * rowQ
            A[q, :] = s[:, None] * rowP + c[:, None] * rowQ
            A[p, q] = 0.0
            A[q, p] = 0.0
            vP, vQ = V[:, p], V[:, q]
            V[:, p] = vP * c - vQ * s
            V[:, q] = vP * s + vQ * c
    if not converged and float(np.abs(A[iu]).max()) > tol:
        raise ConvergenceError(f"Jacobi did not converge within {SWEEP_CAP} sweeps (d={d})")

    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    return SymEig(values=values[order], vectors=V[:, order])


def _fill_orthonormal_column(U: np.ndarray, col: int, filled: np.ndarray, rng) -> None:
    """Seeded random unit vector orthogonal to all currently filled columns."""
    n = U.shape[0]
    basis = U[:, filled]
    for _ in range(64):
        v = rng.standard_normal(n)
        for _ in range(2):  # two projection passes for numerical safety
            if basis.shape[1]:
                v -= basis @ (basis.T @ v)
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-6:
            U[:, col] = v / nrm
            return
    raise RuntimeError("failed to draw an orthonormal completion vector")


def _canonicalize_signs(U: np.ndarray) -> None:
    for j in range(U.shape[1]):
        col = U[:, j]
        peak = float(np.abs(col).max())
        if peak == 0.0:
            continue
        lead = int(np.flatnonzero(np.abs(col) > 1e-12 * peak)[0])
        if col[lead] < 0:
            U[:, j] = -col


def trunc_svd_left(matrix: np.ndarray, k: int, seed: int = 0) -> TruncatedSVD:
    """Top-k left singular vectors and singular values via the Gram matrix.

    For an all-zero input the singular values are zero and the left vectors
    are a seeded arbitrary orthonormal set (not an error).
    """
    Z = np.asarray(matrix, dtype=np.float64)
    if Z.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(Z)):
        raise ValueError("matrix contains non-finite values")
    n, d = Z.shape
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= {d}, got k={k}")
    if k > n:
        raise ValueError(f"cannot produce {k} orthonormal columns from {n} rows")

    eig = sym_eigh(Z.T @ Z)
    sigma = np.sqrt(np.maximum(eig.values, 0.0))
    cutoff = RANK_TOL * sigma[0]

    U = np.zeros((n, k))
    good = sigma[:k] > cutoff
    if good.any():
        Vg = eig.vectors[:, :k][:, good]
        U[:, good] = Z @ (Vg / sigma[:k][good])

    filled = good.copy()
    if not filled.all():
        rng = make_rng(seed)
        for j in np.flatnonzero(~good):
            _fill_orthonormal_column(U, j, filled, rng)
            filled[j] = True

    # the Gram route can lose orthogonality near the rank cutoff; polish if so
    gram_err = float(np.abs(U.T @ U - np.eye(k)).max())
    if gram_err > 1e-9:
        _reorthonormalize(U, make_rng(seed, 1))

    _canonicalize_signs(U)
    return TruncatedSVD(left_vectors=U, singular_values=sigma[:k].copy())


def _reorthonormalize(U: np.ndarray, rng) -> None:
    """In-place modified Gram-Schmidt; spans of leading columns are preserved."""
    k = U.shape[1]
    filled = np.zeros(k, dtype=bool)
    for j in range(k):
        v = U[:, j]
        for i in range(j):
            v -= (U[:, i] @ v) * U[:, i]
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-10:
            U[:, j] = v / nrm
        else:
            _fill_orthonormal_column(U, j, filled, rng)
        filled[j] = True
