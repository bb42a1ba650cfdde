"""Small dense linear algebra used throughout the package.

Everything here works on plain ``numpy`` arrays. Symmetric matrices are
ordinary ``(k, k)`` arrays (or stacks ``(..., k, k)``); a basis of a subspace
is wrapped in :class:`BasisMatrix`, which checks linear independence when it
is built.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BasisMatrix",
    "RankDeficientError",
    "cholesky_logdet",
    "orthonormalize",
    "complement_basis",
    "min_eigenvalue",
    "canonical_sign",
]

PIVOT_RTOL = 1e-12
RANK_RTOL = 1e-10
COMPLEMENT_TOL = 1e-8


class RankDeficientError(ValueError):
    """Raised when basis rows are linearly dependent."""

    def __init__(self, row, message=None):
        self.row = row
        super().__init__(message or f"basis row {row} is linearly dependent on the preceding rows")


def _gram_schmidt(rows, rtol=RANK_RTOL):
    # modified Gram-Schmidt with one re-orthogonalization pass
    q = []
    for i, r in enumerate(rows):
        norm0 = np.linalg.norm(r)
        if not np.isfinite(norm0):
            raise ValueError(f"basis row {i} has non-finite entries")
        w = np.array(r, dtype=float)
        for _ in range(2):
            for u in q:
                w -= (u @ w) * u
        norm = np.linalg.norm(w)
        if norm0 == 0.0 or norm <= rtol * norm0:
            raise RankDeficientError(i)
        q.append(w / norm)
    return np.array(q)


@dataclass(frozen=True, eq=False)
class BasisMatrix:
    """Independent rows ``u_1, ..., u_k`` spanning a subspace of R^n."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] == 0:
            raise ValueError("basis must be a nonempty 2-d array of rows")
        if rows.shape[0] > rows.shape[1]:
            raise RankDeficientError(rows.shape[1], f"{rows.shape[0]} rows cannot be independent in R^{rows.shape[1]}")
        _gram_schmidt(rows)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[1]

    @property
    def k(self):
        return self.rows.shape[0]

    def gram(self):
        return self.rows @ self.rows.T


def canonical_sign(rows, atol=1e-12):
    """Flip each row so that its first non-negligible coordinate is positive."""
    rows = np.array(rows, dtype=float)
    for r in rows:
        nz = np.flatnonzero(np.abs(r) > atol)
        if nz.size and r[nz[0]] < 0:
            r *= -1.0
    return rows


def orthonormalize(b):
    """Orthonormal rows spanning the same subspace as ``b``.

    Rows are produced by modified Gram-Schmidt in input order and then sign
    normalized with :func:`canonical_sign`.
    """
    if not isinstance(b, BasisMatrix):
        b = BasisMatrix(b)
    return BasisMatrix(canonical_sign(_gram_schmidt(b.rows)))


def complement_basis(b):
    """Orthonormal basis of the orthogonal complement of ``span(b)``.

    The orthonormalized rows of ``b`` are completed to an orthonormal basis
    of R^n by running Gram-Schmidt over the coordinate vectors ``e_1, ...,
    e_n`` and skipping candidates whose residual norm is below 1e-8.
    """
    if not isinstance(b, BasisMatrix):
        b = BasisMatrix(b)
    n, k = b.n, b.k
    if k >= n:
        raise ValueError("subspace is all of R^n; its orthogonal complement is trivial")
    q = list(_gram_schmidt(b.rows))
    out = []
    for j in range(n):
        w = np.zeros(n)
        w[j] = 1.0
        for _ in range(2):
            for u in q:
                w -= (u @ w) * u
        norm = np.linalg.norm(w)
        if norm <= COMPLEMENT_TOL:
            continue
        w /= norm
        q.append(w)
        out.append(w)
        if len(out) == n - k:
            break
    return BasisMatrix(canonical_sign(np.array(out)))


def cholesky_logdet(m, rtol=PIVOT_RTOL):
    """Log-determinant of symmetric positive definite matrices by Cholesky.

    Parameters
    ----------
    m : array_like, shape (..., k, k)
        Symmetric matrix or stack of matrices. Only the lower triangle is read.
    rtol : float
        A pivot is accepted when it exceeds ``rtol`` times the largest
        diagonal entry of its matrix.

    Returns
    -------
    logdet : float or ndarray
        ``log det m``; ``-inf`` where the matrix was flagged singular.
    singular : bool or ndarray
        True where a pivot fell below tolerance (singular or indefinite).
    """
    m = np.asarray(m, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError("expected square matrices")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    lead = m.shape[:-2]
    k = m.shape[-1]
    a = m.reshape((-1, k, k))
    b = a.shape[0]

    diag = np.diagonal(a, axis1=1, axis2=2)
    tol = rtol * diag.max(axis=1)
    singular = ~(tol > 0)
    L = np.zeros_like(a)
    logdet = np.zeros(b)
    for j in range(k):
        s = a[:, j, j] - np.einsum("bi,bi->b", L[:, j, :j], L[:, j, :j])
        ok = s > tol
        singular |= ~ok
        d = np.sqrt(np.where(ok, s, 1.0))
        L[:, j, j] = d
        logdet += 2.0 * np.log(d)
        if j + 1 < k:
            below = a[:, j + 1:, j] - np.einsum("bik,bk->bi", L[:, j + 1:, :j], L[:, j, :j])
            L[:, j + 1:, j] = below / d[:, None]
    logdet[singular] = -np.inf

    if not lead:
        return float(logdet[0]), bool(singular[0])
    return logdet.reshape(lead), singular.reshape(lead)


def min_eigenvalue(m):
    """Smallest eigenvalue of a symmetric matrix."""
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return float(np.linalg.eigvalsh(0.5 * (m + m.T))[0])
