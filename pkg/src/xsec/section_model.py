"""Subspaces, dilations and the column vectors fed to the volume formulas."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkit import BasisMatrix, complement_basis, orthonormalize

__all__ = [
    "SubspaceSpec",
    "ColumnProfile",
    "make_subspace",
    "codim_profile",
    "dim_profile",
    "to_dilation",
    "as_dilation",
]

GIVEN_AS = ("H", "complement")


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """A linear subspace H of R^n.

    ``given_as`` is ``"H"`` when ``basis`` spans H itself and
    ``"complement"`` when it spans the orthogonal complement of H.
    """

    n: int
    given_as: str
    basis: BasisMatrix

    @property
    def dim_H(self):
        if self.given_as == "H":
            return self.basis.k
        return self.n - self.basis.k

    def basis_of_H(self):
        if self.given_as == "H":
            return self.basis
        return complement_basis(self.basis)

    def basis_of_complement(self):
        if self.given_as == "complement":
            return self.basis
        return complement_basis(self.basis)

    def permuted(self, perm):
        """Same subspace after relabelling coordinates: new coordinate i is old ``perm[i]``."""
        return SubspaceSpec(self.n, self.given_as, BasisMatrix(self.basis.rows[:, perm]))


def make_subspace(n, given_as, rows):
    """Build a :class:`SubspaceSpec`, validating shapes and independence."""
    if given_as in ("basis_of_H",):
        given_as = "H"
    elif given_as in ("basis_of_complement",):
        given_as = "complement"
    if given_as not in GIVEN_AS:
        raise ValueError(f"given_as must be one of {GIVEN_AS}, got {given_as!r}")
    n = int(n)
    if n < 1:
        raise ValueError("ambient dimension must be at least 1")
    rows = np.array(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[None, :]
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ValueError("rows must be a nonempty list of vectors")
    if rows.shape[1] != n:
        raise ValueError(f"rows have dimension {rows.shape[1]}, expected n={n}")
    if given_as == "complement" and rows.shape[0] >= n:
        raise ValueError("a complement basis with n rows leaves a zero-dimensional H")
    return SubspaceSpec(n, given_as, BasisMatrix(rows))


@dataclass(frozen=True, eq=False)
class ColumnProfile:
    """The ``k x n`` generating matrix whose columns are ``v_1, ..., v_n``.

    ``mode`` is ``"codim"`` for orthonormal rows spanning the complement of H
    and ``"dim"`` for (not necessarily orthonormal) rows spanning H.
    """

    mode: str
    matrix: np.ndarray

    @property
    def k(self):
        return self.matrix.shape[0]

    @property
    def n(self):
        return self.matrix.shape[1]

    @property
    def columns(self):
        return self.matrix.T

    def outer_sum(self):
        """``sum_i v_i v_i^T`` as a ``k x k`` array."""
        return self.matrix @ self.matrix.T


def codim_profile(s):
    if s.dim_H >= s.n:
        raise ValueError("H is all of R^n: no complement, use oracle.full_volume")
    q = orthonormalize(s.basis_of_complement())
    return ColumnProfile("codim", q.rows)


def dim_profile(s, orthonormal=False):
    b = s.basis_of_H()
    if orthonormal:
        b = orthonormalize(b)
    return ColumnProfile("dim", b.rows)


def as_dilation(a, n=None):
    """Validate a vector of positive finite scales."""
    a = np.array(a, dtype=float).ravel()
    if n is not None and a.size != n:
        raise ValueError(f"dilation has {a.size} entries, expected {n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("dilation entries must be finite")
    if not np.all(a > 0):
        raise ValueError("dilation entries must be positive")
    return a


def to_dilation(t):
    """``a_i = exp(t_i)``; raises ``OverflowError`` when an entry overflows."""
    t = np.array(t, dtype=float).ravel()
    if not np.all(np.isfinite(t)):
        raise ValueError("log-dilation entries must be finite")
    with np.errstate(over="ignore"):
        a = np.exp(t)
    if not np.all(np.isfinite(a)):
        raise OverflowError("exp(t) overflows for some entry of t")
    if not np.all(a > 0):
        raise OverflowError("exp(t) underflows to zero for some entry of t")
    return a
