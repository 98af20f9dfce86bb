"""Householder bidiagonalization: A = left @ bidiag @ right.T"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import TrustDataError


def house(x):
    """Householder vector for ``x``.

    Returns ``(v, beta)`` with ``v[0] == 1`` such that
    ``(I - beta * v v^T) x = alpha * e_1``.  ``beta == 0`` when ``x`` is
    already a multiple of ``e_1``.
    """
    x = np.asarray(x, dtype=float)
    v = x.copy()
    v[0] = 1.0
    if x.shape[0] == 1:
        return v, 0.0
    sigma = float(x[1:] @ x[1:])
    if sigma == 0.0:
        return v, 0.0
    mu = np.sqrt(x[0] * x[0] + sigma)
    # pick the sign that avoids cancellation in x0 - alpha
    v0 = x[0] - mu if x[0] <= 0 else -sigma / (x[0] + mu)
    beta = 2.0 * v0 * v0 / (sigma + v0 * v0)
    v[1:] = x[1:] / v0
    return v, beta


@dataclass(frozen=True)
class BidiagonalFactorization:
    left: np.ndarray
    bidiag: np.ndarray
    right: np.ndarray

    @property
    def diagonal(self):
        return np.diag(self.bidiag).copy()

    @property
    def superdiagonal(self):
        return np.diag(self.bidiag, 1).copy()

    def reconstruct(self):
        return self.left @ self.bidiag @ self.right.T


def _householder_sweep(a):
    """Reduce ``a`` in place; return the left and right reflector lists."""
    m, n = a.shape
    lefts, rights = [], []
    for j in range(min(m, n)):
        v, beta = house(a[j:, j])
        if beta:
            a[j:, j:] -= beta * np.outer(v, v @ a[j:, j:])
        a[j + 1 :, j] = 0.0
        lefts.append((v, beta))
        if j < n - 2:
            v, beta = house(a[j, j + 1 :])
            if beta:
                a[j:, j + 1 :] -= beta * np.outer(a[j:, j + 1 :] @ v, v)
            a[j, j + 2 :] = 0.0
            rights.append((v, beta))
    return lefts, rights


def _accumulate(reflectors, size, ncols, offset):
    """Form the first ``ncols`` columns of H_0 H_1 ... H_k (applied backwards)."""
    q = np.eye(size, ncols)
    for j in range(len(reflectors) - 1, -1, -1):
        v, beta = reflectors[j]
        if beta:
            s = j + offset
            q[s:, :] -= beta * np.outer(v, v @ q[s:, :])
    return q


def bidiagonalize(m, full=True):
    """Householder bidiagonalization of a trust matrix.

    Reflections are applied alternately from the left (zeroing a column
    below the diagonal) and from the right (zeroing a row right of the
    superdiagonal).  The result is upper bidiagonal.

    Parameters
    ----------
    m : DenseTrustMatrix or array-like
    full : bool
        Return square orthogonal ``left`` and ``right``.  With ``full=False``
        and a tall input, ``left`` is thin (``rows x cols``) and ``bidiag``
        is the square top block.
    """
    a = np.array(getattr(m, "values", m), dtype=float)
    if a.ndim != 2 or 0 in a.shape:
        raise TrustDataError(f"cannot bidiagonalize an empty matrix of shape {a.shape}")
    rows, cols = a.shape
    lefts, rights = _householder_sweep(a)
    if full or rows < cols:
        left = _accumulate(lefts, rows, rows, 0)
        bidiag = a
    else:
        left = _accumulate(lefts, rows, cols, 0)
        bidiag = a[:cols, :]
    right = _accumulate(rights, cols, cols, 1)
    return BidiagonalFactorization(left, bidiag, right)
