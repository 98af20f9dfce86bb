"""Spectral decomposition M = V diag(lambdas) U^T of a trust matrix.

``u`` spans the subject (column) side and ``v`` the object (row) side, so a
rating decomposes as ``M[obj, subj] = sum_k lambdas[k] * v[obj, k] * u[subj, k]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConvergenceError
from ..validation import check_count, check_tol, check_trust_matrix
from . import _kernels
from .householder import bidiagonalize

GOLUB_KAHAN = "golub-kahan"
JACOBI = "jacobi"
POWER = "power"
METHODS = (GOLUB_KAHAN, JACOBI, POWER)

SWEEPS_PER_ENTRY = 100
DEGENERATE_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Singular triples of a trust matrix, largest first.

    Attributes
    ----------
    u : ndarray of shape (n_subjects, rank)
        Orthonormal subject loadings (right singular vectors).
    v : ndarray of shape (n_objects, rank)
        Orthonormal object loadings (left singular vectors).
    lambdas : ndarray of shape (rank,)
        Positive singular values, descending.
    tol : float
        Effective threshold used for the rank cut.
    row_ids, col_ids : tuple
        Object and subject ids of the source matrix.
    degenerate : tuple of bool
        True for columns whose singular value is shared (within 1e-6
        relative) with a neighbour; their vectors are only defined up to a
        rotation within the shared subspace.
    """

    u: np.ndarray
    v: np.ndarray
    lambdas: np.ndarray
    tol: float
    row_ids: tuple
    col_ids: tuple
    degenerate: tuple = field(default=None)

    def __post_init__(self):
        for name in ("u", "v", "lambdas"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        object.__setattr__(self, "col_ids", tuple(self.col_ids))
        if self.degenerate is None:
            object.__setattr__(self, "degenerate", degenerate_flags(self.lambdas))
        else:
            object.__setattr__(self, "degenerate", tuple(bool(x) for x in self.degenerate))
        r = self.lambdas.shape[0]
        if self.u.shape != (len(self.col_ids), r) or self.v.shape != (len(self.row_ids), r):
            raise ValueError(
                f"inconsistent shapes u{self.u.shape} v{self.v.shape} for rank {r} "
                f"and {len(self.row_ids)}x{len(self.col_ids)} ids"
            )

    @property
    def rank(self) -> int:
        return int(self.lambdas.shape[0])

    @property
    def shape(self):
        return len(self.row_ids), len(self.col_ids)

    def reconstruct(self) -> np.ndarray:
        return (self.v * self.lambdas) @ self.u.T

    def to_dict(self) -> dict:
        return {
            "row_ids": list(self.row_ids),
            "col_ids": list(self.col_ids),
            "lambdas": self.lambdas.tolist(),
            "u": self.u.tolist(),
            "v": self.v.tolist(),
            "tol": float(self.tol),
            "rank": self.rank,
        }

    def to_json(self, **kwargs) -> str:
        # json writes floats with repr, the shortest round-trip form
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc) -> "SpectralDecomposition":
        rows, cols = doc["row_ids"], doc["col_ids"]
        rank = int(doc["rank"])
        u = np.array(doc["u"], dtype=float).reshape(len(cols), rank)
        v = np.array(doc["v"], dtype=float).reshape(len(rows), rank)
        return cls(u, v, np.array(doc["lambdas"], dtype=float), float(doc["tol"]), rows, cols)

    @classmethod
    def from_json(cls, text) -> "SpectralDecomposition":
        return cls.from_dict(json.loads(text))


def degenerate_flags(lambdas, rtol=DEGENERATE_RTOL):
    lambdas = np.asarray(lambdas, dtype=float)
    flags = [False] * len(lambdas)
    for i in range(len(lambdas) - 1):
        if abs(lambdas[i] - lambdas[i + 1]) <= rtol * max(lambdas[i], lambdas[i + 1]):
            flags[i] = flags[i + 1] = True
    return tuple(flags)


def canonicalize_signs(u, v):
    """Flip column pairs so each column of ``u`` has a positive largest entry.

    Ties go to the lowest index.  ``v`` columns are flipped with ``u``.
    """
    u = np.array(u, dtype=float)
    v = np.array(v, dtype=float)
    if u.shape[1]:
        pivots = np.argmax(np.abs(u), axis=0)
        signs = np.where(u[pivots, np.arange(u.shape[1])] < 0, -1.0, 1.0)
        u *= signs
        v *= signs
    return u, v


def effective_tol(tol, shape, top):
    return max(tol, np.finfo(float).eps * max(shape) * top)


def _golub_kahan(a):
    """Thin SVD of a tall matrix: returns (w, s, z) with a = w diag(s) z^T."""
    f = bidiagonalize(a, full=False)
    n = a.shape[1]
    d = f.diagonal
    e = f.superdiagonal if n > 1 else np.zeros(0)
    lt = np.ascontiguousarray(f.left.T)
    rt = np.ascontiguousarray(f.right.T)
    max_sweeps = SWEEPS_PER_ENTRY * max(n - 1, 1)
    used = _kernels.bidiagonal_svd(d, e, lt, rt, max_sweeps)
    if used < 0:
        raise ConvergenceError(
            f"bidiagonal QR did not converge in {max_sweeps} sweeps",
            residual=float(np.abs(e).max(initial=0.0)),
        )
    neg = d < 0
    d[neg] = -d[neg]
    rt[neg] *= -1.0
    return lt.T, d, rt.T


def _jacobi(a, max_sweeps=60):
    at = np.array(a.T, order="C")
    vt = np.eye(a.shape[1])
    used = _kernels.one_sided_jacobi(at, vt, max_sweeps)
    if used < 0:
        g = at @ at.T
        off = g - np.diag(np.diag(g))
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {max_sweeps} sweeps",
            residual=float(np.abs(off).max()),
        )
    s = np.sqrt(np.einsum("ij,ij->i", at, at))
    w = np.zeros_like(at)
    nz = s > 0
    w[nz] = at[nz] / s[nz, None]
    return w.T, s, vt.T


def _assemble(w, s, z, m, tol, rank=None):
    """Sort, cut at the rank threshold, canonicalize and wrap."""
    order = np.argsort(-s, kind="stable")
    s, w, z = s[order], w[:, order], z[:, order]
    top = s[0] if s.size else 0.0
    cut = effective_tol(tol, m.shape, top)
    keep = int(np.count_nonzero(s > cut))
    if rank is not None:
        keep = min(keep, rank)
    u, v = canonicalize_signs(z[:, :keep], w[:, :keep])
    return SpectralDecomposition(u, v, s[:keep], cut, m.rows, m.cols)


def svd(m, tol=0.0, method=GOLUB_KAHAN, rank=None, *, seed=42, max_iters=10000):
    """Singular value decomposition ``M = V diag(lambdas) U^T``.

    Parameters
    ----------
    m : DenseTrustMatrix or array-like
        Trust matrix, objects by subjects.
    tol : float, default 0
        Singular values ``<= max(tol, eps * max(shape) * lambda_1)`` are
        dropped.
    method : {"golub-kahan", "jacobi", "power"}
        Householder bidiagonalization followed by implicit-shift QR sweeps,
        one-sided Jacobi rotations, or deflated power iteration.
    rank : int, optional
        Keep at most this many triples.
    seed, max_iters :
        Only used by the power method.

    Raises
    ------
    ConvergenceError
        If the iteration cap is hit.
    """
    m = check_trust_matrix(m)
    tol = check_tol(tol)
    if rank is not None:
        rank = check_count(rank, "rank")
    if method == POWER:
        from .power import power_svd

        return power_svd(m, tol=tol, rank=rank, seed=seed, max_iters=max_iters)
    a = m.values
    flipped = a.shape[0] < a.shape[1]
    if flipped:
        a = a.T
    if method not in (GOLUB_KAHAN, JACOBI):
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    # work at unit scale so squared quantities neither underflow nor overflow
    scale = float(np.abs(a).max(initial=0.0)) or 1.0
    a = a / scale
    w, s, z = _golub_kahan(a) if method == GOLUB_KAHAN else _jacobi(a)
    s = s * scale
    if flipped:
        w, z = z, w
    return _assemble(w, s, z, m, tol, rank)


def warm_up():
    """Compile the numba kernels (cached on disk after the first run)."""
    a = np.array([[2.0, 1.0], [1.0, 3.0], [0.0, 1.0]])
    _golub_kahan(a)
    _jacobi(a)


def truncate(d: SpectralDecomposition, k: int) -> SpectralDecomposition:
    """Keep the ``k`` leading triples."""
    k = check_count(k, "k")
    if k > d.rank:
        raise ValueError(f"cannot keep {k} triples of a rank-{d.rank} decomposition")
    return SpectralDecomposition(
        d.u[:, :k], d.v[:, :k], d.lambdas[:k], d.tol, d.row_ids, d.col_ids,
        d.degenerate[:k],
    )
