"""Alternating power iteration (the hubs/authorities scheme) for singular pairs."""
from __future__ import annotations

import numpy as np

from ..exceptions import ConvergenceError, TrustDataError
from ..validation import check_count, check_trust_matrix


def _iterate(a, u, max_iters, eps, basis_u=None):
    """Run u <- A^T v / |A^T v|, v <- A u / |A u| until u settles.

    ``basis_u`` (orthonormal columns) is projected out of every iterate,
    which restricts the iteration to the orthogonal complement.
    """
    def project(x):
        if basis_u is not None and basis_u.shape[1]:
            x = x - basis_u @ (basis_u.T @ x)
        return x

    u = project(u)
    nu = np.linalg.norm(u)
    if nu == 0:
        raise ConvergenceError("start vector lies in the excluded subspace", residual=0.0)
    u = u / nu
    delta = np.inf
    for _ in range(max_iters):
        mu = a @ u
        norm = np.linalg.norm(mu)
        if norm == 0:
            return 0.0, u, np.zeros(a.shape[0])
        v = mu / norm
        nxt = project(a.T @ v)
        nn = np.linalg.norm(nxt)
        if nn == 0:
            return 0.0, u, v
        nxt /= nn
        delta = np.linalg.norm(nxt - u)
        u = nxt
        if delta < eps:
            mu = a @ u
            lam = float(np.linalg.norm(mu))
            return lam, u, mu / lam if lam else v
    raise ConvergenceError(f"power iteration did not converge in {max_iters} iterations", delta)


def top_singular_pair(m, max_iters=10000, eps=1e-12, seed=42):
    """Leading singular value and vectors by alternating power iteration.

    Starts from a seeded Gaussian vector and stops once successive subject
    vectors differ by less than ``eps``.  Returns ``(lam, u, v)`` with
    ``M u = lam v``; ``u`` lives on the subject side, ``v`` on the object side.
    """
    m = check_trust_matrix(m)
    max_iters = check_count(max_iters, "max_iters")
    a = m.values
    if not np.any(a):
        raise TrustDataError("top singular pair of a zero matrix is undefined")
    rng = np.random.default_rng(seed)
    lam, u, v = _iterate(a, rng.standard_normal(a.shape[1]), max_iters, eps)
    return lam, u, v


def power_svd(m, tol=0.0, rank=None, seed=42, max_iters=10000, eps=1e-12):
    """Deflated power iteration: one triple at a time, largest first.

    Slow when neighbouring singular values are close; meant for a handful
    of leading concepts on well separated spectra.
    """
    from .decomposition import SpectralDecomposition, canonicalize_signs, effective_tol

    m = check_trust_matrix(m)
    a = m.values
    limit = min(a.shape) if rank is None else min(rank, *a.shape)
    rng = np.random.default_rng(seed)
    us, vs, lams = [], [], []
    cut = tol
    for _ in range(limit):
        basis = np.column_stack(us) if us else None
        start = rng.standard_normal(a.shape[1])
        lam, u, v = _iterate(a, start, max_iters, eps, basis)
        if not lams:
            cut = effective_tol(tol, a.shape, lam)
        if lam <= cut:
            break
        us.append(u)
        vs.append(v)
        lams.append(lam)
    r = len(lams)
    u = np.column_stack(us) if r else np.zeros((a.shape[1], 0))
    v = np.column_stack(vs) if r else np.zeros((a.shape[0], 0))
    u, v = canonicalize_signs(u, v)
    return SpectralDecomposition(u, v, np.array(lams), cut, m.rows, m.cols)
