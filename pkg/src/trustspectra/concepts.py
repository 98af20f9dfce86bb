"""Trust concepts and qualified trust matrices.

Each retained singular triple is a concept: a trustor community (subject
ray), a trustee community (object ray) and a weight.  The rank-1 matrix
``v u^T`` of a concept is its qualified trust matrix, and every rating splits
into per-concept contributions ``lam * u[subject] * v[object]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import StaleDecompositionError, TrustDataError
from .linalg.decomposition import SpectralDecomposition
from .similarity import Ray
from .validation import check_trust_matrix

RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class Concept:
    """One singular triple; ``index`` counts from 1 in descending weight.

    ``subject_vector`` and ``object_vector`` keep the paired signs of the
    decomposition, so ``M @ subject_vector == weight * object_vector``.
    The rays forget that pairing.
    """

    index: int
    weight: float
    subject_vector: np.ndarray
    object_vector: np.ndarray
    degenerate: bool = False

    @property
    def subject_ray(self) -> Ray:
        return Ray(self.subject_vector)

    @property
    def object_ray(self) -> Ray:
        return Ray(self.object_vector)


@dataclass(frozen=True, eq=False)
class QualifiedMatrix:
    concept_index: int
    values: np.ndarray


def _check_ids(d, m):
    if tuple(m.rows) != d.row_ids or tuple(m.cols) != d.col_ids:
        raise StaleDecompositionError("decomposition ids do not match the matrix ids")


def concept_spectrum(d: SpectralDecomposition, m) -> list[Concept]:
    """List the concepts of ``m`` held in ``d``, largest weight first.

    Each triple is checked against ``m``: both ``M u - lam v`` and
    ``M^T v - lam u`` must stay within 1e-8 * lambda_1.
    """
    m = check_trust_matrix(m, allow_empty=True)
    _check_ids(d, m)
    if d.rank == 0:
        return []
    bound = RESIDUAL_RTOL * d.lambdas[0]
    out = []
    for k in range(d.rank):
        u, v, lam = d.u[:, k], d.v[:, k], float(d.lambdas[k])
        r1 = np.linalg.norm(m.values @ u - lam * v)
        r2 = np.linalg.norm(m.values.T @ v - lam * u)
        if max(r1, r2) > bound:
            raise StaleDecompositionError(
                f"concept {k + 1}: residual {max(r1, r2):.3e} exceeds {bound:.3e}"
            )
        out.append(Concept(k + 1, lam, u.copy(), v.copy(), d.degenerate[k]))
    return out


def concepts_of(d: SpectralDecomposition) -> list[Concept]:
    """Concepts of ``d`` without checking them against a source matrix."""
    return [
        Concept(k + 1, float(d.lambdas[k]), d.u[:, k].copy(), d.v[:, k].copy(), d.degenerate[k])
        for k in range(d.rank)
    ]


def qualified_matrix(c: Concept) -> QualifiedMatrix:
    """The rank-1 matrix ``v u^T`` attributing trust to a single concept."""
    return QualifiedMatrix(c.index, np.outer(c.object_vector, c.subject_vector))


def similarity_preserving_matrix(d: SpectralDecomposition) -> np.ndarray:
    """``F = V U^T``, which is also the sum of all qualified matrices."""
    return d.v @ d.u.T


def reconstruct(d: SpectralDecomposition) -> np.ndarray:
    """``sum_k lam_k F_k``; the zero matrix for an empty spectrum."""
    return d.reconstruct()


@dataclass(frozen=True)
class EdgeDecomposition:
    subject: object
    object: object
    total: float
    components: tuple  # (concept index, contribution) pairs
    degenerate: tuple = ()

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "object": self.object,
            "total": self.total,
            "components": [{"concept": k, "r": r} for k, r in self.components],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _index(ids, key, what):
    try:
        return ids.index(key)
    except ValueError:
        raise TrustDataError(f"unknown {what} {key!r}") from None


def decompose_edge(d: SpectralDecomposition, subject, object) -> EdgeDecomposition:
    """Split the reconstructed rating ``subject -> object`` by concept.

    ``total`` is the reconstructed cell; the components sum to it.
    For degenerate groups only the group sum is basis independent.
    """
    j = _index(d.col_ids, subject, "subject")
    i = _index(d.row_ids, object, "object")
    parts = d.lambdas * d.u[j, :] * d.v[i, :]
    total = float(reconstruct(d)[i, j]) if d.rank else 0.0
    return EdgeDecomposition(
        subject,
        object,
        total,
        tuple((k + 1, float(r)) for k, r in enumerate(parts)),
        tuple(k + 1 for k in range(d.rank) if d.degenerate[k]),
    )
