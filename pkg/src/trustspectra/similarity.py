"""Similarity networks of rays and the maps a trust matrix induces on them.

A community of trustors (or trustees) is a ray: a unit vector up to sign.
Two rays are as similar as the absolute inner product of their unit
representatives.  A similarity morphism never decreases similarity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .exceptions import KernelRayError
from .linalg.decomposition import SpectralDecomposition

RAY_EQ_TOL = 1e-9
VIOLATION_TOL = 1e-12


def canonical_sign(x):
    """Flip ``x`` so its largest-magnitude entry (lowest index on ties) is positive."""
    x = np.asarray(x, dtype=float)
    if x.size and x[np.argmax(np.abs(x))] < 0:
        return -x
    return x


@dataclass(frozen=True, eq=False)
class Ray:
    """A 1-dimensional subspace, held as its canonically signed unit vector."""

    direction: np.ndarray

    def __post_init__(self):
        x = np.array(self.direction, dtype=float).ravel()
        if not np.all(np.isfinite(x)):
            raise ValueError("ray direction must be finite")
        norm = np.linalg.norm(x)
        if norm == 0:
            raise KernelRayError("the zero vector spans no ray")
        x = canonical_sign(x / norm)
        x.setflags(write=False)
        object.__setattr__(self, "direction", x)

    @property
    def dim(self) -> int:
        return self.direction.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return other.dim == self.dim and ray_similarity(self, other) >= 1 - RAY_EQ_TOL

    __hash__ = None

    def __repr__(self):
        return f"Ray({np.array2string(self.direction, precision=4, separator=', ')})"


def _as_ray(p) -> Ray:
    return p if isinstance(p, Ray) else Ray(p)


def ray_similarity(p, q) -> float:
    """``|<p|q>|`` for unit representatives, clipped to [0, 1]."""
    p, q = _as_ray(p), _as_ray(q)
    if p.dim != q.dim:
        raise ValueError(f"rays of dimension {p.dim} and {q.dim} cannot be compared")
    return float(min(1.0, abs(p.direction @ q.direction)))


def _image_ray(matrix, p: Ray, what) -> Ray:
    if matrix.shape[1] != p.dim:
        raise ValueError(f"ray of dimension {p.dim} does not fit {matrix.shape[1]} columns")
    image = matrix @ p.direction
    # treat images at rounding level as zero
    if np.linalg.norm(image) <= 1e-14 * max(1.0, np.abs(matrix).max(initial=0.0)):
        raise KernelRayError(f"{p!r} lies in the kernel of {what}")
    return Ray(image)


def induced_map(m, p) -> Ray:
    """Ray of ``M p``: the map trustor communities -> trustee communities."""
    values = np.asarray(getattr(m, "values", m), dtype=float)
    return _image_ray(values, _as_ray(p), "the trust matrix")


def similarity_map_F(d: SpectralDecomposition, p) -> Ray:
    """Ray of ``V U^T p``, the similarity-preserving map of the decomposition."""
    p = _as_ray(p)
    if d.u.shape[0] != p.dim:
        raise ValueError(f"ray of dimension {p.dim} does not fit {d.u.shape[0]} subjects")
    coords = d.u.T @ p.direction
    if np.linalg.norm(coords) <= 1e-14:
        raise KernelRayError(f"{p!r} lies in the kernel of U^T")
    return Ray(d.v @ coords)


def similarity_preserving_operator(d: SpectralDecomposition) -> np.ndarray:
    return d.v @ d.u.T


@dataclass(frozen=True)
class ViolationRecord:
    pair: int
    s_before: float
    s_after: float
    violated: bool

    def to_json(self) -> str:
        return json.dumps(
            {"pair": self.pair, "s_before": self.s_before, "s_after": self.s_after,
             "violated": self.violated}
        )


def morphism_violation_report(m, pairs) -> list[ViolationRecord]:
    """Compare each pair's similarity before and after the induced map.

    ``m`` is any linear map given as a matrix (a DenseTrustMatrix, an array,
    or the operator of :func:`similarity_preserving_operator`).  A pair is
    violated when similarity drops by more than 1e-12.
    """
    out = []
    for i, (p, q) in enumerate(pairs):
        p, q = _as_ray(p), _as_ray(q)
        before = ray_similarity(p, q)
        after = ray_similarity(induced_map(m, p), induced_map(m, q))
        out.append(ViolationRecord(i, before, after, after < before - VIOLATION_TOL))
    return out


def report_to_jsonl(report) -> str:
    return "".join(rec.to_json() + "\n" for rec in report)


# -- finite similarity networks ----------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteSimilarityNetwork:
    elements: tuple
    sim: np.ndarray

    def __post_init__(self):
        elements = tuple(self.elements)
        sim = np.array(self.sim, dtype=float)
        n = len(elements)
        if len(set(elements)) != n:
            raise ValueError("network elements must be distinct")
        if sim.shape != (n, n):
            raise ValueError(f"similarity matrix shape {sim.shape} does not match {n} elements")
        if not np.allclose(np.diag(sim), 1.0, rtol=0, atol=1e-12):
            raise ValueError("every element must be fully similar to itself")
        if not np.allclose(sim, sim.T, rtol=0, atol=1e-12):
            raise ValueError("similarity must be symmetric")
        if sim.min(initial=0) < -1e-12 or sim.max(initial=0) > 1 + 1e-12:
            raise ValueError("similarities must lie in [0, 1]")
        sim.setflags(write=False)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "sim", sim)

    @classmethod
    def of_rays(cls, rays: Mapping[Hashable, Ray]) -> "FiniteSimilarityNetwork":
        ids = list(rays)
        vecs = np.array([_as_ray(rays[k]).direction for k in ids])
        sim = np.clip(np.abs(vecs @ vecs.T), 0.0, 1.0)
        np.fill_diagonal(sim, 1.0)
        return cls(tuple(ids), sim)

    def s(self, x, y) -> float:
        return float(self.sim[self.elements.index(x), self.elements.index(y)])


@dataclass(frozen=True)
class ClusteringPair:
    """``section`` picks a representative in A for each cluster in C;
    ``retraction`` sends every element of A to its cluster."""

    section: Mapping
    retraction: Mapping


@dataclass(frozen=True)
class ClusteringReport:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self):
        return self.ok


def check_clustering(net_a: FiniteSimilarityNetwork, net_c: FiniteSimilarityNetwork,
                     c: ClusteringPair, atol: float = 1e-12) -> ClusteringReport:
    """Check the clustering axioms for ``c: A ->> C``; report the first failure."""
    for x in net_c.elements:
        if x not in c.section:
            return ClusteringReport(False, f"section undefined on {x!r}")
        if c.section[x] not in net_a.elements:
            return ClusteringReport(False, f"section sends {x!r} outside A")
    for z in net_a.elements:
        if z not in c.retraction:
            return ClusteringReport(False, f"retraction undefined on {z!r}")
        if c.retraction[z] not in net_c.elements:
            return ClusteringReport(False, f"retraction sends {z!r} outside C")
    for x in net_c.elements:
        if c.retraction[c.section[x]] != x:
            return ClusteringReport(False, f"retraction(section({x!r})) != {x!r}")
    for x in net_c.elements:
        for y in net_c.elements:
            sc, sa = net_c.s(x, y), net_a.s(c.section[x], c.section[y])
            if abs(sc - sa) > atol:
                return ClusteringReport(
                    False, f"section: s_C({x!r},{y!r})={sc:.6g} != s_A={sa:.6g}"
                )
    for x in net_a.elements:
        for y in net_a.elements:
            sa, sc = net_a.s(x, y), net_c.s(c.retraction[x], c.retraction[y])
            if sa > sc + atol:
                return ClusteringReport(
                    False, f"retraction: s_A({x!r},{y!r})={sa:.6g} > s_C={sc:.6g}"
                )
    return ClusteringReport(True)


def nearest_concept_clustering(d: SpectralDecomposition, rays: Sequence[Ray]):
    """Cluster subject rays by their dominant concept coordinate.

    A holds the concept rays (columns of U) followed by ``rays``; C holds
    one point per concept.  Returns ``(net_a, net_c, clustering)``.
    """
    concept_ids = [f"concept{k + 1}" for k in range(d.rank)]
    a_rays = {f"u{k + 1}": Ray(d.u[:, k]) for k in range(d.rank)}
    for i, r in enumerate(rays):
        a_rays[f"x{i}"] = _as_ray(r)
    net_a = FiniteSimilarityNetwork.of_rays(a_rays)
    net_c = FiniteSimilarityNetwork.of_rays(
        {cid: Ray(d.u[:, k]) for k, cid in enumerate(concept_ids)}
    )
    retraction = {}
    for key, r in a_rays.items():
        retraction[key] = concept_ids[int(np.argmax(np.abs(d.u.T @ r.direction)))]
    section = {cid: f"u{k + 1}" for k, cid in enumerate(concept_ids)}
    return net_a, net_c, ClusteringPair(section, retraction)
