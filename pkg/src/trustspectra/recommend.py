"""Per-concept trustee recommendations."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .concepts import _index
from .exceptions import TrustDataError
from .linalg.decomposition import SpectralDecomposition


@dataclass(frozen=True)
class RankedRecommendation:
    """Trustees ranked for one subject under one concept.

    ``negative_affinity`` is set when the subject loads negatively on the
    concept: the ranking then runs against the concept's strongest
    providers.
    """

    subject: object
    concept_index: int
    ranking: tuple  # (object id, qualified rating) pairs, best first
    negative_affinity: bool = False

    @property
    def best(self):
        return self.ranking[0][0]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "concept": self.concept_index,
            "negative_affinity": self.negative_affinity,
            "ranking": [{"object": o, "rating": r} for o, r in self.ranking],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _concept_column(d, concept):
    if isinstance(concept, bool) or not isinstance(concept, int):
        raise TrustDataError(f"concept index must be an integer, got {concept!r}")
    if not 1 <= concept <= d.rank:
        raise TrustDataError(f"concept {concept} not retained (rank {d.rank})")
    return concept - 1


def qualified_ratings(d: SpectralDecomposition, subject, concept: int) -> list:
    """``lam * U[subject] * V[object]`` for every object, in source order."""
    k = _concept_column(d, concept)
    j = _index(d.col_ids, subject, "subject")
    scale = d.lambdas[k] * d.u[j, k]
    return [(o, float(scale * d.v[i, k])) for i, o in enumerate(d.row_ids)]


def rank_trustees(d: SpectralDecomposition, subject, concept: int) -> RankedRecommendation:
    """Rank all trustees for ``subject`` by their rating under ``concept``.

    Ties keep the source row order.
    """
    ratings = qualified_ratings(d, subject, concept)
    ranking = sorted(ratings, key=lambda item: -item[1])
    j = d.col_ids.index(subject)
    return RankedRecommendation(
        subject, concept, tuple(ranking), bool(d.u[j, concept - 1] < 0)
    )


@dataclass(frozen=True)
class RefinedChoice:
    subject: object
    concept_index: int
    best: object
    ratings: tuple

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "concept": self.concept_index,
            "best": self.best,
            "ratings": [{"object": o, "rating": r} for o, r in self.ratings],
        }


def refine_query(d: SpectralDecomposition, subject, outlets, concept: int) -> RefinedChoice:
    """Pick the best of ``outlets`` for ``subject`` under ``concept``."""
    outlets = list(outlets)
    if not outlets:
        raise TrustDataError("refine_query needs at least one outlet")
    for o in outlets:
        if o not in d.row_ids:
            raise TrustDataError(f"unknown outlet {o!r}")
    ranked = rank_trustees(d, subject, concept)
    wanted = set(outlets)
    kept = tuple((o, r) for o, r in ranked.ranking if o in wanted)
    return RefinedChoice(subject, concept, kept[0][0], kept)
