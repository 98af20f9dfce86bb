"""scikit-learn style front end for concept mining."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import concepts as _concepts
from . import recommend as _recommend
from .linalg.decomposition import METHODS, svd
from .validation import check_count, check_tol, check_trust_matrix


class TrustConceptMiner(TransformerMixin, BaseEstimator):
    """Mine trust concepts from a complete trustee x trustor matrix.

    Rows of ``X`` are trustees and columns are trustors.  ``transform``
    maps trustee rating profiles onto concept coordinates, so
    ``fit_transform(M)`` returns ``V * lambdas``.

    Parameters
    ----------
    n_concepts : int or None
        Keep at most this many concepts.
    tol : float
        Drop concepts whose weight is at most this (on top of the automatic
        machine-precision threshold).
    method : {"golub-kahan", "jacobi", "power"}
    random_state : int
        Seed for the power method.
    max_iter : int
        Iteration cap for the power method.

    Attributes
    ----------
    decomposition_ : SpectralDecomposition
    concepts_ : list of Concept
    singular_values_ : ndarray of shape (n_concepts_,)
    components_ : ndarray of shape (n_concepts_, n_features_in_)
        Subject loadings, one row per concept.
    object_loadings_ : ndarray of shape (n_objects, n_concepts_)
    """

    def __init__(self, n_concepts=None, tol=0.0, method="golub-kahan", random_state=42,
                 max_iter=10000):
        self.n_concepts = n_concepts
        self.tol = tol
        self.method = method
        self.random_state = random_state
        self.max_iter = max_iter

    def fit(self, X, y=None):
        m = check_trust_matrix(X)
        tol = check_tol(self.tol)
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        rank = None if self.n_concepts is None else check_count(self.n_concepts, "n_concepts")
        d = svd(m, tol=tol, method=self.method, rank=rank, seed=self.random_state,
                max_iters=self.max_iter)
        self.decomposition_ = d
        self.concepts_ = _concepts.concept_spectrum(d, m)
        self.singular_values_ = d.lambdas.copy()
        self.components_ = d.u.T.copy()
        self.object_loadings_ = d.v.copy()
        self.n_features_in_ = m.shape[1]
        self.subject_ids_ = m.cols
        self.object_ids_ = m.rows
        return self

    def _check_X(self, X):
        X = np.asarray(getattr(X, "values", X), dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has shape {X.shape}; expected (n, {self.n_features_in_}) trustor columns"
            )
        return X

    def transform(self, X):
        check_is_fitted(self)
        return self._check_X(X) @ self.components_.T

    def inverse_transform(self, X):
        check_is_fitted(self)
        return np.asarray(X, dtype=float) @ self.components_

    @property
    def n_concepts_(self):
        check_is_fitted(self)
        return self.decomposition_.rank

    def qualified_matrices(self):
        check_is_fitted(self)
        return [_concepts.qualified_matrix(c) for c in self.concepts_]

    def similarity_matrix(self):
        check_is_fitted(self)
        return _concepts.similarity_preserving_matrix(self.decomposition_)

    def decompose_edge(self, subject, object):
        check_is_fitted(self)
        return _concepts.decompose_edge(self.decomposition_, subject, object)

    def rank_trustees(self, subject, concept):
        check_is_fitted(self)
        return _recommend.rank_trustees(self.decomposition_, subject, concept)

    def refine(self, subject, outlets, concept):
        check_is_fitted(self)
        return _recommend.refine_query(self.decomposition_, subject, outlets, concept)
