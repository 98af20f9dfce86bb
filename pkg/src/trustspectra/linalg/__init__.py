"""Self-contained singular value decomposition routines."""
from .decomposition import (
    GOLUB_KAHAN,
    JACOBI,
    METHODS,
    POWER,
    SpectralDecomposition,
    canonicalize_signs,
    svd,
    truncate,
    warm_up,
)
from .householder import BidiagonalFactorization, bidiagonalize, house
from .power import power_svd, top_singular_pair

__all__ = [
    "GOLUB_KAHAN",
    "JACOBI",
    "METHODS",
    "POWER",
    "BidiagonalFactorization",
    "SpectralDecomposition",
    "bidiagonalize",
    "canonicalize_signs",
    "house",
    "power_svd",
    "svd",
    "top_singular_pair",
    "truncate",
    "warm_up",
]
