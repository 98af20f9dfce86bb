"""Input validation helpers shared by the functional API and the estimator."""
import numbers

import numpy as np

from .exceptions import TrustDataError
from .model import DenseTrustMatrix


def check_trust_matrix(X, allow_empty=False) -> DenseTrustMatrix:
    """Coerce ``X`` to a DenseTrustMatrix.

    Accepts a DenseTrustMatrix (returned as is), a pandas DataFrame (index
    and columns become ids) or any 2-d array-like (positional ids).
    """
    if isinstance(X, DenseTrustMatrix):
        m = X
    elif hasattr(X, "to_numpy") and hasattr(X, "index") and hasattr(X, "columns"):
        m = DenseTrustMatrix(tuple(X.index), tuple(X.columns), X.to_numpy(dtype=float))
    else:
        try:
            values = np.asarray(X, dtype=float)
        except (TypeError, ValueError) as exc:
            raise TrustDataError(f"cannot read matrix: {exc}") from None
        m = DenseTrustMatrix.from_array(values)
    if not allow_empty and 0 in m.shape:
        raise TrustDataError(f"empty matrix of shape {m.shape}")
    return m


def check_tol(tol) -> float:
    if not isinstance(tol, numbers.Real) or not np.isfinite(tol) or tol < 0:
        raise ValueError(f"tol must be a finite number >= 0, got {tol!r}")
    return float(tol)


def check_count(value, name, minimum=1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_vector(x, dim, name="vector") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-d, got shape {x.shape}")
    if x.shape[0] != dim:
        raise ValueError(f"{name} has dimension {x.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x
