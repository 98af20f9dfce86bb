"""Exception hierarchy shared across the package."""


class TrustSpectraError(Exception):
    """Base class for all errors raised by trustspectra."""


class TrustDataError(TrustSpectraError, ValueError):
    """Malformed, incomplete or inconsistent trust data."""


class MissingCellError(TrustDataError):
    """A requested cell of a score table has no rating."""

    def __init__(self, obj, subj):
        self.obj = obj
        self.subj = subj
        super().__init__(f"cell ({obj},{subj}) missing")


class KernelRayError(TrustSpectraError, ValueError):
    """A ray is mapped to the zero vector, so its image ray is undefined."""


class ConvergenceError(TrustSpectraError, RuntimeError):
    """An iterative method hit its iteration cap."""

    def __init__(self, message, residual=float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class StaleDecompositionError(TrustSpectraError):
    """A decomposition does not match the matrix it is paired with."""
