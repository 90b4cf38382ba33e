"""Exception types shared across the library."""


class OntolabError(Exception):
    """Base class for all library-specific errors."""


class ZeroVectorError(OntolabError, ValueError):
    """Raised when a state is built from a (numerically) zero vector."""


class DimensionMismatchError(OntolabError, ValueError):
    """Raised when operands live in different dimensions."""


class EmptySupportError(OntolabError, ValueError):
    """Raised when a model's density has zero total mass."""


class ZeroProbabilityOutcomeError(OntolabError, RuntimeError):
    """Raised when conditioning on an outcome that never occurs within the sampling budget."""
