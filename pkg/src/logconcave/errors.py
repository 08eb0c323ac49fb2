"""Exception hierarchy shared by all modules."""


class LogConcaveError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(LogConcaveError, ValueError):
    """Point or object has the wrong dimension."""


class NotLogConcaveError(LogConcaveError, ValueError):
    """Log-values violate concavity or tail-slope constraints."""


class NonIntegrableError(LogConcaveError, ValueError):
    """exp(phi) has infinite mass."""


class DivergenceError(LogConcaveError, ArithmeticError):
    """An exponentially tilted integral is infinite (theta outside the MGF domain)."""


class QuadratureError(LogConcaveError, RuntimeError):
    """Numerical integration did not reach the requested tolerance."""


class DegenerateSimplexError(LogConcaveError, ValueError):
    """Simplex vertices are affinely dependent."""


class PreconditionError(LogConcaveError, ValueError):
    """A lemma's hypothesis does not hold for the given inputs."""


class VerificationError(LogConcaveError, RuntimeError):
    """A computed constant failed its own verification."""


class InfeasibleError(LogConcaveError, RuntimeError):
    """No log-concave density was found inside the KS ball."""
