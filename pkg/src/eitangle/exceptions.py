class EitangleError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(EitangleError, ValueError):
    """Operands live on differently truncated spaces."""


class ContractError(EitangleError, ValueError):
    """An input violates a documented precondition (e.g. not normalized)."""


class DomainError(EitangleError, ValueError):
    """A parameter is outside the domain where the quantity is defined."""


class DegeneracyError(EitangleError, ValueError):
    """Components of a two-term superposition are linearly dependent."""


class RegimeError(EitangleError, ValueError):
    """Parameters are outside the regime the adiabatic-elimination check needs."""


class ResourceError(EitangleError, RuntimeError):
    """A charge sector exceeds the configured size limit."""


class TruncationWarning(UserWarning):
    """Probability mass above the Fock cutoff exceeds the tail tolerance."""
