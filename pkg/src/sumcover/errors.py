class SumcoverError(Exception):
    """Base class for all library errors."""


class DomainError(SumcoverError, ValueError):
    """An input violates a precondition (bad range, non-prime, ...)."""


class CapacityError(SumcoverError, RuntimeError):
    """An exact mode was asked to enumerate beyond its configured gate."""
