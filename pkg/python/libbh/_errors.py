from typing import Optional


class BHError(Exception):
    """Base class for errors raised by libbh"""

    pass


class DomainError(BHError, ValueError):
    """An argument is outside the domain of an operation

    Examples: ``m < 2`` for a Bohnenblust-Hille constant, ``p`` outside
    ``(1, 2]`` for a Khinchine constant, or a constant family used with a scalar
    field it is not valid for.
    """

    pass


class ResourceError(BHError):
    """A configured computational budget would be exceeded"""

    pass


class InternalError(BHError):
    """A numerical procedure failed in a way that should not occur"""

    pass


class ParsingError(BHError, ValueError):
    """Malformed configuration or form data"""

    pass


class HypothesisError(BHError):
    """An empirically checked hypothesis is violated on the scanned range

    Attributes
    ----------
    witness: Optional[int]
        The index ``n`` at which the hypothesis fails.
    value: Optional[float]
        The offending value, usually :math:`D_n`.
    """

    def __init__(
        self,
        message: str,
        witness: Optional[int] = None,
        value: Optional[float] = None,
    ):
        super().__init__(message)
        self.witness = witness
        self.value = value


def require_int(value, minimum: int, name: str, caller: str) -> int:
    """Validate an integer argument, raising :class:`DomainError` otherwise"""
    try:
        is_int = not isinstance(value, bool) and int(value) == value
    except (TypeError, ValueError):
        is_int = False
    if not is_int:
        raise DomainError(f"Error in {caller}: {name}={value} is not an integer")
    value = int(value)
    if value < minimum:
        raise DomainError(f"Error in {caller}: {name}={value} < {minimum}")
    return value
