"""Exception hierarchy shared by all genli modules."""


class GenliError(Exception):
    """Base class for every error raised by genli."""


class DomainError(GenliError, ValueError):
    """Argument outside the domain an operation is defined on."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class PrecisionError(GenliError, ArithmeticError):
    """The internal error bound cannot be brought under the requested target."""


class QuadratureError(PrecisionError):
    """A quadrature rule did not converge within its node budget."""


class ZeroOfXiError(DomainError):
    """xi vanishes at (or too close to) the evaluation point or its Cauchy circle."""


class RadiusTooLargeError(DomainError):
    """Cauchy circle would reach a zero of xi."""


class BoundaryZeroError(DomainError):
    """A zero or pole sits on a contour; shift the rectangle slightly."""


class CatalogError(GenliError, ValueError):
    """Malformed or inconsistent zero table."""

    def __init__(self, message: str, line: int | None = None, content: str | None = None):
        self.line = line
        self.content = content
        if line is not None:
            message = f"line {line}: {message}"
            if content is not None:
                message += f" ({content!r})"
        super().__init__(message)


class ParseError(CatalogError):
    pass


class OrderingError(CatalogError):
    pass


class EmptyCatalogError(CatalogError):
    pass


class MultisetError(GenliError, ValueError):
    """Multiset violates a hypothesis (condition (i), malformed file, ...)."""
