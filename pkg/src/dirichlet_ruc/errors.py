"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(ValueError):
    """An element does not conform to the space it is used with."""


class ArityError(ValueError):
    """Too few torus coordinates supplied for a monomial or polynomial."""


class OverflowLimitError(OverflowError):
    """An integer result would exceed the supported range (2**63 - 1)."""


class ResourceError(RuntimeError):
    """A computation would exceed the configured memory/grid budget."""


class UndefinedRatioError(ZeroDivisionError):
    """A ratio whose denominator is zero (degenerate instance)."""


class ValidationError(ValueError):
    """A problem file failed validation.

    `pointer` locates the offending node as a JSON-pointer-style path.
    """

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}" if pointer else message)
        self.pointer = pointer
        self.message = message
