from typing import Optional


class IwasawaError(Exception):
    """Base class for every error raised by chevalley_iwasawa."""


class InvalidCartanTypeError(IwasawaError, ValueError):
    pass


class NotARootError(IwasawaError, ValueError):
    pass


class PrecisionError(IwasawaError, ValueError):
    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


class PrimeMismatchError(IwasawaError, ValueError):
    pass


class NonUnitError(IwasawaError, ValueError):
    pass


class NotInKernelError(IwasawaError, ValueError):
    """Raised for matrices outside the first congruence kernel G(1)."""

    def __init__(self, message: str, entry: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.entry = entry


class NotSpecialLinearError(IwasawaError, ValueError):
    pass


class UnsupportedTypeError(IwasawaError):
    pass


class ConsistencyError(IwasawaError):
    """An internal identity that must hold did not (wrong sign table, lost precision...)."""


class ParseError(IwasawaError, ValueError):
    pass


class InvalidPrimeError(IwasawaError, ValueError):
    pass
