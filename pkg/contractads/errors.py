"""
Contractads Errors - Exception hierarchy shared by every module.
"""

from typing import Optional


class ContractadError(Exception):
    """Base class for every error raised by the library."""


class GraphError(ContractadError):
    """Malformed graph, disconnected input or a vertex set that is not a tube."""


class GraphParseError(GraphError):
    """A graph or tree spec failed to parse."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class HostMismatchError(ContractadError):
    """Monomials or elements live on incompatible host graphs."""


class BoundExceededError(ContractadError):
    """A configured resource bound was exceeded."""

    def __init__(self, what: str, value: int, bound: int):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class CertificateError(ContractadError):
    """A Gröbner query falls outside the certified (vertices, weight) region."""


class UnsupportedError(ContractadError):
    """The request hits a documented limitation."""


class PresetError(ContractadError):
    """Unknown preset name or an invalid preset definition."""


class ChainComplexError(ContractadError):
    """A differential does not square to zero."""
