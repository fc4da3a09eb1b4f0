"""Centralised error types carrying machine codes and CLI exit statuses."""

from __future__ import annotations

from typing import Optional

from mubforge.types import JSONDict, JSONValue
from mubforge.utils.logging import get_run_id


class MubforgeError(Exception):
    """Base exception carrying a machine-friendly code and an exit status."""

    exit_code = 1
    code = "internal_error"

    def __init__(
        self,
        message: str,
        *,
        details: Optional[JSONValue] = None,
        code: str | None = None,
    ) -> None:
        """Capture the human message, optional structured details and override code."""
        super().__init__(message)
        self.message = message
        self.details: JSONValue = details if details is not None else {}
        self.code = code or self.__class__.code

    def to_payload(self) -> JSONDict:
        """Return the error document printed by the command line."""
        return {
            "error": {"code": self.code, "message": self.message},
            "details": self.details,
            "run_id": get_run_id(),
        }


class BadInput(MubforgeError):
    """Raised when user supplied parameters are invalid."""

    exit_code = 2
    code = "bad_input"


class NotPrime(BadInput):
    """Raised when a characteristic or prime dimension is not prime."""

    code = "not_prime"


class BoundExceeded(BadInput):
    """Raised when p^n exceeds the configured bound."""

    code = "bound_exceeded"


class IndexOutOfRange(BadInput):
    """Raised when an operator subscript lies outside 0..d-2."""

    code = "index_out_of_range"


class UnsupportedCharacteristic(BadInput):
    """Raised when a construction is only defined for odd characteristic."""

    code = "unsupported_characteristic"


class SingularBasis(BadInput):
    """Raised when proposed basis generators are linearly dependent over Z_p."""

    code = "singular_basis"


class NoPauliMatch(BadInput):
    """Raised when an operator is not a Pauli word over the given digit map."""

    code = "no_pauli_match"


class ArithmeticMismatch(MubforgeError):
    """Raised when incompatible values are combined."""

    exit_code = 2
    code = "arithmetic_mismatch"


class FieldMismatch(ArithmeticMismatch):
    """Raised when elements of different fields are combined."""

    code = "field_mismatch"


class ConductorMismatch(ArithmeticMismatch):
    """Raised when cyclotomic scalars of different conductors are combined."""

    code = "conductor_mismatch"


class ScaleParityError(ArithmeticMismatch):
    """Raised when a sum mixes odd and even powers of 1/sqrt(d) irreconcilably."""

    code = "scale_parity"


class DimensionMismatch(ArithmeticMismatch):
    """Raised when matrix or vector shapes do not line up."""

    code = "dimension_mismatch"


class ConstructionError(MubforgeError):
    """Raised when a construction fails its own exact verification."""

    code = "construction_error"


__all__ = [
    "MubforgeError",
    "BadInput",
    "NotPrime",
    "BoundExceeded",
    "IndexOutOfRange",
    "UnsupportedCharacteristic",
    "SingularBasis",
    "NoPauliMatch",
    "ArithmeticMismatch",
    "FieldMismatch",
    "ConductorMismatch",
    "ScaleParityError",
    "DimensionMismatch",
    "ConstructionError",
]
