"""Schema helpers shared by every emitted document."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from mubforge.services.cyclotomic import (
    CycloScalar,
    from_significant,
    render,
    significant_coeffs,
)
from mubforge.services.matrix_core import CMatrix, CVector, from_rows
from mubforge.types import JSONValue


class ScalarModel(BaseModel):
    """Exact cyclotomic value ``(sum coeffs[j] zeta_m^j) / sqrt(d)^k``.

    ``coeffs`` holds ``[numerator, denominator]`` string pairs for the
    coefficients that can be nonzero in canonical form; ``text`` is the
    symbolic rendering and is ignored when reading a document back.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    m: int = Field(..., ge=3, description="Conductor of the cyclotomic ring (p, or 4 for p = 2).")
    k: int = Field(..., ge=0, le=1, description="Power of 1/sqrt(d) after canonicalisation.")
    coeffs: List[Tuple[str, str]] = Field(
        ..., description="Rational coefficients as [numerator, denominator] strings."
    )
    text: str | None = Field(default=None, description="Rendering with ω, ω̄, ±i symbols.")

    @field_validator("coeffs")
    @classmethod
    def denominators_positive(cls, value: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
        """Reject zero or negative denominators and non-integer strings."""
        for numerator, denominator in value:
            int(numerator)
            if int(denominator) <= 0:
                raise ValueError("denominators must be positive integers")
        return value

    @classmethod
    def from_scalar(cls, value: CycloScalar) -> "ScalarModel":
        """Serialise a scalar."""
        return cls(
            m=value.m,
            k=value.scale_k,
            coeffs=[(str(c.numerator), str(c.denominator)) for c in significant_coeffs(value)],
            text=render(value),
        )

    def to_scalar(self, d: int) -> CycloScalar:
        """Rebuild the scalar against ambient dimension ``d``."""
        fractions = [Fraction(int(num), int(den)) for num, den in self.coeffs]
        return from_significant(self.m, d, fractions, self.k)


class MatrixModel(BaseModel):
    """Square matrix of exact scalars, row-major."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(..., ge=1, description="Number of rows and columns.")
    entries: List[List[ScalarModel]] = Field(..., description="Rows of exact entries.")

    @classmethod
    def from_matrix(cls, matrix: CMatrix) -> "MatrixModel":
        """Serialise a matrix."""
        return cls(
            dim=matrix.dim,
            entries=[[ScalarModel.from_scalar(x) for x in row] for row in matrix.entries],
        )

    def to_matrix(self, d: int) -> CMatrix:
        """Rebuild the matrix against ambient dimension ``d``."""
        return from_rows([[x.to_scalar(d) for x in row] for row in self.entries])


def vector_entries(vector: CVector) -> List[ScalarModel]:
    """Serialise the entries of a vector."""
    return [ScalarModel.from_scalar(x) for x in vector.entries]


def vector_from_entries(entries: List[ScalarModel], d: int) -> CVector:
    """Rebuild a vector against ambient dimension ``d``."""
    return CVector(len(entries), tuple(x.to_scalar(d) for x in entries))


class ErrorBody(BaseModel):
    """Code and message of a failed run."""

    model_config = ConfigDict(extra="forbid")

    code: str = Field(..., description="Stable machine code of the failure.")
    message: str = Field(..., description="Human readable description.")


class ErrorPayload(BaseModel):
    """Error document written to stderr by the command line."""

    model_config = ConfigDict(extra="forbid")

    error: ErrorBody
    details: JSONValue = Field(default_factory=dict, description="Structured context.")
    run_id: str = Field(..., description="Identifier of the run that failed.")


__all__ = [
    "ScalarModel",
    "MatrixModel",
    "vector_entries",
    "vector_from_entries",
    "ErrorBody",
    "ErrorPayload",
]
