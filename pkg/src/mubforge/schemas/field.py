"""Documents describing a finite field and its elements."""

from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from mubforge.schemas.common import ScalarModel
from mubforge.services.finite_field import (
    FieldElement,
    FieldSpec,
    character,
    field_trace,
)


class FieldSpecModel(BaseModel):
    """GF(p^n) by characteristic, degree and constant-first modulus."""

    model_config = ConfigDict(extra="forbid")

    p: int = Field(..., ge=2, description="Characteristic.")
    n: int = Field(..., ge=1, description="Extension degree.")
    modulus: List[int] = Field(..., description="Primitive polynomial, constant term first.")

    @model_validator(mode="after")
    def modulus_is_monic(self) -> "FieldSpecModel":
        """Require ``n + 1`` coefficients with a leading 1."""
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        return self

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "FieldSpecModel":
        """Serialise a field description."""
        return cls(p=spec.p, n=spec.n, modulus=list(spec.modulus))


class ElementModel(BaseModel):
    """``{"power": k}`` for ``alpha^k`` or ``{"zero": true}``."""

    model_config = ConfigDict(extra="forbid")

    power: int | None = Field(default=None, ge=0, description="Exponent of alpha.")
    zero: bool | None = Field(default=None, description="Set for the zero element.")

    @model_validator(mode="after")
    def exactly_one(self) -> "ElementModel":
        """Either a power or the zero flag, never both."""
        if (self.power is None) == (not self.zero):
            raise ValueError("give either power or zero=true")
        return self

    @classmethod
    def from_element(cls, element: FieldElement) -> "ElementModel":
        """Serialise an element."""
        if element.power is None:
            return cls(zero=True)
        return cls(power=element.power)

    def to_element(self, spec: FieldSpec) -> FieldElement:
        """Resolve the element in ``spec``."""
        if self.zero:
            return spec.zero()
        return spec.power(self.power or 0)


class ElementRow(BaseModel):
    """One row of the element table of ``field-info``."""

    model_config = ConfigDict(extra="forbid")

    position: int = Field(..., ge=0, description="Index in the power-ordered basis.")
    element: ElementModel
    coeffs: List[int] = Field(..., description="Coefficients over 1, alpha, ..., alpha^(n-1).")
    trace: int = Field(..., ge=0, description="Field trace in Z_p.")
    character: ScalarModel


class FieldInfoDocument(BaseModel):
    """Output of ``mubforge field-info``."""

    model_config = ConfigDict(extra="forbid")

    field: FieldSpecModel
    elements: List[ElementRow]
    jacobi: List[int | None] = Field(
        ..., description="L(m) with 1 + alpha^m = alpha^L(m); null where the sum is zero."
    )

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "FieldInfoDocument":
        """Tabulate every element of ``spec``."""
        rows = [
            ElementRow(
                position=position,
                element=ElementModel.from_element(element),
                coeffs=list(element.coeffs),
                trace=field_trace(element),
                character=ScalarModel.from_scalar(character(element)),
            )
            for position, element in enumerate(spec.elements())
        ]
        return cls(field=FieldSpecModel.from_spec(spec), elements=rows, jacobi=list(spec.add_table))


__all__ = ["FieldSpecModel", "ElementModel", "ElementRow", "FieldInfoDocument"]
