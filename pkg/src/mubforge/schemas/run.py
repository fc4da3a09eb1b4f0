"""Validated configuration of one command-line run."""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from mubforge.config import get_settings
from mubforge.services.finite_field import ensure_dimension
from mubforge.services.weyl_operators import ClassId

Command = Literal["field-info", "operators", "classes", "mubs", "verify", "decompose"]
OperatorName = Literal["Z", "X", "XZ", "F", "V"]


class RunConfig(BaseModel):
    """Everything a command needs; built from parsed flags.

    ``p`` and ``p^n`` are checked against primality and ``MUBFORGE_MAX_D``
    while the model is validated, so an invalid field surfaces as
    :class:`~mubforge.utils.errors.NotPrime` or
    :class:`~mubforge.utils.errors.BoundExceeded` rather than a pydantic error.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    command: Command
    p: int = Field(..., description="Field characteristic.")
    n: int = Field(1, description="Extension degree.")
    basis: Literal["polynomial", "normal"] = Field(
        "polynomial", description="Field basis used by decompose."
    )
    format: Literal["json", "text"] = "json"
    out: Optional[Path] = Field(default=None, description="Output file; stdout when omitted.")
    class_id: Optional[str] = Field(
        default=None, alias="class", description="Restrict classes or mubs to one class."
    )
    operator: Optional[OperatorName] = Field(
        default=None, description="Operator printed by the operators command."
    )
    q: Optional[int] = Field(default=None, ge=0, description="First operator subscript.")
    r: Optional[int] = Field(default=None, ge=0, description="Second operator subscript.")

    @field_validator("class_id")
    @classmethod
    def class_id_parses(cls, value: Optional[str]) -> Optional[str]:
        """Normalise class identifiers such as ``Mixed:3``."""
        if value is None:
            return None
        return str(ClassId.parse(value))

    @model_validator(mode="after")
    def check_field_and_command(self) -> "RunConfig":
        """Validate the field and the flags the command needs."""
        ensure_dimension(self.p, self.n, bound=get_settings().max_dimension)
        if self.command == "operators" and self.operator is None:
            raise ValueError("operators needs --operator (Z, X, XZ, F or V)")
        return self

    @property
    def d(self) -> int:
        """Dimension ``p^n``."""
        return self.p**self.n


__all__ = ["Command", "OperatorName", "RunConfig"]
