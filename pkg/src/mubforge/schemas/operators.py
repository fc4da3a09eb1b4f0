"""Documents for single operators and commuting classes."""

from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from mubforge.schemas.common import MatrixModel
from mubforge.services.matrix_core import CMatrix
from mubforge.services.weyl_operators import CommutingClass


class OperatorDocument(BaseModel):
    """A labelled operator such as ``Z_3`` or ``F``."""

    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=2, description="Dimension.")
    label: str = Field(..., description="Rendered operator label.")
    matrix: MatrixModel

    @classmethod
    def build(cls, label: str, matrix: CMatrix) -> "OperatorDocument":
        """Serialise ``matrix`` under ``label``."""
        return cls(d=matrix.dim, label=label, matrix=MatrixModel.from_matrix(matrix))


class ClassMember(BaseModel):
    """Member of a commuting class."""

    model_config = ConfigDict(extra="forbid")

    label: str
    matrix: MatrixModel


class ClassModel(BaseModel):
    """``{"class_id": "mixed:3", "members": [...]}``."""

    model_config = ConfigDict(extra="forbid")

    class_id: str = Field(..., description="diagonal, shift or mixed:<index>.")
    members: List[ClassMember]

    @classmethod
    def from_class(cls, value: CommutingClass) -> "ClassModel":
        """Serialise a commuting class."""
        return cls(
            class_id=str(value.class_id),
            members=[
                ClassMember(label=label.render(), matrix=MatrixModel.from_matrix(matrix))
                for label, matrix in value.members
            ],
        )


class ClassesDocument(BaseModel):
    """Output of ``mubforge classes``."""

    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=2)
    classes: List[ClassModel]


__all__ = ["OperatorDocument", "ClassMember", "ClassModel", "ClassesDocument"]
