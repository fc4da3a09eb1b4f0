"""Documents for families of mutually unbiased bases."""

from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from mubforge.schemas.common import ScalarModel, vector_entries
from mubforge.services.mub_builder import MubFamily, OverlapViolation


class BasisModel(BaseModel):
    """One basis: the class it diagonalises and its vectors."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    class_id: str = Field(..., alias="class", description="Provenance class identifier.")
    ordering: str = Field(..., description="How the vectors are ordered.")
    vectors: List[List[ScalarModel]]


class MubFamilyDocument(BaseModel):
    """``{"d": 4, "route": "even_joint_diag", "bases": [...]}``."""

    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=2)
    route: str = Field(..., description="prime_fv, odd_composite_vf or even_joint_diag.")
    bases: List[BasisModel]

    @classmethod
    def from_family(cls, family: MubFamily) -> "MubFamilyDocument":
        """Serialise a family."""
        return cls(
            d=family.dim,
            route=family.route.value,
            bases=[
                BasisModel(
                    class_id=str(basis.provenance),
                    ordering=basis.ordering_tag,
                    vectors=[vector_entries(v) for v in basis.vectors],
                )
                for basis in family.bases
            ],
        )


class OverlapViolationModel(BaseModel):
    """A pair of vectors with the wrong overlap."""

    model_config = ConfigDict(extra="forbid")

    basis_a: int = Field(..., ge=0)
    vec_i: int = Field(..., ge=0)
    basis_b: int = Field(..., ge=0)
    vec_j: int = Field(..., ge=0)
    overlap_sq: ScalarModel

    @classmethod
    def from_violation(cls, value: OverlapViolation) -> "OverlapViolationModel":
        """Serialise a violation."""
        return cls(
            basis_a=value.basis_a,
            vec_i=value.vec_i,
            basis_b=value.basis_b,
            vec_j=value.vec_j,
            overlap_sq=ScalarModel.from_scalar(value.overlap_sq),
        )


__all__ = ["BasisModel", "MubFamilyDocument", "OverlapViolationModel"]
