"""Documents for Pauli words and decomposition tables."""

from __future__ import annotations

from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field

from mubforge.schemas.common import ScalarModel
from mubforge.services.tensor_decomposition import DecompositionTable, DigitMap, PauliWord


class PauliFactorModel(BaseModel):
    """Exponents of ``X^x Z^z`` on one qudit."""

    model_config = ConfigDict(extra="forbid")

    x: int = Field(..., ge=0)
    z: int = Field(..., ge=0)


class PauliWordModel(BaseModel):
    """``{"p": 3, "factors": [{"x": 1, "z": 2}, ...], "phase": ...}``."""

    model_config = ConfigDict(extra="forbid")

    p: int = Field(..., ge=2)
    factors: List[PauliFactorModel]
    phase: ScalarModel
    text: str | None = Field(default=None, description="Rendering such as 𝒲 ⊗ 𝒵².")

    @classmethod
    def from_word(cls, word: PauliWord) -> "PauliWordModel":
        """Serialise a word."""
        return cls(
            p=word.p,
            factors=[PauliFactorModel(x=a, z=b) for a, b in word.factors],
            phase=ScalarModel.from_scalar(word.phase),
            text=word.render(),
        )

    def to_word(self) -> PauliWord:
        """Rebuild the word."""
        d = self.p ** len(self.factors)
        return PauliWord(
            self.p,
            tuple((f.x, f.z) for f in self.factors),
            self.phase.to_scalar(d),
        )


class DecompositionDocument(BaseModel):
    """Output of ``mubforge decompose``."""

    model_config = ConfigDict(extra="forbid")

    p: int = Field(..., ge=2)
    n: int = Field(..., ge=1)
    basis: str = Field(..., description="polynomial or normal.")
    generators: List[int] = Field(..., description="Powers of alpha spanning the basis.")
    digit_labels: List[str] = Field(
        ..., description="Digit string of every power-ordered position."
    )
    fourier_factorizes: bool = Field(..., description="Whether F = F_p tensor ... tensor F_p.")
    rows: Dict[str, List[PauliWordModel]]

    @classmethod
    def build(
        cls, digit_map: DigitMap, table: DecompositionTable, fourier_factorizes: bool
    ) -> "DecompositionDocument":
        """Serialise a decomposition table."""
        spec = digit_map.spec
        return cls(
            p=spec.p,
            n=spec.n,
            basis=table.basis_kind.value,
            generators=[g.power or 0 for g in digit_map.basis.generators],
            digit_labels=[
                "".join(str(c) for c in digit_map.digits_of(k)) for k in range(spec.d)
            ],
            fourier_factorizes=fourier_factorizes,
            rows={
                key: [PauliWordModel.from_word(w) for w in words]
                for key, words in table.rows.items()
            },
        )


__all__ = ["PauliFactorModel", "PauliWordModel", "DecompositionDocument"]
