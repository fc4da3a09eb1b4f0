"""Published Pauli-word rows used as a reference by the invariant suite.

Rows are keyed like :class:`~mubforge.services.tensor_decomposition.DecompositionTable`
rows (``"Z"``, ``"X"``, ``"mixed:r"``) and list the single-qudit symbols of each
``q`` without phases. ``errata`` names the ``(row, q)`` entries known to be
misprinted in the source listing; those are not held against a computed table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from mubforge.services.finite_field import BasisKind
from mubforge.services.tensor_decomposition import (
    DecompositionTable,
    TableComparison,
    compare_with_reference,
)


@dataclass(frozen=True)
class ReferenceTable:
    """Transcribed Pauli-word rows of GF(p^n) over one field basis."""

    p: int
    n: int
    basis: BasisKind
    rows: Mapping[str, tuple[str, ...]] = field(hash=False)
    errata: frozenset[tuple[str, int]] = frozenset()

    def unexplained(self, comparison: TableComparison) -> list[tuple[str, int, str, str]]:
        """Mismatches of ``comparison`` that are not listed errata."""
        return [entry for entry in comparison.mismatches if entry[:2] not in self.errata]


REFERENCE_TABLES: tuple[ReferenceTable, ...] = (
    ReferenceTable(
        p=2,
        n=2,
        basis=BasisKind.POLYNOMIAL,
        rows={
            "Z": ("I 𝒵", "𝒵 𝒵", "𝒵 I"),
            "X": ("𝒳 I", "I 𝒳", "𝒳 𝒳"),
            "mixed:0": ("𝒳 𝒵", "𝒵 𝒴", "𝒴 𝒳"),
            "mixed:1": ("𝒴 𝒵", "𝒵 𝒳", "𝒳 𝒴"),
            "mixed:2": ("𝒴 I", "I 𝒴", "𝒴 𝒴"),
        },
    ),
    ReferenceTable(
        p=2,
        n=2,
        basis=BasisKind.NORMAL,
        rows={
            "Z": ("𝒵 𝒵", "𝒵 I", "I 𝒵"),
            "X": ("𝒳 𝒳", "𝒳 I", "I 𝒳"),
            "mixed:0": ("𝒴 𝒴", "𝒴 I", "I 𝒴"),
            "mixed:1": ("𝒴 𝒵", "𝒵 𝒳", "𝒳 𝒴"),
            "mixed:2": ("𝒵 𝒳", "𝒴 𝒳", "𝒳 𝒵"),
        },
        # Both rows were printed with the polynomial-basis words.
        errata=frozenset((f"mixed:{r}", q) for r in (1, 2) for q in range(3)),
    ),
    ReferenceTable(
        p=2,
        n=3,
        basis=BasisKind.POLYNOMIAL,
        rows={
            "Z": ("𝒵 I I", "I I 𝒵", "I 𝒵 I", "𝒵 I 𝒵", "I 𝒵 𝒵", "𝒵 𝒵 𝒵", "𝒵 𝒵 I"),
            "X": ("𝒳 I I", "I 𝒳 I", "I I 𝒳", "𝒳 𝒳 I", "I 𝒳 𝒳", "𝒳 𝒳 𝒳", "𝒳 I 𝒳"),
            "mixed:0": ("𝒴 I I", "I 𝒳 𝒵", "I 𝒵 𝒳", "𝒴 𝒳 𝒵", "I 𝒴 𝒴", "𝒴 𝒴 𝒴", "𝒴 𝒵 𝒳"),
            "mixed:1": ("𝒳 I 𝒵", "I 𝒴 I", "𝒵 I 𝒴", "𝒳 𝒴 𝒵", "𝒵 𝒴 𝒴", "𝒴 𝒴 𝒳", "𝒴 I 𝒳"),
            "mixed:2": ("𝒳 𝒵 I", "𝒵 𝒳 𝒵", "I 𝒵 𝒴", "𝒴 𝒴 𝒵", "𝒵 𝒴 𝒳", "𝒴 𝒳 𝒳", "𝒳 I 𝒴"),
            "mixed:3": ("𝒴 I 𝒵", "I 𝒴 𝒵", "𝒵 𝒵 𝒴", "𝒴 𝒴 I", "𝒵 𝒳 𝒳", "𝒳 𝒳 𝒴", "𝒳 𝒵 𝒳"),
            "mixed:4": ("𝒳 𝒵 𝒵", "𝒵 𝒴 𝒵", "𝒵 𝒵 𝒳", "𝒴 𝒳 I", "I 𝒳 𝒴", "𝒳 𝒴 𝒳", "𝒴 I 𝒴"),
            "mixed:5": ("𝒴 𝒵 𝒵", "𝒵 𝒴 I", "𝒵 I 𝒳", "𝒳 𝒳 𝒵", "I 𝒴 𝒳", "𝒴 𝒳 𝒴", "𝒳 𝒵 𝒴"),
            "mixed:6": ("𝒴 𝒵 I", "𝒵 𝒳 I", "I I 𝒴", "𝒳 𝒴 I", "𝒵 𝒳 𝒴", "𝒳 𝒴 𝒴", "𝒴 𝒵 𝒴"),
        },
    ),
    ReferenceTable(
        p=3,
        n=2,
        basis=BasisKind.POLYNOMIAL,
        rows={
            "Z": ("𝒵² 𝒵²", "𝒵² I", "I 𝒵²", "𝒵² 𝒵", "𝒵 𝒵", "𝒵 I", "I 𝒵", "𝒵 𝒵²"),
            "X": ("𝒳 I", "I 𝒳", "𝒳 𝒳²", "𝒳² 𝒳²", "𝒳² I", "I 𝒳²", "𝒳² 𝒳", "𝒳 𝒳"),
            "mixed:0": ("𝒲 𝒵²", "𝒵² 𝒳", "𝒳 𝒴²", "𝒴² 𝒲²", "𝒲² 𝒵", "𝒵 𝒳²", "𝒳² 𝒴", "𝒴 𝒲"),
            "mixed:1": ("𝒲 I", "I 𝒲", "𝒲 𝒲²", "𝒲² 𝒲²", "𝒲² I", "I 𝒲²", "𝒲² 𝒲", "𝒲 𝒲"),
            "mixed:2": ("𝒳 𝒵²", "𝒵² 𝒴", "𝒴 𝒲²", "𝒲² 𝒳²", "𝒳² 𝒵", "𝒵 𝒴²", "𝒴² 𝒲", "𝒲 𝒳"),
            "mixed:3": ("𝒲 𝒵", "𝒵 𝒴", "𝒴 𝒳²", "𝒳² 𝒲²", "𝒲² 𝒵²", "𝒵² 𝒴²", "𝒴² 𝒳", "𝒳 𝒲"),
            "mixed:4": ("𝒴 𝒵", "𝒵 𝒳", "𝒳 𝒲²", "𝒲² 𝒴²", "𝒴² 𝒵²", "𝒵² 𝒳²", "𝒳² 𝒲", "𝒲 𝒴"),
            "mixed:5": ("𝒴 I", "I 𝒴", "𝒴 𝒴²", "𝒴² 𝒴²", "𝒴² I", "I 𝒴²", "𝒴² 𝒴", "𝒴 𝒴"),
            "mixed:6": ("𝒳 𝒵", "𝒵 𝒲", "𝒲 𝒴²", "𝒴² 𝒳²", "𝒳² 𝒵²", "𝒵² 𝒲²", "𝒲² 𝒴", "𝒴 𝒳"),
            # The source listing stops one entry short.
            "mixed:7": ("𝒴 𝒵²", "𝒵² 𝒲", "𝒲 𝒳²", "𝒳² 𝒴²", "𝒴² 𝒵", "𝒵 𝒲²", "𝒲² 𝒳"),
        },
    ),
)


def references_for(
    p: int, n: int, basis: BasisKind, tables: tuple[ReferenceTable, ...] = REFERENCE_TABLES
) -> list[ReferenceTable]:
    """Reference tables for GF(p^n) over ``basis``."""
    return [table for table in tables if (table.p, table.n, table.basis) == (p, n, basis)]


def check_against(table: DecompositionTable, reference: ReferenceTable) -> list[str]:
    """Describe every computed word that disagrees with a non-errata reference entry."""
    comparison = compare_with_reference(table, reference.rows)
    return [
        f"{key}[{q}] computed {got}, reference {expected}"
        for key, q, expected, got in reference.unexplained(comparison)
    ]


__all__ = ["ReferenceTable", "REFERENCE_TABLES", "references_for", "check_against"]
