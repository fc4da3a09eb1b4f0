"""Tests for the packaged Pauli-word reference rows."""

from __future__ import annotations

from dataclasses import replace

from mubforge.services.finite_field import BasisKind, basis_for, build_field
from mubforge.services.reference_tables import (
    REFERENCE_TABLES,
    check_against,
    references_for,
)
from mubforge.services.tensor_decomposition import DecompositionTable, decomposition_table


def _table(p: int, n: int, kind: BasisKind) -> DecompositionTable:
    spec = build_field(p, n)
    return decomposition_table(spec, basis_for(spec, kind))


def test_references_are_selected_by_field_and_basis() -> None:
    assert len(references_for(2, 2, BasisKind.POLYNOMIAL)) == 1
    assert len(references_for(2, 2, BasisKind.NORMAL)) == 1
    assert references_for(3, 2, BasisKind.NORMAL) == []
    assert references_for(5, 2, BasisKind.POLYNOMIAL) == []


def test_every_computed_table_agrees_outside_the_errata() -> None:
    for reference in REFERENCE_TABLES:
        table = _table(reference.p, reference.n, reference.basis)
        assert check_against(table, reference) == [], (reference.p, reference.n)


def test_errata_are_the_only_normal_basis_disagreements() -> None:
    (reference,) = references_for(2, 2, BasisKind.NORMAL)
    without_errata = replace(reference, errata=frozenset())
    problems = check_against(_table(2, 2, BasisKind.NORMAL), without_errata)
    assert len(problems) == 6
    assert all(problem.startswith("mixed:") for problem in problems)


def test_a_corrupted_row_is_reported() -> None:
    (reference,) = references_for(3, 2, BasisKind.POLYNOMIAL)
    rows = dict(reference.rows)
    rows["Z"] = ("𝒳 𝒳",) + rows["Z"][1:]
    problems = check_against(_table(3, 2, BasisKind.POLYNOMIAL), replace(reference, rows=rows))
    assert len(problems) == 1
    assert problems[0].startswith("Z[0] computed ")
    assert problems[0].endswith("reference 𝒳 𝒳")
