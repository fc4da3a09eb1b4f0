"""Golden comparisons of the Pauli-word tables for GF(4), GF(8) and GF(9)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pytest

from mubforge.services.finite_field import BasisKind, basis_for, build_field
from mubforge.services.reference_tables import REFERENCE_TABLES, references_for
from mubforge.services.tensor_decomposition import (
    TableComparison,
    build_digit_map,
    compare_with_reference,
    decomposition_table,
)

TABLES = json.loads((Path(__file__).parent / "tensor_tables.json").read_text(encoding="utf-8"))


def _compare(entry: dict[str, Any]) -> TableComparison:
    spec = build_field(entry["p"], entry["n"])
    table = decomposition_table(spec, basis_for(spec, entry["basis"]))
    return compare_with_reference(table, entry["rows"])


@pytest.mark.parametrize("key", sorted(TABLES))
def test_digit_labels_follow_basis_expansion(key: str) -> None:
    """Each power-ordered position carries the transcribed digit string."""
    entry = TABLES[key]
    spec = build_field(entry["p"], entry["n"])
    digit_map = build_digit_map(spec, basis_for(spec, entry["basis"]))
    assert digit_map.digits_of(0) == (0,) * spec.n
    for position, digits in entry["digits"].items():
        label = "".join(str(c) for c in digit_map.digits_of(int(position)))
        assert label == digits, f"position {position}"


@pytest.mark.parametrize("key", ["gf4_polynomial", "gf8_polynomial"])
def test_qubit_polynomial_tables_match_exactly(key: str) -> None:
    comparison = _compare(TABLES[key])
    assert comparison.mismatches == []
    assert comparison.missing == []
    assert comparison.matches


def test_gf9_table_matches_with_one_absent_entry() -> None:
    """The transcribed last mixed row stops one entry short; the computed word is reported."""
    comparison = _compare(TABLES["gf9_polynomial"])
    assert comparison.matches
    assert comparison.missing == [("mixed:7", 7, "𝒳 ⊗ 𝒴")]


def test_gf4_normal_basis_reports_the_known_errata() -> None:
    """Z, X and the first mixed row agree; both remaining mixed rows differ everywhere."""
    comparison = _compare(TABLES["gf4_normal"])
    assert not comparison.matches
    assert comparison.missing == []
    flagged = {(key, q) for key, q, _, _ in comparison.mismatches}
    assert flagged == {(f"mixed:{r}", q) for r in (1, 2) for q in range(3)}


def test_gf4_normal_basis_computed_rows_are_pauli_words() -> None:
    """The recomputed mixed rows hold six distinct non-identity words."""
    spec = build_field(2, 2)
    table = decomposition_table(spec, basis_for(spec, "normal"))
    rendered = [word.render() for word in table.rows["mixed:1"] + table.rows["mixed:2"]]
    assert len(set(rendered)) == 6
    assert "I ⊗ I" not in rendered


def test_packaged_references_follow_the_transcription() -> None:
    """The rows the invariant suite checks against are the transcribed rows."""
    assert len(REFERENCE_TABLES) == len(TABLES)
    for entry in TABLES.values():
        (reference,) = references_for(entry["p"], entry["n"], BasisKind(entry["basis"]))
        assert {key: list(row) for key, row in reference.rows.items()} == entry["rows"]
