"""Tests for the pydantic documents emitted by the command line."""

from __future__ import annotations

from typing import Callable

import pytest
from pydantic import ValidationError

from mubforge.config import get_settings
from mubforge.schemas.common import MatrixModel, ScalarModel
from mubforge.schemas.field import ElementModel, FieldInfoDocument, FieldSpecModel
from mubforge.schemas.mubs import MubFamilyDocument
from mubforge.schemas.run import RunConfig
from mubforge.schemas.verification import VerificationDocument
from mubforge.services.cyclotomic import from_rational, inv_sqrt_d, omega
from mubforge.services.finite_field import FieldSpec
from mubforge.services.mub_builder import MubFamily
from mubforge.services.verification import run_suite
from mubforge.services.weyl_operators import build_F
from mubforge.utils.errors import BoundExceeded, NotPrime


def test_scalar_model_keeps_the_exact_value() -> None:
    norm = inv_sqrt_d(4, 2)
    model = ScalarModel.from_scalar(norm)
    assert model.m == 4
    assert model.k == 1
    assert model.text == "1/√2"
    assert model.to_scalar(2) == norm
    w = omega(3, 1, 9)
    assert ScalarModel.from_scalar(w).to_scalar(9) == w


def test_scalar_model_rejects_bad_denominators() -> None:
    with pytest.raises(ValidationError):
        ScalarModel(m=3, k=0, coeffs=[("1", "0")])
    with pytest.raises(ValidationError):
        ScalarModel(m=3, k=0, coeffs=[("1", "-2")])
    with pytest.raises(ValidationError):
        ScalarModel(m=3, k=2, coeffs=[("1", "1")])


def test_matrix_model_rebuilds_the_fourier_matrix(gf9: FieldSpec) -> None:
    fourier = build_F(gf9)
    model = MatrixModel.from_matrix(fourier)
    assert model.dim == 9
    assert model.to_matrix(9) == fourier


def test_element_model_is_a_power_or_zero(gf4: FieldSpec) -> None:
    assert ElementModel(zero=True).to_element(gf4) == gf4.zero()
    assert ElementModel(power=2).to_element(gf4) == gf4.power(2)
    with pytest.raises(ValidationError):
        ElementModel()
    with pytest.raises(ValidationError):
        ElementModel(power=1, zero=True)


def test_field_spec_model_requires_a_monic_modulus() -> None:
    assert FieldSpecModel(p=2, n=2, modulus=[1, 1, 1]).modulus == [1, 1, 1]
    with pytest.raises(ValidationError):
        FieldSpecModel(p=2, n=2, modulus=[1, 1, 0])
    with pytest.raises(ValidationError):
        FieldSpecModel(p=2, n=2, modulus=[1, 1])


def test_field_info_tabulates_every_element(gf4: FieldSpec) -> None:
    document = FieldInfoDocument.from_spec(gf4)
    assert document.field.modulus == [1, 1, 1]
    assert len(document.elements) == 4
    assert document.elements[0].element.zero is True
    assert [row.position for row in document.elements] == [0, 1, 2, 3]
    assert sorted(row.trace for row in document.elements) == [0, 0, 1, 1]
    assert document.elements[0].character.to_scalar(4) == from_rational(1, 4, 4)
    assert len(document.jacobi) == len(gf4.add_table)


def test_run_config_checks_the_field(monkeypatch: pytest.MonkeyPatch) -> None:
    with pytest.raises(NotPrime):
        RunConfig(command="mubs", p=6)
    assert RunConfig(command="mubs", p=3, n=2).d == 9
    monkeypatch.setenv("MUBFORGE_MAX_D", "8")
    get_settings.cache_clear()
    with pytest.raises(BoundExceeded):
        RunConfig(command="mubs", p=3, n=2)


def test_run_config_normalises_class_ids() -> None:
    config = RunConfig.model_validate({"command": "classes", "p": 5, "class": " Mixed:3 "})
    assert config.class_id == "mixed:3"
    with pytest.raises(ValidationError):
        RunConfig.model_validate({"command": "classes", "p": 5, "class": "vertical"})


def test_operators_command_needs_an_operator() -> None:
    with pytest.raises(ValidationError, match="needs --operator"):
        RunConfig(command="operators", p=3)
    assert RunConfig(command="operators", p=3, operator="F").operator == "F"


def test_family_document_uses_the_class_alias(
    family_for: Callable[[int, int], MubFamily],
) -> None:
    document = MubFamilyDocument.from_family(family_for(2, 1))
    assert document.d == 2
    assert document.route == "prime_fv"
    dumped = document.model_dump(by_alias=True)
    assert [basis["class"] for basis in dumped["bases"]] == ["diagonal", "mixed:0", "mixed:1"]
    assert len(dumped["bases"][1]["vectors"]) == 2


def test_verification_document_mirrors_the_report() -> None:
    report = run_suite(2, 1)
    document = VerificationDocument.from_report(report)
    assert document.passed
    assert document.route == "prime_fv"
    assert [check.name for check in document.checks] == [check.name for check in report.checks]
    assert document.violations == []
