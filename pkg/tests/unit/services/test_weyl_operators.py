"""Unit tests for the generalised Pauli operators and commuting classes."""

from __future__ import annotations

from dataclasses import replace

import pytest

from mubforge.services.finite_field import FieldSpec, build_field
from mubforge.services.matrix_core import (
    identity,
    is_identity,
    is_unitary,
    mat_adjoint,
    mat_mul,
    mat_pow,
    mat_scale,
)
from mubforge.services.weyl_operators import (
    ClassId,
    ClassKind,
    OperatorLabel,
    build_classes,
    build_F,
    build_Vqr,
    build_Xq,
    build_XqZr,
    build_Zq,
    class_violations,
    phased_mixed_member,
    prime_classes,
    prime_fourier,
    prime_generators,
    prime_member,
    prime_V,
    prime_xz,
    prime_z,
    weyl_phase,
    xq_label,
    xqzr_label,
    zq_label,
)
from mubforge.utils.errors import IndexOutOfRange, NotPrime, UnsupportedCharacteristic


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_prime_clock_and_shift(d: int) -> None:
    """ZX = omega XZ and both generators have order d."""
    shift, clock, w = prime_generators(d)
    assert mat_mul(clock, shift) == mat_scale(mat_mul(shift, clock), w)
    assert is_identity(mat_pow(shift, d))
    assert is_identity(mat_pow(clock, d))
    fourier = prime_fourier(d)
    assert is_unitary(fourier)
    assert mat_mul(mat_mul(mat_adjoint(fourier), clock), fourier) == shift


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_prime_V_moves_X_to_XZ(d: int) -> None:
    shift, _, _ = prime_generators(d)
    v = prime_V(d)
    assert mat_mul(mat_mul(mat_adjoint(v), shift), v) == prime_member(d, 1, 1)


def test_qubit_Y_is_hermitian() -> None:
    y = prime_member(2, 1, 1)
    assert mat_adjoint(y) == y
    assert is_identity(mat_mul(y, y))


def test_prime_dimension_must_be_prime() -> None:
    with pytest.raises(NotPrime):
        prime_generators(4)
    with pytest.raises(NotPrime):
        prime_classes(9)


@pytest.mark.parametrize(
    ("label", "text"),
    [
        (prime_z(1, 3), "Z"),
        (prime_z(2, 3), "Z^2"),
        (prime_xz(0, 2, 3), "X^2"),
        (prime_xz(1, 1, 2), "Y"),
        (prime_xz(1, 2, 3), "(XZ)^2"),
        (prime_xz(2, 1, 5), "XZ^2"),
        (zq_label(3, 9), "Z_3"),
        (xq_label(9, 9), "X_1"),
        (xqzr_label(1, 9, 9), "X_1Z_1"),
    ],
)
def test_labels_render_conventional_names(label: OperatorLabel, text: str) -> None:
    assert label.render() == text


def test_class_ids_parse_and_print() -> None:
    assert ClassId.parse(" Mixed:3 ") == ClassId(ClassKind.MIXED, 3)
    assert str(ClassId.parse("shift")) == "shift"
    assert str(ClassId(ClassKind.MIXED, 0)) == "mixed:0"
    for bad in ("mixed", "diagonal:1", "vertical"):
        with pytest.raises(ValueError):
            ClassId.parse(bad)


def test_subscripts_are_range_checked(gf4: FieldSpec) -> None:
    with pytest.raises(IndexOutOfRange):
        build_Zq(gf4, 3)
    with pytest.raises(IndexOutOfRange):
        build_Xq(gf4, -1)
    assert build_XqZr(gf4, 3, 4) == build_XqZr(gf4, 0, 1)


def test_V_needs_odd_characteristic(gf4: FieldSpec) -> None:
    with pytest.raises(UnsupportedCharacteristic):
        build_Vqr(gf4, 0, 0)
    with pytest.raises(UnsupportedCharacteristic):
        phased_mixed_member(gf4, 0, 0)


def test_field_weyl_relation(gf8: FieldSpec) -> None:
    """Z_q X_q' = chi(alpha^(q+q')) X_q' Z_q."""
    for q in range(gf8.order):
        for q2 in range(gf8.order):
            lhs = mat_mul(build_Zq(gf8, q), build_Xq(gf8, q2))
            rhs = mat_mul(build_Xq(gf8, q2), build_Zq(gf8, q))
            assert lhs == mat_scale(rhs, weyl_phase(gf8, q, q2))


def test_field_fourier_diagonalises_shifts(gf4: FieldSpec) -> None:
    fourier = build_F(gf4)
    assert is_unitary(fourier)
    for q in range(gf4.order):
        assert mat_mul(mat_mul(mat_adjoint(fourier), build_Zq(gf4, q)), fourier) == build_Xq(
            gf4, q
        )


@pytest.mark.parametrize(("p", "n"), [(3, 1), (5, 1), (3, 2)])
def test_V_conjugates_shift_into_mixed_member(p: int, n: int) -> None:
    spec = build_field(p, n)
    for q in range(spec.order):
        for r in range(spec.order):
            v = build_Vqr(spec, (q + r) % spec.order, q)
            moved = mat_mul(mat_mul(mat_adjoint(v), build_Xq(spec, q)), v)
            assert moved == phased_mixed_member(spec, q, r), (q, r)


@pytest.mark.parametrize("fixture", ["gf4", "gf8", "gf9"])
def test_field_classes_partition_the_operators(
    fixture: str, request: pytest.FixtureRequest
) -> None:
    """d + 1 classes of d - 1 commuting, mutually orthogonal members."""
    spec: FieldSpec = request.getfixturevalue(fixture)
    classes = build_classes(spec)
    assert len(classes) == spec.d + 1
    assert [str(c.class_id) for c in classes[:3]] == ["diagonal", "shift", "mixed:0"]
    assert all(len(c.members) == spec.d - 1 for c in classes)
    assert class_violations(classes, spec.d) == []
    label, _ = classes[2 + 1].members[2]
    assert label.render() == f"X_2Z_{3 % spec.order}"


@pytest.mark.parametrize("d", [2, 3, 5])
def test_prime_classes(d: int) -> None:
    classes = prime_classes(d)
    assert len(classes) == d + 1
    assert str(classes[0].class_id) == "diagonal"
    assert [str(c.class_id) for c in classes[1:]] == [f"mixed:{m}" for m in range(d)]
    assert class_violations(classes, d) == []


def test_class_violations_flags_a_broken_member() -> None:
    classes = list(prime_classes(3))
    diagonal_class = classes[0]
    label, _ = diagonal_class.members[0]
    classes[0] = replace(
        diagonal_class, members=((label, identity(3, 3, 3)),) + diagonal_class.members[1:]
    )
    problems = class_violations(classes, 3)
    assert any("is the identity" in problem for problem in problems)
    assert class_violations(classes[:-1], 3)


def test_class_violations_handles_dense_members() -> None:
    classes = list(prime_classes(3))
    diagonal_class = classes[0]
    label, _ = diagonal_class.members[0]
    classes[0] = replace(
        diagonal_class, members=((label, prime_fourier(3)),) + diagonal_class.members[1:]
    )
    problems = class_violations(classes, 3)
    assert "diagonal: Z and Z^2 do not commute" in problems
    assert any(problem.startswith(f"Tr({label.render()} ") for problem in problems)
    assert not any("is not unitary" in problem for problem in problems)
    assert class_violations(prime_classes(3), 3) == []
