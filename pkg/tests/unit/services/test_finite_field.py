"""Unit tests for GF(p^n) arithmetic, traces and bases."""

from __future__ import annotations

from itertools import product

import pytest

from mubforge.config import get_settings
from mubforge.services.cyclotomic import omega
from mubforge.services.finite_field import (
    BasisKind,
    FieldSpec,
    add,
    basis_for,
    build_field,
    character,
    combine,
    ensure_dimension,
    expand,
    field_trace,
    find_normal_basis,
    is_irreducible,
    is_prime,
    is_primitive,
    is_self_dual,
    jacobi_add,
    make_basis,
    mul,
    normal_bases,
    polynomial_basis,
    scale,
)
from mubforge.utils.errors import BoundExceeded, FieldMismatch, NotPrime, SingularBasis


@pytest.mark.parametrize(
    ("p", "n", "modulus"),
    [(2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (3, 2, (2, 1, 1))],
)
def test_small_fields_use_pinned_moduli(p: int, n: int, modulus: tuple[int, ...]) -> None:
    """x^2+x+1, x^3+x+1 and x^2+x+2, constant coefficient first."""
    spec = build_field(p, n)
    assert spec.modulus == modulus
    assert is_primitive(modulus, p)


def test_power_ordered_positions(gf9: FieldSpec) -> None:
    """Position 0 is zero, position k is alpha^k and 1 sits last."""
    assert gf9.at_position(0).is_zero()
    assert gf9.at_position(gf9.d - 1).power == 0
    assert gf9.at_position(gf9.d - 1) == gf9.one()
    for position in range(gf9.d):
        assert gf9.position_of(gf9.at_position(position)) == position
    assert len({e.coeffs for e in gf9.elements()}) == gf9.d


def test_gf9_power_table(gf9: FieldSpec) -> None:
    """alpha^2 = 2 alpha + 1 and alpha^4 = 2 under x^2 + x + 2."""
    assert gf9.power(2).coeffs == (1, 2)
    assert gf9.power(4).coeffs == (2, 0)
    assert gf9.power(4) == gf9.from_int(2)
    assert gf9.power(8) == gf9.one()


@pytest.mark.parametrize(("p", "n"), [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_jacobi_addition_agrees_with_coefficient_addition(p: int, n: int) -> None:
    spec = build_field(p, n)
    elements = list(spec.elements())
    for a, b in product(elements, repeat=2):
        assert jacobi_add(a, b) == add(a, b)


def test_debug_verify_cross_checks_every_sum(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MUBFORGE_DEBUG_VERIFY", "true")
    spec = build_field(2, 3)
    assert add(spec.power(1), spec.power(3)) == spec.one()


def test_gf4_arithmetic(gf4: FieldSpec) -> None:
    alpha = gf4.power(1)
    assert gf4.one() + alpha == gf4.power(2)
    assert alpha + alpha == gf4.zero()
    assert mul(alpha, gf4.power(2)) == gf4.one()
    assert mul(alpha, gf4.zero()).is_zero()
    assert -alpha == alpha
    assert scale(alpha, 3) == alpha


def test_gf9_trace_is_linear_in_coefficients(gf9: FieldSpec) -> None:
    """tr(c0 + c1 alpha) = 2 c0 + 2 c1 (mod 3)."""
    for element in gf9.elements():
        c0, c1 = element.coeffs
        assert field_trace(element) == (2 * c0 + 2 * c1) % 3


def test_gf8_traces(gf8: FieldSpec) -> None:
    traces = [field_trace(gf8.power(k)) for k in range(7)]
    assert traces == [1, 0, 0, 1, 0, 1, 1]
    assert field_trace(gf8.zero()) == 0


def test_character_values(gf4: FieldSpec, gf9: FieldSpec) -> None:
    assert character(gf4.power(1)) == omega(2, 1, 4)
    assert character(gf4.zero()) == omega(2, 0, 4)
    assert character(gf9.power(1)) == omega(3, 2, 9)
    assert character(gf9.power(1), d=3).d == 3


def test_rejects_composite_characteristic() -> None:
    with pytest.raises(NotPrime):
        build_field(4, 1)
    with pytest.raises(NotPrime):
        ensure_dimension(9, 1)
    assert [v for v in range(12) if is_prime(v)] == [2, 3, 5, 7, 11]


def test_bounds(monkeypatch: pytest.MonkeyPatch) -> None:
    """Field construction and dense operators each have their own limit."""
    with pytest.raises(BoundExceeded):
        build_field(2, 0)
    with pytest.raises(BoundExceeded):
        build_field(2, 11)
    assert build_field(2, 6).d == 64
    with pytest.raises(BoundExceeded):
        ensure_dimension(2, 6)
    assert ensure_dimension(5, 2) == 25
    monkeypatch.setenv("MUBFORGE_MAX_D", "64")
    get_settings.cache_clear()
    assert ensure_dimension(2, 6) == 64
    with pytest.raises(BoundExceeded):
        ensure_dimension(2, 6, bound=8)


def test_elements_of_different_fields_do_not_mix(gf4: FieldSpec, gf8: FieldSpec) -> None:
    with pytest.raises(FieldMismatch):
        add(gf4.one(), gf8.one())


def test_irreducibility_and_primitivity() -> None:
    """x^2 + 1 over Z_3 is irreducible but alpha only has order 4."""
    assert is_irreducible((1, 0, 1), 3)
    assert not is_primitive((1, 0, 1), 3)
    assert not is_irreducible((1, 1, 1), 3)
    assert is_irreducible((1, 1, 0, 1), 2)


def test_first_normal_bases(gf4: FieldSpec, gf8: FieldSpec, gf9: FieldSpec) -> None:
    assert [g.power for g in find_normal_basis(gf4).generators] == [1, 2]
    assert [g.power for g in find_normal_basis(gf8).generators] == [3, 6, 5]
    assert [g.power for g in find_normal_basis(gf9).generators] == [1, 3]
    assert all(b.kind is BasisKind.NORMAL for b in normal_bases(gf8))


def test_self_duality(gf8: FieldSpec) -> None:
    assert is_self_dual(find_normal_basis(gf8))
    assert not is_self_dual(polynomial_basis(gf8))


def test_expand_and_combine(gf8: FieldSpec) -> None:
    normal = basis_for(gf8, "normal")
    assert expand(gf8.power(3), normal) == (1, 0, 0)
    assert expand(gf8.one(), normal) == (1, 1, 1)
    assert expand(gf8.power(4), polynomial_basis(gf8)) == (0, 1, 1)
    for element in gf8.elements():
        assert combine(expand(element, normal), normal) == element


def test_make_basis_rejects_dependent_generators(gf4: FieldSpec) -> None:
    with pytest.raises(SingularBasis):
        make_basis(BasisKind.NORMAL, [gf4.one(), gf4.one()])
    with pytest.raises(SingularBasis):
        make_basis(BasisKind.POLYNOMIAL, [gf4.one()])


def test_matches_galois_reference() -> None:
    """Powers and traces agree with the galois package when it is installed."""
    galois = pytest.importorskip("galois")
    for p, n, poly in ((2, 3, "x^3 + x + 1"), (3, 2, "x^2 + x + 2")):
        spec = build_field(p, n)
        GF = galois.GF(p**n, irreducible_poly=poly)
        alpha = GF(p)
        for k in range(spec.order):
            element = spec.power(k)
            reference = alpha**k
            assert int(reference) == sum(c * p**i for i, c in enumerate(element.coeffs))
            assert int(reference.field_trace()) == field_trace(element)
