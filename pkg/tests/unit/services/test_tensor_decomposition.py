"""Unit tests for the tensor-product form of the field operators."""

from __future__ import annotations

import numpy as np
import pytest

from mubforge.services.cyclotomic import from_rational, inv_sqrt_d, omega, one, root_of_unity
from mubforge.services.finite_field import FieldSpec, basis_for, build_field
from mubforge.services.matrix_core import mat_mul, mat_scale
from mubforge.services.tensor_decomposition import (
    PauliWord,
    build_digit_map,
    compose,
    decompose,
    decomposition_table,
    digits_to_index,
    factor_symbol,
    factorization_of_F,
    find_factorizing_basis,
    index_to_digits,
    parse_factor,
    parse_word,
    single_qudit_paulis,
    word_matrix,
    word_product,
)
from mubforge.services.weyl_operators import build_F, build_Xq, build_Zq
from mubforge.utils.errors import DimensionMismatch, NoPauliMatch, NotPrime

RANDOM_WORDS = 200


def _random_word(rng: np.random.Generator, spec: FieldSpec) -> PauliWord:
    p, n = spec.p, spec.n
    exponents = rng.integers(0, p, size=(n, 2))
    factors = tuple((int(a), int(b)) for a, b in exponents)
    m = spec.conductor
    phase = root_of_unity(m, int(rng.integers(0, m)), spec.d)
    if p != 2 and rng.integers(0, 2):
        phase = -phase
    return PauliWord(p, factors, phase)


@pytest.mark.parametrize(("p", "n"), [(2, 2), (2, 3), (3, 2)])
@pytest.mark.parametrize("kind", ["polynomial", "normal"])
def test_decompose_inverts_compose_on_random_words(p: int, n: int, kind: str) -> None:
    """Seeded random words survive a trip through the power-ordered basis."""
    spec = build_field(p, n)
    digit_map = build_digit_map(spec, basis_for(spec, kind))
    rng = np.random.default_rng(p * 100 + n)
    for _ in range(RANDOM_WORDS // 2):
        word = _random_word(rng, spec)
        recovered = decompose(compose(word, digit_map), digit_map)
        assert recovered.factors == word.factors
        assert recovered.phase == word.phase


def test_digits_are_most_significant_first() -> None:
    assert index_to_digits(5, 2, 3) == (1, 0, 1)
    assert digits_to_index((1, 0, 1), 2) == 5
    assert index_to_digits(7, 3, 2) == (2, 1)


def test_digit_map_inverse(gf8: FieldSpec) -> None:
    digit_map = build_digit_map(gf8, basis_for(gf8, "polynomial"))
    assert digit_map.perm[0] == 0
    assert sorted(digit_map.perm) == list(range(8))
    for position, index in enumerate(digit_map.perm):
        assert digit_map.inverse[index] == position
    assert digit_map.digits_of(3) == (1, 1, 0)


def test_digit_map_rejects_foreign_basis(gf4: FieldSpec, gf8: FieldSpec) -> None:
    with pytest.raises(DimensionMismatch):
        build_digit_map(gf4, basis_for(gf8, "polynomial"))


@pytest.mark.parametrize(
    ("p", "a", "b", "symbol"),
    [
        (2, 1, 1, "𝒴"),
        (3, 1, 2, "𝒲"),
        (3, 2, 1, "𝒲²"),
        (3, 0, 2, "𝒵²"),
        (5, 2, 1, "𝒳^2𝒵"),
        (5, 0, 3, "𝒵^3"),
        (5, 0, 0, "I"),
    ],
)
def test_factor_symbols_parse_back(p: int, a: int, b: int, symbol: str) -> None:
    assert factor_symbol(p, a, b) == symbol
    assert parse_factor(p, symbol) == (a, b)


def test_parse_word_accepts_tensor_signs_and_spaces() -> None:
    assert parse_word(3, "𝒲 ⊗ 𝒵²") == ((1, 2), (0, 2))
    assert parse_word(3, "𝒲 𝒵^2") == ((1, 2), (0, 2))
    assert parse_word(2, "I ⊗ 𝒴 ⊗ 𝒳") == ((0, 0), (1, 1), (1, 0))
    with pytest.raises(ValueError):
        parse_factor(2, "𝒲")


def test_word_validation() -> None:
    with pytest.raises(ValueError):
        PauliWord(2, ((2, 0),), one(4, 2))
    with pytest.raises(ValueError):
        PauliWord(3, ((1, 0),), from_rational(2, 3, 3))
    word = PauliWord(3, ((1, 2), (0, 1)), omega(3, 1, 9))
    assert word.render() == "𝒲 ⊗ 𝒵"
    assert word.render(with_phase=True) == "ω · 𝒲 ⊗ 𝒵"


def test_single_qudit_clock_and_shift() -> None:
    shift, clock = single_qudit_paulis(3)
    assert mat_mul(clock, shift) == mat_scale(mat_mul(shift, clock), omega(3, 1, 3))
    with pytest.raises(NotPrime):
        single_qudit_paulis(6)


def test_word_product_tracks_the_commutation_phase() -> None:
    left = PauliWord(3, ((0, 1), (1, 0)), one(3, 9))
    right = PauliWord(3, ((1, 0), (2, 2)), omega(3, 2, 9))
    product = word_product(left, right)
    assert product.factors == ((1, 1), (0, 2))
    assert word_matrix(product) == mat_mul(word_matrix(left), word_matrix(right))


def test_non_monomial_operators_are_rejected(gf4: FieldSpec) -> None:
    digit_map = build_digit_map(gf4, basis_for(gf4, "polynomial"))
    with pytest.raises(NoPauliMatch):
        decompose(build_F(gf4), digit_map)
    with pytest.raises(DimensionMismatch):
        compose(PauliWord(2, ((1, 0),), one(4, 2)), digit_map)


def test_field_operators_decompose_into_words(gf9: FieldSpec) -> None:
    """Over the polynomial basis Z_0 is Z^2 (x) Z^2 and X_0 shifts the constant digit."""
    digit_map = build_digit_map(gf9, basis_for(gf9, "polynomial"))
    assert decompose(build_Zq(gf9, 0), digit_map).render() == "𝒵² ⊗ 𝒵²"
    assert decompose(build_Xq(gf9, 0), digit_map).render() == "𝒳 ⊗ I"


def test_table_has_every_class_row(gf8: FieldSpec) -> None:
    table = decomposition_table(gf8, basis_for(gf8, "polynomial"))
    assert list(table.rows) == ["Z", "X"] + [f"mixed:{r}" for r in range(7)]
    assert all(len(words) == 7 for words in table.rows.values())


def test_fourier_factorisation_depends_on_the_basis(
    gf4: FieldSpec, gf8: FieldSpec, gf9: FieldSpec
) -> None:
    """F is a tensor power of the qubit Hadamard only for self-dual digit maps."""
    assert factorization_of_F(gf4, build_digit_map(gf4, basis_for(gf4, "polynomial"))) is None
    factors = factorization_of_F(gf4, build_digit_map(gf4, basis_for(gf4, "normal")))
    assert factors is not None
    assert len(factors) == 2
    norm = inv_sqrt_d(4, 2)
    assert factors[0][0, 0] == norm
    assert factorization_of_F(gf8, build_digit_map(gf8, basis_for(gf8, "polynomial"))) is None
    basis = find_factorizing_basis(gf8)
    assert basis is not None
    assert basis.generators[0].power == 3
    assert find_factorizing_basis(gf9) is None
