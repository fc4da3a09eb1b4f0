"""Unit tests for the integer-array kernels behind the batched family checks."""

from __future__ import annotations

import numpy as np
import pytest

from mubforge.services.cyclotomic import from_rational, imaginary_unit, inv_sqrt_d, one, zero
from mubforge.services.lattice import (
    apply_monomial,
    canonical,
    conjugate,
    cyclic_product,
    equals_rational,
    gram,
    nonzero,
    to_lattice,
    to_scalar,
    widen,
)
from mubforge.services.weyl_operators import prime_fourier
from mubforge.utils.errors import ConductorMismatch, ScaleParityError

I_COORDS = np.array([0, 1, 0, 0])


def test_products_follow_the_cyclotomic_relations() -> None:
    assert canonical(cyclic_product(I_COORDS, I_COORDS)).tolist() == [-1, 0, 0, 0]
    assert canonical(conjugate(I_COORDS)).tolist() == [0, -1, 0, 0]
    assert canonical(np.array([1, 1, 1])).tolist() == [0, 0, 0]
    assert nonzero(np.array([[0, 0, 0], [0, 2, 0]])).tolist() == [False, True]


def test_encoding_keeps_the_scalar() -> None:
    lattice = to_lattice([[imaginary_unit(2), zero(4, 2)]])
    assert lattice.norms.tolist() == [1]
    assert to_scalar(lattice.coords[0, 0], 1, 4, 2) == imaginary_unit(2)


def test_fourier_rows_are_orthonormal() -> None:
    rows = to_lattice(prime_fourier(3).entries)
    assert rows.count == 3
    assert rows.norms.tolist() == [3, 3, 3]
    expected = np.zeros((3, 3, 3), dtype=np.int64)
    expected[np.arange(3), np.arange(3), 0] = 3
    assert (canonical(gram(rows, rows)) == expected).all()


def test_monomial_action_moves_components() -> None:
    unit = one(3, 3)
    basis = to_lattice([[unit if i == j else zero(3, 3) for j in range(3)] for i in range(3)])
    image = apply_monomial(basis, (1, 2, 0), to_lattice([[unit, unit, unit]]))
    assert image.coords[0, :, 0].tolist() == [0, 0, 1]
    assert image.norms.tolist() == [1, 1, 1]


def test_rational_comparison() -> None:
    norms = np.array([4, 4])
    coords = np.array([[2, 0, 0], [2, 1, 0]])
    assert equals_rational(coords, norms, np.array([1, 1]), 2).tolist() == [True, False]


def test_large_values_switch_to_python_integers() -> None:
    small = np.array([1, 2])
    assert widen(10, small)[0] is small
    assert widen(2**62, small)[0].dtype == object
    assert to_lattice([[from_rational(2**63, 3, 3)]]).coords.dtype == object


def test_rows_must_share_conductor_and_scale_parity() -> None:
    with pytest.raises(ScaleParityError):
        to_lattice([[inv_sqrt_d(3, 3), one(3, 3)]])
    with pytest.raises(ConductorMismatch):
        to_lattice([[one(3, 3)], [one(4, 4)]])
