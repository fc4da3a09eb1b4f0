"""Dense square matrices and vectors over :class:`CycloScalar`.

Storage is dense and row-major; products, comparisons and Hilbert-Schmidt
inner products walk the cached nonzero pattern. Matrices with one nonzero per
row and column (Weyl and clock-shift operators) expose it as :attr:`CMatrix.monomial`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from mubforge.services.cyclotomic import (
    CycloScalar,
    c_add,
    c_conj,
    c_div,
    c_mul,
    c_to_complex,
    is_root_of_unity,
    one,
    render,
    zero,
)
from mubforge.utils.errors import ConductorMismatch, DimensionMismatch, ScaleParityError


def _scale_of(entries: Iterable[CycloScalar]) -> int:
    scales = {entry.scale_k for entry in entries if not entry.is_zero()}
    if len(scales) > 1:
        raise ScaleParityError("entries mix odd and even powers of 1/sqrt(d)")
    return scales.pop() if scales else 0


@dataclass(frozen=True)
class CMatrix:
    """Square matrix with exact entries sharing one conductor.

    ``entries`` is a tuple of rows. ``scale_k`` is the common scale exponent of
    the nonzero entries.
    """

    dim: int
    entries: tuple[tuple[CycloScalar, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim or any(len(row) != self.dim for row in self.entries):
            raise DimensionMismatch(f"expected a {self.dim}x{self.dim} array")
        conductors = {entry.m for row in self.entries for entry in row}
        if len(conductors) > 1:
            raise ConductorMismatch("matrix entries use different conductors")
        _scale_of(entry for row in self.entries for entry in row)

    @property
    def m(self) -> int:
        """Conductor shared by all entries."""
        return self.entries[0][0].m

    @property
    def d(self) -> int:
        """Ambient dimension recorded on the entries."""
        return self.entries[0][0].d

    @property
    def scale_k(self) -> int:
        """Common scale exponent of the nonzero entries."""
        return _scale_of(entry for row in self.entries for entry in row)

    def __getitem__(self, index: tuple[int, int]) -> CycloScalar:
        row, col = index
        return self.entries[row][col]

    def __matmul__(self, other: "CMatrix") -> "CMatrix":
        return mat_mul(self, other)

    @cached_property
    def _nonzero(self) -> tuple[tuple[tuple[int, CycloScalar], ...], ...]:
        return tuple(
            tuple((j, value) for j, value in enumerate(row) if not value.is_zero())
            for row in self.entries
        )

    @cached_property
    def monomial(self) -> tuple[tuple[int, ...], tuple[CycloScalar, ...]] | None:
        """``(columns, values)`` when row ``i`` holds its only nonzero ``values[i]`` at
        ``columns[i]`` and the columns form a permutation, else ``None``."""
        if any(len(row) != 1 for row in self._nonzero):
            return None
        cols = tuple(row[0][0] for row in self._nonzero)
        if len(set(cols)) != self.dim:
            return None
        return cols, tuple(row[0][1] for row in self._nonzero)

    def nonzero_rows(self) -> tuple[tuple[tuple[int, CycloScalar], ...], ...]:
        """Return ``(column, value)`` pairs of the nonzero entries of every row."""
        return self._nonzero

    def support(self) -> tuple[tuple[int, ...], ...]:
        """Return the column indices of the nonzero entries of every row."""
        return tuple(tuple(j for j, _ in row) for row in self._nonzero)

    def column(self, j: int) -> "CVector":
        """Return column ``j`` as a vector."""
        return CVector(self.dim, tuple(row[j] for row in self.entries))

    def diagonal(self) -> tuple[CycloScalar, ...]:
        """Return the main diagonal."""
        return tuple(self.entries[i][i] for i in range(self.dim))


@dataclass(frozen=True)
class CVector:
    """Column vector with exact entries."""

    dim: int
    entries: tuple[CycloScalar, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} entries, got {len(self.entries)}")
        _scale_of(self.entries)

    def __getitem__(self, index: int) -> CycloScalar:
        return self.entries[index]

    def first_nonzero(self) -> int | None:
        """Index of the first nonzero component."""
        return next((i for i, value in enumerate(self.entries) if not value.is_zero()), None)


def from_rows(rows: Sequence[Sequence[CycloScalar]]) -> CMatrix:
    """Build a matrix from nested sequences."""
    return CMatrix(len(rows), tuple(tuple(row) for row in rows))


def identity(dim: int, m: int, d: int) -> CMatrix:
    """Return the ``dim x dim`` identity."""
    unit, nil = one(m, d), zero(m, d)
    rows = tuple(tuple(unit if i == j else nil for j in range(dim)) for i in range(dim))
    return CMatrix(dim, rows)


def diagonal(values: Sequence[CycloScalar]) -> CMatrix:
    """Return the diagonal matrix with ``values`` on the diagonal."""
    dim = len(values)
    nil = zero(values[0].m, values[0].d)
    return CMatrix(
        dim, tuple(tuple(values[i] if i == j else nil for j in range(dim)) for i in range(dim))
    )


def permutation_matrix(targets: Sequence[int], m: int, d: int) -> CMatrix:
    """Return ``P`` with ``P|j> = |targets[j]>``."""
    dim = len(targets)
    if sorted(targets) != list(range(dim)):
        raise DimensionMismatch("targets do not form a permutation")
    unit, nil = one(m, d), zero(m, d)
    rows = [[nil] * dim for _ in range(dim)]
    for j, i in enumerate(targets):
        rows[i][j] = unit
    return from_rows(rows)


def _require_same_dim(a: CMatrix | CVector, b: CMatrix | CVector) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(
            f"dimension mismatch: {a.dim} vs {b.dim}", details={"left": a.dim, "right": b.dim}
        )


def mat_mul(a: CMatrix, b: CMatrix) -> CMatrix:
    """Return the product ``a @ b``."""
    _require_same_dim(a, b)
    nil = zero(a.m, a.d)
    b_rows = b.nonzero_rows()
    rows = []
    for row in a.nonzero_rows():
        acc: list[CycloScalar] = [nil] * a.dim
        for k, a_ik in row:
            for j, b_kj in b_rows[k]:
                acc[j] = c_add(acc[j], c_mul(a_ik, b_kj))
        rows.append(acc)
    return from_rows(rows)


def mat_add(a: CMatrix, b: CMatrix) -> CMatrix:
    """Return ``a + b``."""
    _require_same_dim(a, b)
    return from_rows(
        [[c_add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)]
    )


def mat_scale(a: CMatrix, factor: CycloScalar) -> CMatrix:
    """Return ``factor * a``."""
    nil = c_mul(factor, zero(a.m, a.d))
    rows = [[nil] * a.dim for _ in range(a.dim)]
    for i, row in enumerate(a.nonzero_rows()):
        for j, value in row:
            rows[i][j] = c_mul(factor, value)
    return from_rows(rows)


def mat_pow(a: CMatrix, exponent: int) -> CMatrix:
    """Return ``a ** exponent`` for ``exponent >= 0``."""
    result = identity(a.dim, a.m, a.d)
    for _ in range(exponent):
        result = mat_mul(result, a)
    return result


def mat_adjoint(a: CMatrix) -> CMatrix:
    """Return the conjugate transpose."""
    nil = zero(a.m, a.d)
    rows = [[nil] * a.dim for _ in range(a.dim)]
    for i, row in enumerate(a.nonzero_rows()):
        for j, value in row:
            rows[j][i] = c_conj(value)
    return from_rows(rows)


def mat_trace(a: CMatrix) -> CycloScalar:
    """Return ``Tr(a)``."""
    total = zero(a.m, a.d)
    for value in a.diagonal():
        total = c_add(total, value)
    return total


def hs_inner(a: CMatrix, b: CMatrix) -> CycloScalar:
    """Return ``Tr(a b^dagger)`` entrywise, without forming the product."""
    _require_same_dim(a, b)
    total = zero(a.m, a.d)
    for row, row_b in zip(a.nonzero_rows(), b.entries):
        for j, x in row:
            y = row_b[j]
            if not y.is_zero():
                total = c_add(total, c_mul(x, c_conj(y)))
    return total


def mat_apply(a: CMatrix, v: CVector) -> CVector:
    """Return ``a v``."""
    _require_same_dim(a, v)
    nil = zero(a.m, a.d)
    out = []
    for row in a.nonzero_rows():
        acc = nil
        for j, value in row:
            if not v.entries[j].is_zero():
                acc = c_add(acc, c_mul(value, v.entries[j]))
        out.append(acc)
    return CVector(a.dim, tuple(out))


def vec_scale(v: CVector, factor: CycloScalar) -> CVector:
    """Return ``factor * v``."""
    return CVector(v.dim, tuple(c_mul(factor, x) for x in v.entries))


def inner(u: CVector, v: CVector) -> CycloScalar:
    """Return ``<u|v> = sum conj(u_i) v_i``."""
    _require_same_dim(u, v)
    total = zero(u.entries[0].m, u.entries[0].d)
    for x, y in zip(u.entries, v.entries):
        if not x.is_zero() and not y.is_zero():
            total = c_add(total, c_mul(c_conj(x), y))
    return total


def mat_tensor(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product; the left factor indexes the most significant digit."""
    if a.m != b.m:
        raise ConductorMismatch(f"conductors differ: {a.m} vs {b.m}")
    dim = a.dim * b.dim
    nil = c_mul(zero(a.m, a.d), zero(b.m, b.d))
    rows = [[nil] * dim for _ in range(dim)]
    for ia, row_a in enumerate(a.nonzero_rows()):
        for ib, row_b in enumerate(b.nonzero_rows()):
            target = rows[ia * b.dim + ib]
            for ja, x in row_a:
                for jb, y in row_b:
                    target[ja * b.dim + jb] = c_mul(x, y)
    return from_rows(rows)


def tensor_all(factors: Sequence[CMatrix]) -> CMatrix:
    """Kronecker product of ``factors`` from left to right."""
    result = factors[0]
    for factor in factors[1:]:
        result = mat_tensor(result, factor)
    return result


def permute(a: CMatrix, targets: Sequence[int]) -> CMatrix:
    """Return ``P a P^T`` where ``P|j> = |targets[j]>``."""
    dim = a.dim
    if len(targets) != dim:
        raise DimensionMismatch("relabelling has the wrong length")
    rows: list[list[CycloScalar]] = [[a.entries[0][0]] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            rows[targets[i]][targets[j]] = a.entries[i][j]
    return from_rows(rows)


def mat_equal(a: CMatrix, b: CMatrix) -> bool:
    """Exact entrywise equality."""
    if a.dim != b.dim or a.support() != b.support():
        return False
    return all(
        x == y
        for row_a, row_b in zip(a.nonzero_rows(), b.nonzero_rows())
        for (_, x), (_, y) in zip(row_a, row_b)
    )


def equal_up_to_phase(a: CMatrix, b: CMatrix) -> CycloScalar | None:
    """Return the root of unity ``lam`` with ``a = lam * b``, or ``None``."""
    _require_same_dim(a, b)
    if a.support() != b.support():
        return None
    lam: CycloScalar | None = None
    for row_a, row_b in zip(a.nonzero_rows(), b.nonzero_rows()):
        for (_, x), (_, y) in zip(row_a, row_b):
            if lam is None:
                lam = c_div(x, y)
                if not is_root_of_unity(lam):
                    return None
            elif c_mul(lam, y) != x:
                return None
    return lam


def is_identity(a: CMatrix) -> bool:
    """Return whether ``a`` is the identity."""
    if a.monomial is None:
        return False
    cols, values = a.monomial
    unit = one(a.m, a.d)
    return cols == tuple(range(a.dim)) and all(value == unit for value in values)


def is_unitary(a: CMatrix) -> bool:
    """Exact check ``a a^dagger = I``."""
    if a.monomial is not None:
        # A monomial matrix is unitary exactly when every entry has modulus one.
        unit = one(a.m, a.d)
        return all(c_mul(value, c_conj(value)) == unit for value in a.monomial[1])
    return is_identity(mat_mul(a, mat_adjoint(a)))


def commutator_is_zero(a: CMatrix, b: CMatrix) -> bool:
    """Exact check ``ab = ba``."""
    return mat_equal(mat_mul(a, b), mat_mul(b, a))


def rational_trace(a: CMatrix) -> Fraction | None:
    """Return ``Tr(a)`` when it is rational."""
    return mat_trace(a).rational_part()


def render_matrix(a: CMatrix) -> str:
    """Render with the symbolic scalar typography, one row per line."""
    cells = [[render(x) for x in row] for row in a.entries]
    width = max(len(cell) for row in cells for cell in row)
    return "\n".join("  ".join(cell.rjust(width) for cell in row) for row in cells)


def render_vector(v: CVector) -> str:
    """Render a vector as a parenthesised tuple."""
    return "(" + ", ".join(render(x) for x in v.entries) + ")"


def to_numpy(a: CMatrix) -> NDArray[np.complex128]:
    """Floating evaluation of ``a`` for diagnostics."""
    return np.array(
        [[complex(*c_to_complex(x)) for x in row] for row in a.entries], dtype=np.complex128
    )


__all__ = [
    "CMatrix",
    "CVector",
    "from_rows",
    "identity",
    "diagonal",
    "permutation_matrix",
    "mat_mul",
    "mat_add",
    "mat_scale",
    "mat_pow",
    "mat_adjoint",
    "mat_trace",
    "hs_inner",
    "mat_apply",
    "vec_scale",
    "inner",
    "mat_tensor",
    "tensor_all",
    "permute",
    "mat_equal",
    "equal_up_to_phase",
    "is_identity",
    "is_unitary",
    "commutator_is_zero",
    "rational_trace",
    "render_matrix",
    "render_vector",
    "to_numpy",
]
