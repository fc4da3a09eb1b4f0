"""Exact integer-array kernels for batches of cyclotomic vectors.

A batch of vectors whose entries share a conductor ``m`` is stored as integer
coordinates over ``1, zeta, ..., zeta^(m-1)`` plus one normaliser per vector:
vector ``v`` equals ``coords[v] / sqrt(norms[v])``. Inner products, entrywise
products and squared moduli then become integer array arithmetic and stay in
the exact ring. Arrays are ``int64`` while the worst-case magnitude of a result
fits and switch to Python integers (``object`` dtype) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
from numpy.typing import NDArray

from mubforge.services.cyclotomic import CycloScalar, rebase
from mubforge.utils.errors import ConductorMismatch, ScaleParityError

IntArray = NDArray[Any]
BoolArray = NDArray[np.bool_]

_INT64_SAFE = 2**62


def max_abs(array: IntArray) -> int:
    """Largest absolute value in ``array`` (``0`` when empty)."""
    return int(np.abs(array).max()) if array.size else 0


def widen(bound: int, *arrays: IntArray) -> tuple[IntArray, ...]:
    """Return ``arrays`` as Python-integer arrays when ``bound`` may overflow ``int64``."""
    if bound < _INT64_SAFE:
        return arrays
    return tuple(array.astype(object) for array in arrays)


@dataclass(frozen=True, eq=False)
class Lattice:
    """``count`` vectors of a common length as integer coordinates.

    ``coords`` has shape ``(count, length, m)`` and ``norms`` shape ``(count,)``.
    """

    m: int
    d: int
    coords: IntArray
    norms: IntArray

    @property
    def count(self) -> int:
        """Number of vectors."""
        return int(self.coords.shape[0])

    def select(self, rows: Sequence[int], positions: BoolArray) -> "Lattice":
        """Keep the vectors ``rows`` restricted to the components flagged in ``positions``."""
        picked = np.asarray(rows, dtype=np.intp)
        return Lattice(self.m, self.d, self.coords[picked][:, positions, :], self.norms[picked])


def to_lattice(rows: Sequence[Sequence[CycloScalar]]) -> Lattice:
    """Encode every row of scalars as one lattice vector."""
    m, d = rows[0][0].m, rows[0][0].d
    coords: list[list[list[int]]] = []
    norms: list[int] = []
    for row in rows:
        if any(x.m != m for x in row):
            raise ConductorMismatch("lattice rows use different conductors", details={"m": m})
        entries = [rebase(x, d) for x in row]
        scales = {x.scale_k for x in entries if not x.is_zero()}
        if len(scales) > 1:
            raise ScaleParityError("a lattice row mixes odd and even powers of 1/sqrt(d)")
        denominator = math.lcm(*(c.denominator for x in entries for c in x.coeffs))
        coords.append([[int(c * denominator) for c in x.coeffs] for x in entries])
        norms.append(denominator * denominator * d ** (scales.pop() if scales else 0))
    largest = max((abs(c) for row in coords for x in row for c in x), default=0)
    dtype: Any = np.int64 if max(largest, *norms) < _INT64_SAFE else object
    return Lattice(m, d, np.array(coords, dtype=dtype), np.array(norms, dtype=dtype))


def to_scalar(coords: IntArray, denominator: int, m: int, d: int) -> CycloScalar:
    """Return ``(sum coords[j] zeta^j) / denominator``."""
    return CycloScalar.make(m, d, [Fraction(int(c), int(denominator)) for c in coords])


def canonical(coords: IntArray) -> IntArray:
    """Reduce coordinates on the last axis to the canonical form of :class:`CycloScalar`."""
    m = coords.shape[-1]
    if m == 4:
        head = coords[..., :2] - coords[..., 2:]
        return np.concatenate([head, np.zeros_like(head)], axis=-1)
    return coords - coords[..., m - 1 :]


def nonzero(coords: IntArray) -> BoolArray:
    """Whether each coordinate vector on the last axis has a nonzero entry."""
    return np.asarray((coords != 0).any(axis=-1), dtype=bool)


def conjugate(coords: IntArray) -> IntArray:
    """Coordinates of the complex conjugate (``zeta^j -> zeta^(-j)``)."""
    m = coords.shape[-1]
    return coords[..., (-np.arange(m)) % m]


def cyclic_product(left: IntArray, right: IntArray) -> IntArray:
    """Entrywise product in ``Z[x] / (x^m - 1)`` along the last axis, with broadcasting."""
    m = left.shape[-1]
    left, right = widen(2 * m * max_abs(left) * max_abs(right), left, right)
    out = left[..., :1] * right
    for s in range(1, m):
        out = out + left[..., s : s + 1] * np.roll(right, s, axis=-1)
    return out


def abs_squared(coords: IntArray) -> IntArray:
    """Coordinates of ``z conj(z)``."""
    return cyclic_product(coords, conjugate(coords))


def gram(left: Lattice, right: Lattice) -> IntArray:
    """Coordinates of ``<u|w>`` for every ``u`` of ``left`` and ``w`` of ``right``.

    The inner product itself is ``result[a, b] / sqrt(left.norms[a] * right.norms[b])``.
    """
    m, length = left.m, left.coords.shape[1]
    u, w = widen(
        2 * length * m * max_abs(left.coords) * max_abs(right.coords), left.coords, right.coords
    )
    flat = u.reshape(u.shape[0], -1)
    out = np.empty((u.shape[0], w.shape[0], m), dtype=flat.dtype)
    for t in range(m):
        out[:, :, t] = flat @ np.roll(w, -t, axis=2).reshape(w.shape[0], -1).T
    return out


def paired_inner(left: IntArray, right: IntArray) -> IntArray:
    """Coordinates of ``<left[k]|right[k]>`` for matching vectors of two coordinate arrays."""
    m, length = left.shape[-1], left.shape[-2]
    left, right = widen(2 * length * m * max_abs(left) * max_abs(right), left, right)
    return np.stack(
        [(left * np.roll(right, -t, axis=-1)).sum(axis=(-2, -1)) for t in range(m)], axis=-1
    )


def apply_monomial(vectors: Lattice, columns: Sequence[int], values: Lattice) -> Lattice:
    """Apply the matrix holding ``values[0][i]`` at row ``i``, column ``columns[i]``."""
    gathered = vectors.coords[:, np.asarray(columns, dtype=np.intp), :]
    coords = cyclic_product(values.coords[:1], gathered)
    (norms,) = widen(max_abs(vectors.norms) * int(values.norms[0]), vectors.norms)
    return Lattice(vectors.m, vectors.d, coords, norms * values.norms[0])


def equals_rational(
    coords: IntArray, norms: IntArray, numerators: IntArray, denominator: int
) -> BoolArray:
    """Whether ``coords / norms`` equals ``numerators / denominator`` elementwise.

    ``coords`` holds canonical coordinates on its last axis.
    """
    bound = max(denominator * max_abs(coords), max_abs(numerators) * max_abs(norms))
    head, numerators, norms = widen(bound, coords[..., 0], numerators, norms)
    same = np.asarray(head * denominator == numerators * norms, dtype=bool)
    return same & ~nonzero(coords[..., 1:])


__all__ = [
    "IntArray",
    "BoolArray",
    "Lattice",
    "max_abs",
    "widen",
    "to_lattice",
    "to_scalar",
    "canonical",
    "nonzero",
    "conjugate",
    "cyclic_product",
    "abs_squared",
    "gram",
    "paired_inner",
    "apply_monomial",
    "equals_rational",
]
