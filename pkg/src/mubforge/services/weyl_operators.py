"""Generalised Pauli operators and their d+1 commuting classes.

Prime dimensions use the clock ``Z``, the shift ``X``, the Fourier matrix and
the quadratic phase ``V``. Prime-power dimensions use the field operators
``Z_q`` and ``X_q`` indexed by powers of the primitive element, the field
Fourier transform and, for odd characteristic, the diagonal operators
``V_q^(r)``.

Composite-case subscripts are reduced modulo ``d - 1`` since ``alpha^(d-1) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from mubforge.services.cyclotomic import (
    CycloScalar,
    c_conj,
    c_mul,
    conductor_for,
    from_rational,
    imaginary_unit,
    inv_sqrt_d,
    omega,
    one,
)
from mubforge.services.finite_field import (
    FieldSpec,
    character,
    is_prime,
    jacobi_add,
    mul,
    scale,
)
from mubforge.services.lattice import (
    IntArray,
    Lattice,
    canonical,
    cyclic_product,
    gram,
    nonzero,
    to_lattice,
)
from mubforge.services.matrix_core import (
    CMatrix,
    commutator_is_zero,
    diagonal,
    from_rows,
    hs_inner,
    is_identity,
    is_unitary,
    mat_mul,
    mat_pow,
    mat_scale,
    permutation_matrix,
)
from mubforge.utils.errors import (
    ConstructionError,
    IndexOutOfRange,
    NotPrime,
    UnsupportedCharacteristic,
)
from mubforge.utils.logging import log_stage


class LabelKind(str, Enum):
    """Operator families."""

    PRIME_Z = "prime_z"
    PRIME_XZ = "prime_xz"
    ZQ = "z"
    XQ = "x"
    XQZR = "xz"


@dataclass(frozen=True)
class OperatorLabel:
    """Name of a class member.

    ``PRIME_Z``: ``Z^first``. ``PRIME_XZ``: ``(X Z^first)^second``.
    ``ZQ``/``XQ``: ``Z_first`` / ``X_first``. ``XQZR``: ``X_first Z_second``.
    """

    kind: LabelKind
    first: int
    second: int | None = None
    dim: int = 0

    def render(self) -> str:
        """Return the conventional operator name."""
        if self.kind is LabelKind.PRIME_Z:
            return "Z" if self.first == 1 else f"Z^{self.first}"
        if self.kind is LabelKind.PRIME_XZ:
            if self.dim == 2 and self.first == 1:
                return "Y"
            base = "X" if self.first == 0 else ("XZ" if self.first == 1 else f"XZ^{self.first}")
            if self.second == 1:
                return base
            return f"({base})^{self.second}" if self.first else f"X^{self.second}"
        if self.kind is LabelKind.ZQ:
            return f"Z_{self.first}"
        if self.kind is LabelKind.XQ:
            return f"X_{self.first}"
        return f"X_{self.first}Z_{self.second}"


def prime_z(k: int, d: int) -> OperatorLabel:
    """Label of ``Z^k`` in prime dimension ``d``."""
    return OperatorLabel(LabelKind.PRIME_Z, k % d, None, d)


def prime_xz(m: int, k: int, d: int) -> OperatorLabel:
    """Label of ``(X Z^m)^k`` in prime dimension ``d``."""
    return OperatorLabel(LabelKind.PRIME_XZ, m % d, k % d, d)


def zq_label(q: int, d: int) -> OperatorLabel:
    """Label of ``Z_q``."""
    return OperatorLabel(LabelKind.ZQ, q % (d - 1), None, d)


def xq_label(q: int, d: int) -> OperatorLabel:
    """Label of ``X_q``."""
    return OperatorLabel(LabelKind.XQ, q % (d - 1), None, d)


def xqzr_label(q: int, r: int, d: int) -> OperatorLabel:
    """Label of ``X_q Z_r``."""
    return OperatorLabel(LabelKind.XQZR, q % (d - 1), r % (d - 1), d)


class ClassKind(str, Enum):
    """Kinds of commuting classes."""

    DIAGONAL = "diagonal"
    SHIFT = "shift"
    MIXED = "mixed"


@dataclass(frozen=True)
class ClassId:
    """Identifier such as ``diagonal``, ``shift`` or ``mixed:3``."""

    kind: ClassKind
    index: int | None = None

    def __str__(self) -> str:
        return self.kind.value if self.index is None else f"{self.kind.value}:{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ClassId":
        """Parse the textual form produced by ``str``."""
        head, _, tail = text.strip().lower().partition(":")
        kind = ClassKind(head)
        if kind is ClassKind.MIXED:
            if not tail:
                raise ValueError("mixed classes need an index, e.g. mixed:0")
            return cls(kind, int(tail))
        if tail:
            raise ValueError(f"class {head} takes no index")
        return cls(kind)


@dataclass(frozen=True)
class CommutingClass:
    """Labelled set of ``d - 1`` pairwise commuting unitaries."""

    class_id: ClassId
    members: tuple[tuple[OperatorLabel, CMatrix], ...]

    @property
    def matrices(self) -> list[CMatrix]:
        """Member matrices in order."""
        return [matrix for _, matrix in self.members]


def _require_prime(d: int) -> None:
    if not is_prime(d):
        raise NotPrime("d must be prime", details={"d": d})


def _check_index(spec: FieldSpec, name: str, value: int) -> None:
    if not 0 <= value <= spec.d - 2:
        raise IndexOutOfRange(
            f"{name} must lie in 0..{spec.d - 2}", details={name: value, "d": spec.d}
        )


@lru_cache(maxsize=None)
def prime_generators(d: int) -> tuple[CMatrix, CMatrix, CycloScalar]:
    """Return the shift ``X``, the clock ``Z`` and ``omega`` for prime ``d``."""
    _require_prime(d)
    m = conductor_for(d)
    shift = permutation_matrix([(n + 1) % d for n in range(d)], m, d)
    clock = diagonal([omega(d, n, d) for n in range(d)])
    return shift, clock, omega(d, 1, d)


@lru_cache(maxsize=None)
def prime_fourier(d: int) -> CMatrix:
    """Return ``F = (1/sqrt d) sum omega^(n n') |n><n'|``."""
    _require_prime(d)
    norm = inv_sqrt_d(conductor_for(d), d)
    return from_rows(
        [[c_mul(omega(d, row * col, d), norm) for col in range(d)] for row in range(d)]
    )


@lru_cache(maxsize=None)
def prime_V(d: int) -> CMatrix:
    """Return the diagonal ``V`` with ``V^dagger X V = XZ`` (``Y`` when ``d = 2``)."""
    _require_prime(d)
    if d == 2:
        return diagonal([one(4, 2), c_mul(from_rational(-1, 4, 2), imaginary_unit(2))])
    half = (d + 1) // 2
    return diagonal([omega(d, -(n * n - n) * half, d) for n in range(d)])


def prime_member(d: int, m: int, k: int) -> CMatrix:
    """Return ``(X Z^m)^k``; for ``d = 2, m = 1`` the Hermitian ``Y = iXZ``."""
    shift, clock, _ = prime_generators(d)
    base = mat_mul(shift, mat_pow(clock, m % d))
    if d == 2 and m % 2 == 1:
        base = mat_scale(base, imaginary_unit(2))
    return mat_pow(base, k)


@lru_cache(maxsize=None)
def prime_classes(d: int) -> tuple[CommutingClass, ...]:
    """Return the ``d + 1`` classes ``{Z^k}`` and ``{(XZ^m)^k}`` for prime ``d``."""
    _require_prime(d)
    with log_stage("operators.classes"):
        _, clock, _ = prime_generators(d)
        classes = [
            CommutingClass(
                ClassId(ClassKind.DIAGONAL),
                tuple((prime_z(k, d), mat_pow(clock, k)) for k in range(1, d)),
            )
        ]
        for m in range(d):
            classes.append(
                CommutingClass(
                    ClassId(ClassKind.MIXED, m),
                    tuple((prime_xz(m, k, d), prime_member(d, m, k)) for k in range(1, d)),
                )
            )
        _raise_on_violations(classes, d)
    return tuple(classes)


@lru_cache(maxsize=None)
def build_Zq(spec: FieldSpec, q: int) -> CMatrix:
    """Return ``Z_q = |0><0| + sum_k chi(alpha^(q+k)) |alpha^k><alpha^k|``."""
    _check_index(spec, "q", q)
    values = [one(spec.conductor, spec.d)]
    values += [character(spec.power(q + k)) for k in range(1, spec.d)]
    return diagonal(values)


@lru_cache(maxsize=None)
def build_Xq(spec: FieldSpec, q: int) -> CMatrix:
    """Return the permutation ``X_q|x> = |x + alpha^q>``."""
    _check_index(spec, "q", q)
    shift = spec.power(q)
    targets = [
        spec.position_of(jacobi_add(spec.at_position(position), shift))
        for position in range(spec.d)
    ]
    return permutation_matrix(targets, spec.conductor, spec.d)


@lru_cache(maxsize=None)
def build_F(spec: FieldSpec) -> CMatrix:
    """Return the field Fourier transform ``F_yx = chi(x y) / sqrt(d)``."""
    norm = inv_sqrt_d(spec.conductor, spec.d)
    elements = list(spec.elements())
    return from_rows(
        [[c_mul(character(mul(x, y)), norm) for x in elements] for y in elements]
    )


def _half(spec: FieldSpec) -> int:
    return (spec.p + 1) // 2


@lru_cache(maxsize=None)
def build_Vqr(spec: FieldSpec, q: int, r: int) -> CMatrix:
    """Return ``V_q^(r) = |0><0| + sum_k conj(chi(2^-1 alpha^(q - r + 2k))) |alpha^k><alpha^k|``.

    Only defined for odd characteristic. ``V_(q+r)^(q)`` conjugates ``X_q``
    into ``chi(2^-1 alpha^(2q+r)) X_q Z_(q+r)``.
    """
    if spec.p == 2:
        raise UnsupportedCharacteristic(
            "V_q^(r) needs an odd characteristic; use joint diagonalisation for p = 2",
            details={"p": spec.p},
        )
    _check_index(spec, "q", q)
    _check_index(spec, "r", r)
    values = [one(spec.conductor, spec.d)]
    for k in range(1, spec.d):
        values.append(c_conj(character(scale(spec.power(q - r + 2 * k), _half(spec)))))
    return diagonal(values)


def build_XqZr(spec: FieldSpec, q: int, r: int) -> CMatrix:
    """Return the bare product ``X_q Z_r`` (subscripts reduced mod ``d - 1``)."""
    order = spec.order
    return mat_mul(build_Xq(spec, q % order), build_Zq(spec, r % order))


def mixed_phase(spec: FieldSpec, q: int, r: int) -> CycloScalar:
    """Return ``chi(2^-1 alpha^(2q + r))``."""
    return character(scale(spec.power(2 * q + r), _half(spec)))


def phased_mixed_member(spec: FieldSpec, q: int, r: int) -> CMatrix:
    """Return ``chi(2^-1 alpha^(2q+r)) X_q Z_(q+r)``, the image of ``X_q`` under ``V_(q+r)^(q)``."""
    if spec.p == 2:
        raise UnsupportedCharacteristic("phased members need an odd characteristic")
    return mat_scale(build_XqZr(spec, q, q + r), mixed_phase(spec, q, r))


@lru_cache(maxsize=None)
def composite_classes(spec: FieldSpec) -> tuple[CommutingClass, ...]:
    """Return the diagonal, shift and ``d - 1`` mixed classes of GF(p^n)."""
    d, order = spec.d, spec.order
    with log_stage("operators.classes"):
        classes = [
            CommutingClass(
                ClassId(ClassKind.DIAGONAL),
                tuple((zq_label(q, d), build_Zq(spec, q)) for q in range(order)),
            ),
            CommutingClass(
                ClassId(ClassKind.SHIFT),
                tuple((xq_label(q, d), build_Xq(spec, q)) for q in range(order)),
            ),
        ]
        for r in range(order):
            classes.append(
                CommutingClass(
                    ClassId(ClassKind.MIXED, r),
                    tuple(
                        (xqzr_label(q, q + r, d), build_XqZr(spec, q, q + r))
                        for q in range(order)
                    ),
                )
            )
        _raise_on_violations(classes, d)
    return tuple(classes)


def build_classes(spec: FieldSpec) -> tuple[CommutingClass, ...]:
    """Return the ``d + 1`` classes; prime fields use the prime-dimension construction."""
    if spec.n == 1:
        return prime_classes(spec.p)
    return composite_classes(spec)


def _monomial_parts(matrices: Sequence[CMatrix]) -> tuple[IntArray, Lattice] | None:
    """Column patterns ``(count, dim)`` and entry lattice of monomial members, else ``None``."""
    patterns = [matrix.monomial for matrix in matrices]
    if not patterns or any(pattern is None for pattern in patterns):
        return None
    present = [pattern for pattern in patterns if pattern is not None]
    cols = np.array([pattern[0] for pattern in present], dtype=np.intp)
    return cols, to_lattice([pattern[1] for pattern in present])


def _noncommuting_pairs(matrices: Sequence[CMatrix]) -> list[tuple[int, int]]:
    count = len(matrices)
    if count < 2:
        return []
    parts = _monomial_parts(matrices)
    if parts is None:
        return [
            (i, j)
            for i, j in combinations(range(count), 2)
            if not commutator_is_zero(matrices[i], matrices[j])
        ]
    cols, values = parts
    left, right = np.triu_indices(count, 1)
    # Row x of AB holds a_x b_(ca x) at column cb(ca x); row x of BA holds b_x a_(cb x).
    ab_cols = cols[right[:, None], cols[left]]
    ba_cols = cols[left[:, None], cols[right]]
    ab = cyclic_product(values.coords[left], values.coords[right[:, None], cols[left]])
    ba = cyclic_product(values.coords[right], values.coords[left[:, None], cols[right]])
    same = (ab_cols == ba_cols).all(axis=1) & ~nonzero(canonical(ab - ba)).any(axis=1)
    return [(int(i), int(j)) for i, j in zip(left[~same], right[~same])]


def _overlapping_pairs(matrices: Sequence[CMatrix]) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` with ``Tr(A_i A_j^dagger) != 0``; disjoint supports are skipped."""
    parts = _monomial_parts(matrices)
    if parts is None:
        return _overlapping_pairs_dense(matrices)
    cols, values = parts
    groups: dict[tuple[int, ...], list[int]] = {}
    for index, row in enumerate(cols.tolist()):
        groups.setdefault(tuple(row), []).append(index)
    keys = list(groups)
    found: list[tuple[int, int]] = []
    for a, key_a in enumerate(keys):
        for key_b in keys[a:]:
            shared = np.asarray(key_a) == np.asarray(key_b)
            if not shared.any():
                continue
            left = values.select(groups[key_a], shared)
            right = values.select(groups[key_b], shared)
            hits = nonzero(canonical(gram(left, right)))
            if key_a is key_b:
                hits = np.triu(hits, 1)
            for i, j in zip(*np.nonzero(hits)):
                first, second = groups[key_a][int(i)], groups[key_b][int(j)]
                found.append((min(first, second), max(first, second)))
    return found


def _overlapping_pairs_dense(matrices: Sequence[CMatrix]) -> list[tuple[int, int]]:
    groups: dict[frozenset[tuple[int, int]], list[int]] = {}
    for index, matrix in enumerate(matrices):
        positions = frozenset((i, j) for i, row in enumerate(matrix.support()) for j in row)
        groups.setdefault(positions, []).append(index)
    keys = list(groups)
    found: list[tuple[int, int]] = []
    for a, key_a in enumerate(keys):
        for key_b in keys[a:]:
            if key_a is not key_b and key_a.isdisjoint(key_b):
                continue
            pairs = (
                combinations(groups[key_a], 2)
                if key_a is key_b
                else ((i, j) for i in groups[key_a] for j in groups[key_b])
            )
            for i, j in pairs:
                if not hs_inner(matrices[i], matrices[j]).is_zero():
                    found.append((min(i, j), max(i, j)))
    return found


def class_violations(classes: Sequence[CommutingClass], d: int) -> list[str]:
    """Return descriptions of every broken class invariant (empty when all hold)."""
    problems: list[str] = []
    if len(classes) != d + 1:
        problems.append(f"expected {d + 1} classes, found {len(classes)}")
    m = conductor_for(_prime_of(d))
    expected_norm = from_rational(d, m, d)
    for cls in classes:
        if len(cls.members) != d - 1:
            problems.append(f"{cls.class_id}: expected {d - 1} members, found {len(cls.members)}")
        for label, matrix in cls.members:
            if is_identity(matrix):
                problems.append(f"{cls.class_id}: {label.render()} is the identity")
            if not is_unitary(matrix):
                problems.append(f"{cls.class_id}: {label.render()} is not unitary")
            if hs_inner(matrix, matrix) != expected_norm:
                problems.append(f"{cls.class_id}: Tr(A A^dagger) != d for {label.render()}")
        for i, j in _noncommuting_pairs(cls.matrices):
            problems.append(
                f"{cls.class_id}: {cls.members[i][0].render()} and"
                f" {cls.members[j][0].render()} do not commute"
            )
    members = [
        (str(cls.class_id), label, matrix) for cls in classes for label, matrix in cls.members
    ]
    for i, j in sorted(_overlapping_pairs([matrix for _, _, matrix in members])):
        problems.append(
            f"Tr({members[i][1].render()} {members[j][1].render()}^dagger) != 0"
            f" ({members[i][0]} vs {members[j][0]})"
        )
    return problems


def _prime_of(d: int) -> int:
    p = 2
    while d % p:
        p += 1
    return p


def _raise_on_violations(classes: Sequence[CommutingClass], d: int) -> None:
    problems = class_violations(classes, d)
    if problems:
        raise ConstructionError(
            "commuting classes failed verification", details={"problems": problems[:20]}
        )


def weyl_phase(spec: FieldSpec, q: int, q_prime: int) -> CycloScalar:
    """Return ``chi(alpha^(q + q'))``, the phase in ``Z_q X_q' = phase X_q' Z_q``."""
    return character(spec.power(q + q_prime))


def commutator_phase(spec: FieldSpec, q: int, r: int, q2: int, r2: int) -> CycloScalar:
    """Return ``chi(alpha^(q2 + r)) - chi(alpha^(q + r2))`` from the commutator formula."""
    return character(spec.power(q2 + r)) - character(spec.power(q + r2))


__all__ = [
    "LabelKind",
    "OperatorLabel",
    "prime_z",
    "prime_xz",
    "zq_label",
    "xq_label",
    "xqzr_label",
    "ClassKind",
    "ClassId",
    "CommutingClass",
    "prime_generators",
    "prime_fourier",
    "prime_V",
    "prime_member",
    "prime_classes",
    "build_Zq",
    "build_Xq",
    "build_F",
    "build_Vqr",
    "build_XqZr",
    "mixed_phase",
    "phased_mixed_member",
    "composite_classes",
    "build_classes",
    "class_violations",
    "weyl_phase",
    "commutator_phase",
]
