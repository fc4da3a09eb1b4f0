"""Complete families of mutually unbiased bases and their exact verification.

Three construction routes are available:

* ``prime_fv`` (prime ``d``): the computational basis plus the columns of
  ``V^dagger^m F`` for ``m = 0..d-1``;
* ``odd_composite_vf`` (odd ``p``): the computational basis, the columns of
  ``F^dagger`` and the columns of ``V_r^(0)^dagger F^dagger``;
* ``even_joint_diag`` (``p = 2``): joint eigenbases of each commuting class
  obtained by splitting the space with exact spectral projectors.

Every family is checked before it is returned: vectors are orthonormal,
cross-basis overlaps squared are exactly ``1/d`` and each vector is a joint
eigenvector of the class it comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from loguru import logger

from mubforge.services.cyclotomic import (
    CycloScalar,
    c_conj,
    c_div,
    c_inv,
    c_mul,
    conductor_for,
    from_rational,
    is_root_of_unity,
    monomial_form,
    one,
    root_of_unity,
    sqrt_rational,
    zero,
)
from mubforge.services.finite_field import FieldSpec, build_field, ensure_dimension
from mubforge.services.lattice import (
    BoolArray,
    IntArray,
    Lattice,
    abs_squared,
    apply_monomial,
    canonical,
    cyclic_product,
    equals_rational,
    gram,
    max_abs,
    nonzero,
    paired_inner,
    to_lattice,
    to_scalar,
    widen,
)
from mubforge.services.matrix_core import (
    CMatrix,
    CVector,
    identity,
    inner,
    mat_adjoint,
    mat_apply,
    mat_equal,
    mat_mul,
    mat_pow,
    mat_scale,
    vec_scale,
)
from mubforge.services.weyl_operators import (
    ClassId,
    ClassKind,
    CommutingClass,
    OperatorLabel,
    build_F,
    build_Vqr,
    composite_classes,
    prime_classes,
    prime_fourier,
    prime_V,
)
from mubforge.utils.errors import ConstructionError, UnsupportedCharacteristic
from mubforge.utils.logging import log_stage


class Route(str, Enum):
    """Construction route of a family."""

    PRIME_FV = "prime_fv"
    ODD_COMPOSITE_VF = "odd_composite_vf"
    EVEN_JOINT_DIAG = "even_joint_diag"


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis diagonalising one commuting class."""

    dim: int
    vectors: tuple[CVector, ...]
    provenance: ClassId
    ordering_tag: str


@dataclass(frozen=True)
class MubFamily:
    """``d + 1`` bases together with the classes they diagonalise (same order)."""

    dim: int
    bases: tuple[Basis, ...]
    route: Route
    classes: tuple[CommutingClass, ...] = field(repr=False, compare=False, default=())


@dataclass(frozen=True)
class OverlapViolation:
    """A vector pair whose overlap squared differs from the expected value."""

    basis_a: int
    vec_i: int
    basis_b: int
    vec_j: int
    overlap_sq: CycloScalar
    expected: Fraction


@dataclass(frozen=True)
class EigenViolation:
    """A basis vector that is not an eigenvector of a member of its class."""

    basis: int
    vec: int
    member: OperatorLabel


def computational_basis(d: int, m: int) -> tuple[CVector, ...]:
    """Return the unit vectors ``e_0 .. e_(d-1)``."""
    unit, nil = one(m, d), zero(m, d)
    return tuple(CVector(d, tuple(unit if i == j else nil for i in range(d))) for j in range(d))


def columns(matrix: CMatrix) -> tuple[CVector, ...]:
    """Return the columns of ``matrix``."""
    return tuple(matrix.column(j) for j in range(matrix.dim))


def canonicalize_phase(v: CVector) -> CVector:
    """Rotate ``v`` so its first nonzero entry is a positive rational over ``sqrt(d)^k``.

    Vectors whose leading entry is not a rational multiple of a root of unity
    are returned unchanged.
    """
    index = v.first_nonzero()
    if index is None:
        return v
    lead = v.entries[index]
    form = monomial_form(lead)
    if form is None:
        return v
    r, j = form
    phase = root_of_unity(lead.m, -j, lead.d)
    if r < 0:
        phase = c_mul(phase, from_rational(-1, lead.m, lead.d))
    if j == 0 and r > 0:
        return v
    return vec_scale(v, phase)


def eigenvalue_of(matrix: CMatrix, v: CVector) -> CycloScalar | None:
    """Return ``lam`` with ``matrix v = lam v`` exactly, or ``None``."""
    image = mat_apply(matrix, v)
    index = v.first_nonzero()
    if index is None:
        return None
    lam = c_div(image.entries[index], v.entries[index])
    for x, y in zip(image.entries, v.entries):
        if x != c_mul(lam, y):
            return None
    return lam


def _basis_from(matrix: CMatrix, provenance: ClassId, tag: str) -> Basis:
    return Basis(
        matrix.dim,
        tuple(canonicalize_phase(v) for v in columns(matrix)),
        provenance,
        tag,
    )


def verify_unbiased(family: MubFamily) -> list[OverlapViolation]:
    """Check orthonormality within bases and overlaps ``1/d`` across bases.

    Violations come sorted by ``(basis_a, basis_b, vec_i, vec_j)``.
    """
    d = family.dim
    sizes = [len(basis.vectors) for basis in family.bases]
    owner = np.repeat(np.arange(len(sizes)), sizes)
    position = np.concatenate([np.arange(size) for size in sizes])
    with log_stage("mubs.verify"):
        vectors = to_lattice([v.entries for basis in family.bases for v in basis.vectors])
        squares = canonical(abs_squared(gram(vectors, vectors)))
        same_basis = owner[:, None] == owner[None, :]
        same_vector = same_basis & (position[:, None] == position[None, :])
        # Targets in units of 1/d: d on the diagonal, 0 inside a basis, 1 across bases.
        expected = np.where(same_basis, np.where(same_vector, d, 0), 1)
        (norms,) = widen(max_abs(vectors.norms) ** 2, vectors.norms)
        scale = np.multiply.outer(norms, norms)
        ok = equals_rational(squares, scale, expected, d)
        violations = [
            OverlapViolation(
                int(owner[a]),
                int(position[a]),
                int(owner[b]),
                int(position[b]),
                to_scalar(squares[a, b], scale[a, b], vectors.m, d),
                Fraction(int(expected[a, b]), d),
            )
            for a, b in np.argwhere(np.triu(~ok))
        ]
        violations.sort(key=lambda v: (v.basis_a, v.basis_b, v.vec_i, v.vec_j))
        logger.bind(d=d, violations=len(violations)).debug("mubs.overlaps_checked")
    return violations


@lru_cache(maxsize=None)
def _is_phase(m: int, d: int, coeffs: tuple[Fraction, ...], scale_k: int) -> bool:
    return is_root_of_unity(CycloScalar(m, coeffs, scale_k, d))


def _phase_pattern(matrix: CMatrix) -> tuple[tuple[int, ...], Lattice] | None:
    """Columns and entries of a monomial matrix whose entries are roots of unity."""
    pattern = matrix.monomial
    if pattern is None:
        return None
    cols, values = pattern
    if not all(_is_phase(x.m, x.d, x.coeffs, x.scale_k) for x in values):
        return None
    return cols, to_lattice([values])


def _eigen_mask(vectors: Lattice, cols: tuple[int, ...], values: Lattice) -> BoolArray:
    """Which vectors are eigenvectors of the monomial matrix ``(cols, values)``.

    Such a matrix has finite order, so every eigenvalue is a root of unity and
    ``v`` is an eigenvector exactly when ``|<v|Mv>|^2 = <v|v> <Mv|Mv>``.
    """
    image = apply_monomial(vectors, cols, values)
    overlap = abs_squared(paired_inner(vectors.coords, image.coords))
    own = paired_inner(vectors.coords, vectors.coords)
    bound = cyclic_product(own, paired_inner(image.coords, image.coords))
    equal = ~nonzero(canonical(overlap - bound))
    return np.asarray(equal & nonzero(canonical(own)), dtype=bool)


def eigenbasis_violations(family: MubFamily) -> list[EigenViolation]:
    """Check every vector against every member of its provenance class."""
    found: list[tuple[int, int, int, EigenViolation]] = []
    for index, (basis, cls) in enumerate(zip(family.bases, family.classes)):
        vectors = to_lattice([v.entries for v in basis.vectors])
        for order, (label, matrix) in enumerate(cls.members):
            pattern = _phase_pattern(matrix)
            if pattern is not None:
                failed = np.flatnonzero(~_eigen_mask(vectors, *pattern)).tolist()
            else:
                failed = []
                for vec_index, v in enumerate(basis.vectors):
                    lam = eigenvalue_of(matrix, v)
                    if lam is None or not is_root_of_unity(lam):
                        failed.append(vec_index)
            found.extend(
                (index, vec_index, order, EigenViolation(index, vec_index, label))
                for vec_index in failed
            )
    found.sort(key=lambda item: item[:3])
    return [violation for *_, violation in found]


@dataclass(frozen=True)
class FamilyAudit:
    """Outcome of the overlap and eigenvector checks over one family."""

    overlaps: tuple[OverlapViolation, ...]
    eigen: tuple[EigenViolation, ...]

    @property
    def passed(self) -> bool:
        """Whether both checks came back clean."""
        return not self.overlaps and not self.eigen


def audit(family: MubFamily) -> FamilyAudit:
    """Run both family checks."""
    return FamilyAudit(tuple(verify_unbiased(family)), tuple(eigenbasis_violations(family)))


def _check_count(family: MubFamily) -> None:
    if len(family.bases) != family.dim + 1:
        raise ConstructionError(
            f"expected {family.dim + 1} bases, built {len(family.bases)}",
            details={"d": family.dim},
        )


def _raise_if_failed(family: MubFamily, result: FamilyAudit) -> MubFamily:
    if not result.passed:
        raise ConstructionError(
            "constructed family failed verification",
            details={
                "d": family.dim,
                "route": family.route.value,
                "overlap_violations": len(result.overlaps),
                "eigen_violations": len(result.eigen),
            },
        )
    return family


def _ensure_valid(family: MubFamily) -> MubFamily:
    _check_count(family)
    return _raise_if_failed(family, audit(family))


def mubs_prime(d: int, *, verify: bool = True) -> MubFamily:
    """Return the ``d + 1`` bases of prime dimension ``d``.

    Basis ``m + 1`` consists of the columns of ``V^dagger^m F``, the
    eigenvectors of ``X Z^m`` (``V^dagger X V = X Z``).
    """
    classes = prime_classes(d)
    with log_stage("mubs.build"):
        m = conductor_for(d)
        fourier = prime_fourier(d)
        v_dagger = mat_adjoint(prime_V(d))
        bases = [Basis(d, computational_basis(d, m), classes[0].class_id, "computational")]
        for power in range(d):
            matrix = mat_mul(mat_pow(v_dagger, power), fourier)
            bases.append(
                _basis_from(matrix, classes[power + 1].class_id, f"columns of V^dagger^{power} F")
            )
        family = MubFamily(d, tuple(bases), Route.PRIME_FV, classes)
    return _ensure_valid(family) if verify else family


def mubs_odd_composite(spec: FieldSpec, *, verify: bool = True) -> MubFamily:
    """Return the GF(p^n) family (``p`` odd) from ``F^dagger`` and ``V_r^(0)^dagger F^dagger``."""
    if spec.p == 2:
        raise UnsupportedCharacteristic(
            "odd-characteristic route called with p = 2; use mubs_even_composite",
            details={"p": spec.p, "n": spec.n},
        )
    classes = composite_classes(spec)
    with log_stage("mubs.build"):
        d, m = spec.d, spec.conductor
        f_dagger = mat_adjoint(build_F(spec))
        bases = [
            Basis(d, computational_basis(d, m), ClassId(ClassKind.DIAGONAL), "power order"),
            _basis_from(f_dagger, ClassId(ClassKind.SHIFT), "columns of F^dagger"),
        ]
        for r in range(spec.order):
            matrix = mat_mul(mat_adjoint(build_Vqr(spec, r, 0)), f_dagger)
            bases.append(
                _basis_from(
                    matrix, ClassId(ClassKind.MIXED, r), f"columns of V_{r}^(0)^dagger F^dagger"
                )
            )
        family = MubFamily(d, tuple(bases), Route.ODD_COMPOSITE_VF, classes)
    return _ensure_valid(family) if verify else family


def _spectral_exponents(matrix: CMatrix, ident: CMatrix) -> tuple[int, int]:
    """Exponents ``j`` of the eigenvalues ``i^j`` of a member squaring to ``+-I``."""
    square = mat_mul(matrix, matrix)
    if mat_equal(square, ident):
        return (0, 2)
    if mat_equal(square, mat_scale(ident, from_rational(-1, ident.m, ident.d))):
        return (1, 3)
    raise ConstructionError("class member does not square to +-I")


def _unit_pattern(matrix: CMatrix) -> tuple[IntArray, IntArray]:
    pattern = _phase_pattern(matrix)
    if pattern is None:
        raise ConstructionError(
            "joint diagonalisation needs monomial members with root-of-unity entries"
        )
    cols, values = pattern
    return np.asarray(cols, dtype=np.intp), values.coords[0]


def _diagonal_of(coords: IntArray) -> IntArray:
    span = np.arange(coords.shape[0])
    return coords[span, span]


def _vector_from_projector(coords: IntArray, denominator: int, m: int, d: int) -> CVector:
    """Unit vector spanning the rank-one projector ``coords / denominator``."""
    diagonal = _diagonal_of(coords)
    trace = to_scalar(diagonal.sum(axis=0), denominator, m, d).rational_part()
    if trace != 1:
        raise ConstructionError(
            "joint eigenspace refinement ended with a subspace of dimension != 1",
            details={"trace": str(trace)},
        )
    index = int(np.flatnonzero(nonzero(diagonal))[0])
    weight = to_scalar(diagonal[index], denominator, m, d).rational_part()
    if weight is None:
        raise ConstructionError("projector diagonal entry is not rational")
    column = CVector(
        d, tuple(to_scalar(coords[i, index], denominator, m, d) for i in range(d))
    )
    norm = sqrt_rational(weight, m, d)
    return canonicalize_phase(vec_scale(column, c_inv(norm)))


def joint_eigenbasis(members: Sequence[tuple[OperatorLabel, CMatrix]]) -> tuple[CVector, ...]:
    """Joint eigenbasis of commuting monomial members whose squares are ``+-I``.

    Members are processed in the given order; eigenvalues ``i^j`` are split in
    increasing ``j`` so vectors come out sorted lexicographically by their
    eigenvalue tuples. Projectors are integer coordinate arrays over a common
    denominator.
    """
    first = members[0][1]
    d, m = first.dim, first.m
    ident = identity(d, m, d)
    start = np.zeros((d, d, m), dtype=np.int64)
    start[np.arange(d), np.arange(d), 0] = 1
    projectors: list[tuple[IntArray, int]] = [(start, 1)]
    for _, matrix in members:
        if len(projectors) == d:
            # Rank-one projectors are fixed by every remaining member.
            break
        exponents = _spectral_exponents(matrix, ident)
        cols, values = _unit_pattern(matrix)
        refined: list[tuple[IntArray, int]] = []
        for coords, denominator in projectors:
            product = cyclic_product(coords, values[None])
            moved = np.empty_like(product)
            moved[:, cols] = product
            trace, moved_trace = _diagonal_of(coords).sum(axis=0), _diagonal_of(moved).sum(axis=0)
            for j in exponents:
                # P (I + i^-j M) / 2; an empty eigenspace shows up as a zero trace.
                if not nonzero(canonical(trace + np.roll(moved_trace, -j))):
                    continue
                candidate = canonical(coords + np.roll(moved, -j, axis=-1))
                common = math.gcd(2 * denominator, *np.unique(np.abs(candidate)).tolist())
                refined.append((candidate // common, 2 * denominator // common))
        projectors = refined
    if len(projectors) != d:
        raise ConstructionError(
            f"refinement produced {len(projectors)} eigenspaces instead of {d}",
            details={"d": d},
        )
    return tuple(
        _vector_from_projector(coords, denominator, m, d) for coords, denominator in projectors
    )


def mubs_even_composite(spec: FieldSpec, *, verify: bool = True) -> MubFamily:
    """Return the family of GF(2^n), ``n >= 2``, by exact joint diagonalisation."""
    if spec.p != 2 or spec.n < 2:
        raise UnsupportedCharacteristic(
            "joint diagonalisation route needs p = 2 and n >= 2",
            details={"p": spec.p, "n": spec.n},
        )
    classes = composite_classes(spec)
    with log_stage("mubs.build"):
        bases = []
        for cls in classes:
            ordered = sorted(cls.members, key=lambda member: member[0].first)
            bases.append(
                Basis(
                    spec.d,
                    joint_eigenbasis(ordered),
                    cls.class_id,
                    "eigenvalue tuples, lexicographic over members sorted by q",
                )
            )
        family = MubFamily(spec.d, tuple(bases), Route.EVEN_JOINT_DIAG, classes)
    return _ensure_valid(family) if verify else family


@lru_cache(maxsize=16)
def _built_family(p: int, n: int) -> MubFamily:
    if n == 1:
        return mubs_prime(p, verify=False)
    spec = build_field(p, n)
    if p == 2:
        return mubs_even_composite(spec, verify=False)
    return mubs_odd_composite(spec, verify=False)


@lru_cache(maxsize=16)
def audit_family(p: int, n: int) -> FamilyAudit:
    """Audit of the ``(p, n)`` family; computed once and shared with :func:`mubs_for`."""
    ensure_dimension(p, n)
    return audit(_built_family(p, n))


def mubs_for(p: int, n: int, *, verify: bool = True) -> MubFamily:
    """Route ``(p, n)`` to the construction that applies.

    Each family is built at most once per process and the same instance is
    returned on later calls.
    """
    ensure_dimension(p, n)
    family = _built_family(p, n)
    if verify:
        _check_count(family)
        _raise_if_failed(family, audit_family(p, n))
    return family


def natural_order_targets(spec: FieldSpec) -> list[int]:
    """For a prime field, map power-order positions to the integer labels ``0..p-1``."""
    if spec.n != 1:
        raise UnsupportedCharacteristic("natural ordering exists only for prime fields")
    return [spec.at_position(k).coeffs[0] for k in range(spec.d)]


def relabel(v: CVector, targets: Sequence[int]) -> CVector:
    """Return ``P v`` with ``P|k> = |targets[k]>``."""
    entries = list(v.entries)
    for k, target in enumerate(targets):
        entries[target] = v.entries[k]
    return CVector(v.dim, tuple(entries))


def _parallel(u: CVector, w: CVector) -> bool:
    product = inner(u, w)
    return c_mul(product, c_conj(product)) == one(product.m, product.d)


def same_eigenspaces(
    left: MubFamily, right: MubFamily, targets: Sequence[int] | None = None
) -> bool:
    """Return whether every basis of ``left`` matches some basis of ``right`` up to phases.

    ``targets`` optionally relabels the vectors of ``left`` first.
    """
    for basis in left.bases:
        vectors = [relabel(v, targets) if targets else v for v in basis.vectors]
        if not any(
            all(any(_parallel(u, w) for w in other.vectors) for u in vectors)
            for other in right.bases
        ):
            return False
    return True


__all__ = [
    "Route",
    "Basis",
    "MubFamily",
    "OverlapViolation",
    "EigenViolation",
    "computational_basis",
    "columns",
    "canonicalize_phase",
    "eigenvalue_of",
    "verify_unbiased",
    "eigenbasis_violations",
    "FamilyAudit",
    "audit",
    "audit_family",
    "mubs_prime",
    "mubs_odd_composite",
    "joint_eigenbasis",
    "mubs_even_composite",
    "mubs_for",
    "natural_order_targets",
    "relabel",
    "same_eigenspaces",
]
