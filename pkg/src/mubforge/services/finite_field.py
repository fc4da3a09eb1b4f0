"""Galois field arithmetic for GF(p^n) built from a primitive polynomial.

Elements are carried both as a power of the primitive element ``alpha`` and as
a coefficient vector over the polynomial basis ``1, alpha, ..., alpha^(n-1)``.
Multiplication works on powers, addition on coefficients; the Jacobi
(Zech) logarithm table ties the two together and serves as a cross-check.

The element at position ``k`` of the power-ordered basis used throughout the
package is ``0`` for ``k = 0`` and ``alpha^k`` for ``k = 1..d-1`` (so ``1``
sits at position ``d - 1``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from loguru import logger

from mubforge.config import get_settings
from mubforge.services.cyclotomic import CycloScalar, conductor_for, omega
from mubforge.types import Digits
from mubforge.utils.errors import (
    BoundExceeded,
    ConstructionError,
    FieldMismatch,
    NotPrime,
    SingularBasis,
)
from mubforge.utils.logging import log_stage

# Pinned moduli (constant-first coefficients) matching the d=4, 8, 9 tables in tests/golden.
CANONICAL_MODULI: dict[tuple[int, int], Digits] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 1, 1),
}


def is_prime(value: int) -> bool:
    """Return whether ``value`` is a prime number."""
    if value < 2:
        return False
    if value < 4:
        return True
    if value % 2 == 0:
        return False
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of GF(p^n) with its lookup tables.

    Attributes
    ----------
    p, n, d:
        Characteristic, extension degree and order ``d = p^n``.
    modulus:
        Monic primitive polynomial, constant coefficient first (length ``n+1``).
    add_table:
        Jacobi logarithm ``L`` of length ``d-1``: ``1 + alpha^m = alpha^L(m)``,
        ``None`` where the sum vanishes.

    """

    p: int
    n: int
    d: int
    modulus: Digits
    add_table: tuple[int | None, ...] = field(repr=False)
    power_coeffs: tuple[Digits, ...] = field(repr=False, compare=False)
    coeffs_power: dict[Digits, int] = field(repr=False, compare=False, hash=False)
    trace_table: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        """Order ``d - 1`` of the multiplicative group."""
        return self.d - 1

    @property
    def conductor(self) -> int:
        """Conductor of the cyclotomic ring holding this field's characters."""
        return conductor_for(self.p)

    def zero(self) -> "FieldElement":
        """Return the additive identity."""
        return FieldElement(self, None, (0,) * self.n)

    def one(self) -> "FieldElement":
        """Return the multiplicative identity."""
        return self.power(0)

    def power(self, k: int) -> "FieldElement":
        """Return ``alpha^k`` with ``k`` reduced modulo ``d - 1``."""
        k %= self.order
        return FieldElement(self, k, self.power_coeffs[k])

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        """Return the element with polynomial-basis coefficients ``coeffs``."""
        digits = tuple(int(c) % self.p for c in coeffs)
        if len(digits) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(digits)}")
        if not any(digits):
            return self.zero()
        return FieldElement(self, self.coeffs_power[digits], digits)

    def from_int(self, value: int) -> "FieldElement":
        """Return the prime-field element ``value mod p``."""
        return self.from_coeffs((value,) + (0,) * (self.n - 1))

    def at_position(self, position: int) -> "FieldElement":
        """Return the element labelling position ``position`` of the power-ordered basis."""
        if position == 0:
            return self.zero()
        return self.power(position)

    def position_of(self, element: "FieldElement") -> int:
        """Inverse of :meth:`at_position`."""
        if element.power is None:
            return 0
        return element.power if element.power != 0 else self.order

    def elements(self) -> Iterator["FieldElement"]:
        """Yield all ``d`` elements in power order (``0, alpha, ..., alpha^(d-1) = 1``)."""
        for position in range(self.d):
            yield self.at_position(position)


@dataclass(frozen=True)
class FieldElement:
    """Element of GF(p^n); ``power`` is ``None`` for zero."""

    spec: FieldSpec = field(repr=False)
    power: int | None
    coeffs: Digits

    def is_zero(self) -> bool:
        """Return whether the element is zero."""
        return self.power is None

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return add(self, negate(other))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __neg__(self) -> "FieldElement":
        return negate(self)


class BasisKind(str, Enum):
    """Supported GF(p^n) bases over Z_p."""

    POLYNOMIAL = "polynomial"
    NORMAL = "normal"


@dataclass(frozen=True)
class FieldBasis:
    """Basis of GF(p^n) over Z_p with the data needed to expand elements."""

    kind: BasisKind
    generators: tuple[FieldElement, ...]
    inverse: tuple[Digits, ...] = field(repr=False, compare=False)

    @property
    def spec(self) -> FieldSpec:
        """Field the basis belongs to."""
        return self.generators[0].spec


def _poly_mulmod_x(coeffs: list[int], modulus: Digits, p: int) -> list[int]:
    """Multiply a reduced polynomial by the indeterminate modulo ``modulus``."""
    n = len(modulus) - 1
    carry = coeffs[-1]
    shifted = [0] + coeffs[:-1]
    return [(shifted[i] - carry * modulus[i]) % p for i in range(n)]


def _power_sequence(modulus: Digits, p: int, limit: int) -> list[Digits] | None:
    """Return ``alpha^0 .. alpha^(order-1)`` when alpha has order ``limit``, else ``None``."""
    n = len(modulus) - 1
    current = [1] + [0] * (n - 1)
    start = tuple(current)
    powers = [start]
    for step in range(1, limit + 1):
        current = _poly_mulmod_x(current, modulus, p)
        value = tuple(current)
        if value == start:
            return powers if step == limit else None
        if not any(value):
            return None
        powers.append(value)
    return None


def _poly_divides(divisor: Sequence[int], dividend: Sequence[int], p: int) -> bool:
    remainder = list(dividend)
    deg = len(divisor) - 1
    lead_inv = pow(divisor[-1], -1, p)
    for shift in range(len(remainder) - 1 - deg, -1, -1):
        factor = (remainder[shift + deg] * lead_inv) % p
        if factor:
            for i, c in enumerate(divisor):
                remainder[shift + i] = (remainder[shift + i] - factor * c) % p
    return not any(remainder)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive factor test: no monic factor of degree ``1..n//2`` divides ``modulus``."""
    n = len(modulus) - 1
    for degree in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=degree):
            if _poly_divides(tuple(tail) + (1,), modulus, p):
                return False
    return True


def is_primitive(modulus: Sequence[int], p: int) -> bool:
    """Return whether ``alpha`` has multiplicative order exactly ``p^n - 1``."""
    n = len(modulus) - 1
    if modulus[-1] != 1 or modulus[0] % p == 0:
        return False
    return _power_sequence(tuple(modulus), p, p**n - 1) is not None


def _find_modulus(p: int, n: int) -> Digits:
    if (p, n) in CANONICAL_MODULI:
        return CANONICAL_MODULI[(p, n)]
    for head in itertools.product(range(p), repeat=n):
        candidate = tuple(head) + (1,)
        if is_primitive(candidate, p):
            return candidate
    raise ConstructionError(f"no primitive polynomial of degree {n} over Z_{p}")


def _jacobi_table(p: int, powers: Sequence[Digits], index: dict[Digits, int]) -> list[int | None]:
    one = powers[0]
    table: list[int | None] = []
    for m, value in enumerate(powers):
        total = tuple((a + b) % p for a, b in zip(one, value))
        table.append(index.get(total) if any(total) else None)
        if any(total) and total not in index:
            raise ConstructionError(f"sum 1 + alpha^{m} missing from the power table")
    return table


def _trace_table(p: int, n: int, powers: Sequence[Digits]) -> list[int]:
    order = len(powers)
    traces = []
    for k in range(order):
        total = [0] * n
        exponent = k
        for _ in range(n):
            for i, c in enumerate(powers[exponent % order]):
                total[i] = (total[i] + c) % p
            exponent *= p
        if any(total[1:]):
            raise ConstructionError(f"trace of alpha^{k} is not in the prime field")
        traces.append(total[0])
    return traces


def build_field(p: int, n: int, *, bound: int | None = None) -> FieldSpec:
    """Construct GF(p^n) from its canonical primitive polynomial.

    Parameters
    ----------
    p:
        Characteristic; must be prime.
    n:
        Extension degree, ``n >= 1``.
    bound:
        Largest accepted order ``p^n``; defaults to ``Settings.max_field_order``.

    """
    if not is_prime(p):
        raise NotPrime("p must be prime", details={"p": p})
    if n < 1:
        raise BoundExceeded("n must be a positive integer", details={"n": n})
    limit = bound if bound is not None else get_settings().max_field_order
    d = p**n
    if d > limit:
        raise BoundExceeded(
            f"p^n = {d} exceeds the configured bound {limit}",
            details={"p": p, "n": n, "bound": limit},
        )
    with log_stage("field.build"):
        modulus = _find_modulus(p, n)
        powers = _power_sequence(modulus, p, d - 1)
        if powers is None:
            raise ConstructionError(f"modulus {modulus} is not primitive over Z_{p}")
        index = {value: k for k, value in enumerate(powers)}
        spec = FieldSpec(
            p=p,
            n=n,
            d=d,
            modulus=modulus,
            add_table=tuple(_jacobi_table(p, powers, index)),
            power_coeffs=tuple(powers),
            coeffs_power=index,
            trace_table=tuple(_trace_table(p, n, powers)),
        )
        logger.bind(p=p, n=n, modulus=list(modulus)).debug("field.modulus")
    return spec


def ensure_dimension(p: int, n: int, *, bound: int | None = None) -> int:
    """Return ``d = p^n`` after checking it against ``MUBFORGE_MAX_D``."""
    if not is_prime(p):
        raise NotPrime("p must be prime", details={"p": p})
    if n < 1:
        raise BoundExceeded("n must be a positive integer", details={"n": n})
    limit = bound if bound is not None else get_settings().max_dimension
    d = p**n
    if d > limit:
        raise BoundExceeded(
            f"d = {d} exceeds MUBFORGE_MAX_D = {limit}",
            details={"p": p, "n": n, "bound": limit},
        )
    return d


def _same_field(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec is not b.spec and a.spec != b.spec:
        raise FieldMismatch(
            "elements belong to different fields",
            details={"left": [a.spec.p, a.spec.n], "right": [b.spec.p, b.spec.n]},
        )
    return a.spec


def jacobi_add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field sum computed only from powers and the Jacobi logarithm."""
    spec = _same_field(a, b)
    if a.power is None:
        return b
    if b.power is None:
        return a
    log = spec.add_table[(b.power - a.power) % spec.order]
    if log is None:
        return spec.zero()
    return spec.power(a.power + log)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field sum by coefficient addition modulo ``p``."""
    spec = _same_field(a, b)
    result = spec.from_coeffs([x + y for x, y in zip(a.coeffs, b.coeffs)])
    if get_settings().debug_verify and jacobi_add(a, b) != result:
        raise ConstructionError(
            "coefficient and Jacobi additions disagree",
            details={"left": a.power, "right": b.power},
        )
    return result


def negate(a: FieldElement) -> FieldElement:
    """Additive inverse."""
    return a.spec.from_coeffs([-c for c in a.coeffs])


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field product by adding power indices modulo ``d - 1``."""
    spec = _same_field(a, b)
    if a.power is None or b.power is None:
        return spec.zero()
    return spec.power(a.power + b.power)


def scale(a: FieldElement, c: int) -> FieldElement:
    """Multiply by the prime-field scalar ``c``."""
    return a.spec.from_coeffs([c * x for x in a.coeffs])


def field_trace(a: FieldElement) -> int:
    """Return ``tr(a) = a + a^p + ... + a^(p^(n-1))`` as an integer in ``0..p-1``."""
    if a.power is None:
        return 0
    return a.spec.trace_table[a.power]


def character(a: FieldElement, d: int | None = None) -> CycloScalar:
    """Return the additive character ``chi(a) = exp(2 pi i tr(a) / p)`` exactly.

    ``d`` is the ambient dimension recorded on the scalar; it defaults to the
    field order.
    """
    spec = a.spec
    return omega(spec.p, field_trace(a), d if d is not None else spec.d)


def _rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    matrix = [list(row) for row in rows]
    rank = 0
    cols = len(matrix[0]) if matrix else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] % p), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        inv = pow(matrix[rank][col], -1, p)
        matrix[rank] = [(x * inv) % p for x in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] % p:
                factor = matrix[r][col]
                matrix[r] = [(x - factor * y) % p for x, y in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def _invert_mod_p(columns: Sequence[Digits], p: int) -> tuple[Digits, ...]:
    """Invert the matrix whose columns are ``columns``; returns rows of the inverse."""
    n = len(columns)
    augmented = [
        [columns[j][i] for j in range(n)] + [1 if i == k else 0 for k in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if augmented[r][col] % p), None)
        if pivot is None:
            raise SingularBasis("basis generators are linearly dependent over Z_p")
        augmented[col], augmented[pivot] = augmented[pivot], augmented[col]
        inv = pow(augmented[col][col], -1, p)
        augmented[col] = [(x * inv) % p for x in augmented[col]]
        for r in range(n):
            if r != col and augmented[r][col] % p:
                factor = augmented[r][col]
                augmented[r] = [(x - factor * y) % p for x, y in zip(augmented[r], augmented[col])]
    return tuple(tuple(row[n:]) for row in augmented)


def make_basis(kind: BasisKind, generators: Sequence[FieldElement]) -> FieldBasis:
    """Validate ``generators`` and return the basis; raises :class:`SingularBasis`."""
    if not generators:
        raise SingularBasis("a basis needs at least one generator")
    spec = generators[0].spec
    if len(generators) != spec.n:
        raise SingularBasis(
            f"GF({spec.d}) needs {spec.n} generators, got {len(generators)}",
            details={"n": spec.n},
        )
    columns = [g.coeffs for g in generators]
    if _rank_mod_p(columns, spec.p) != spec.n:
        raise SingularBasis(
            "basis generators are linearly dependent over Z_p",
            details={"powers": [g.power for g in generators]},
        )
    return FieldBasis(kind, tuple(generators), _invert_mod_p(columns, spec.p))


def polynomial_basis(spec: FieldSpec) -> FieldBasis:
    """Return ``{1, alpha, ..., alpha^(n-1)}``."""
    return make_basis(BasisKind.POLYNOMIAL, [spec.power(k) for k in range(spec.n)])


def _conjugates(spec: FieldSpec, k: int) -> list[FieldElement]:
    return [spec.power(k * spec.p**i) for i in range(spec.n)]


def normal_bases(spec: FieldSpec) -> list[FieldBasis]:
    """Return every normal basis ``{beta, beta^p, ...}``, ``beta = alpha^k``, ascending ``k``."""
    bases = []
    for k in range(spec.order):
        conjugates = _conjugates(spec, k)
        if _rank_mod_p([g.coeffs for g in conjugates], spec.p) == spec.n:
            bases.append(make_basis(BasisKind.NORMAL, conjugates))
    return bases


def find_normal_basis(spec: FieldSpec) -> FieldBasis:
    """Return the normal basis generated by ``alpha^k`` for the smallest admissible ``k``."""
    for k in range(spec.order):
        conjugates = _conjugates(spec, k)
        if _rank_mod_p([g.coeffs for g in conjugates], spec.p) == spec.n:
            return make_basis(BasisKind.NORMAL, conjugates)
    raise ConstructionError(f"GF({spec.d}) has no normal basis among powers of alpha")


def basis_for(spec: FieldSpec, kind: BasisKind | str) -> FieldBasis:
    """Return the polynomial basis or the first normal basis."""
    if BasisKind(kind) is BasisKind.POLYNOMIAL:
        return polynomial_basis(spec)
    return find_normal_basis(spec)


def expand(a: FieldElement, basis: FieldBasis) -> Digits:
    """Return the unique digits ``c`` with ``a = sum_l c_l * generator_l``."""
    spec = _same_field(a, basis.generators[0])
    return tuple(
        sum(row[j] * a.coeffs[j] for j in range(spec.n)) % spec.p for row in basis.inverse
    )


def combine(digits: Sequence[int], basis: FieldBasis) -> FieldElement:
    """Recombine digits into the element they describe."""
    spec = basis.spec
    total = [0] * spec.n
    for digit, generator in zip(digits, basis.generators):
        for i, c in enumerate(generator.coeffs):
            total[i] += digit * c
    return spec.from_coeffs(total)


def is_self_dual(basis: FieldBasis) -> bool:
    """Return whether ``tr(g_l g_m) = delta_lm`` for the basis generators."""
    gens = basis.generators
    return all(
        field_trace(mul(g, h)) == (1 if i == j else 0)
        for i, g in enumerate(gens)
        for j, h in enumerate(gens)
    )


__all__ = [
    "CANONICAL_MODULI",
    "FieldSpec",
    "FieldElement",
    "FieldBasis",
    "BasisKind",
    "is_prime",
    "is_irreducible",
    "is_primitive",
    "build_field",
    "ensure_dimension",
    "add",
    "jacobi_add",
    "negate",
    "mul",
    "scale",
    "field_trace",
    "character",
    "make_basis",
    "polynomial_basis",
    "normal_bases",
    "find_normal_basis",
    "basis_for",
    "expand",
    "combine",
    "is_self_dual",
]
