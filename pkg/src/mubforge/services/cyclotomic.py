"""Exact scalars of the form ``(sum_j c_j zeta_m^j) / sqrt(d)^k``.

Every matrix entry handled by the package is a :class:`CycloScalar`. The
conductor ``m`` is the characteristic ``p`` for odd ``p`` and ``4`` when
``p = 2`` (so that ``i`` is available); coefficients are arbitrary precision
:class:`fractions.Fraction` values and the ``sqrt(d)`` factors are tracked as an
integer exponent instead of being adjoined to the ring.

Canonical form
--------------
* prime ``m``: the coefficient of ``zeta^(m-1)`` is eliminated with
  ``1 + zeta + ... + zeta^(m-1) = 0``;
* ``m = 4``: the coefficients of ``zeta^2`` and ``zeta^3`` are folded with
  ``zeta^2 = -1``;
* ``scale_k`` is reduced to ``0`` or ``1`` by dividing coefficients by ``d``,
  and to ``0`` whenever ``sqrt(d)`` is an integer. Zero always has
  ``scale_k = 0``.

Two scalars of the same parity are equal exactly when their canonical forms
match. Across parities the values can only coincide when ``p = 1 (mod 4)``;
:func:`c_eq` settles that case with the quadratic Gauss sum, which equals
``sqrt(p)`` inside ``Q(zeta_p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from mubforge.utils.errors import ConductorMismatch, ConstructionError, ScaleParityError

Coefficients = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def conductor_for(p: int) -> int:
    """Return the conductor used for characteristic ``p``."""
    return 4 if p == 2 else p


def prime_of_conductor(m: int) -> int:
    """Return the characteristic served by conductor ``m``."""
    return 2 if m == 4 else m


@lru_cache(maxsize=None)
def _log_p(d: int, p: int) -> int:
    n, value = 0, 1
    while value < d:
        value *= p
        n += 1
    if value != d:
        raise ScaleParityError(
            f"dimension {d} is not a power of {p}", details={"d": d, "p": p}
        )
    return n


def _reduce(m: int, coeffs: Sequence[Fraction]) -> list[Fraction]:
    if m == 4:
        return [coeffs[0] - coeffs[2], coeffs[1] - coeffs[3], _ZERO, _ZERO]
    last = coeffs[m - 1]
    if last == 0:
        return list(coeffs)
    return [c - last for c in coeffs[: m - 1]] + [_ZERO]


def _convolve(m: int, left: Sequence[Fraction], right: Sequence[Fraction]) -> list[Fraction]:
    out = [_ZERO] * m
    for i, x in enumerate(left):
        if x == 0:
            continue
        for j, y in enumerate(right):
            if y != 0:
                out[(i + j) % m] += x * y
    return out


def _galois_image(m: int, coeffs: Sequence[Fraction], t: int) -> list[Fraction]:
    out = [_ZERO] * m
    for j, c in enumerate(coeffs):
        if c != 0:
            out[(j * t) % m] += c
    return out


@lru_cache(maxsize=None)
def _gauss_sum(p: int) -> Coefficients:
    coeffs = [_ZERO] * p
    for j in range(1, p):
        coeffs[j] = _ONE if pow(j, (p - 1) // 2, p) == 1 else -_ONE
    return tuple(coeffs)


def _gauss_absorbable(m: int, d: int) -> bool:
    p = prime_of_conductor(m)
    return p % 4 == 1 and _log_p(d, p) % 2 == 1


@dataclass(frozen=True, eq=False)
class CycloScalar:
    """Exact value ``(sum coeffs[j] zeta_m^j) / sqrt(d)^scale_k`` in canonical form.

    Build instances with :meth:`make` (or the helpers below); the constructor
    assumes its arguments are already canonical.
    """

    m: int
    coeffs: Coefficients
    scale_k: int
    d: int

    @classmethod
    def make(
        cls, m: int, d: int, coeffs: Iterable[Fraction | int], scale_k: int = 0
    ) -> "CycloScalar":
        """Canonicalise ``coeffs`` and ``scale_k`` and return the scalar."""
        values = [Fraction(c) for c in coeffs]
        if len(values) != m:
            raise ValueError(f"expected {m} coefficients, got {len(values)}")
        values = _reduce(m, values)
        if not any(values):
            return cls(m, tuple([_ZERO] * m), 0, d)
        k = scale_k
        while k >= 2:
            values = [c / d for c in values]
            k -= 2
        while k < 0:
            values = [c * d for c in values]
            k += 2
        if k == 1:
            root = math.isqrt(d)
            if root * root == d:
                values = [c / root for c in values]
                k = 0
        return cls(m, tuple(values), k, d)

    def is_zero(self) -> bool:
        """Return whether the value is exactly zero."""
        return not any(self.coeffs)

    def rational_part(self) -> Fraction | None:
        """Return the value as a rational when it is one, else ``None``."""
        if self.scale_k or any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def conj(self) -> "CycloScalar":
        """Return the complex conjugate."""
        return c_conj(self)

    def __add__(self, other: "CycloScalar") -> "CycloScalar":
        return c_add(self, other)

    def __sub__(self, other: "CycloScalar") -> "CycloScalar":
        return c_sub(self, other)

    def __mul__(self, other: "CycloScalar") -> "CycloScalar":
        return c_mul(self, other)

    def __truediv__(self, other: "CycloScalar") -> "CycloScalar":
        return c_div(self, other)

    def __neg__(self) -> "CycloScalar":
        return c_neg(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycloScalar) or other.m != self.m:
            return False
        return c_eq(self, other)

    def __hash__(self) -> int:
        # Equal values may differ in ambient d or parity, so only invariants are hashed.
        return hash((self.m, self.is_zero()))

    def __repr__(self) -> str:
        return f"CycloScalar({render(self)}, m={self.m}, d={self.d})"


def zero(m: int, d: int) -> CycloScalar:
    """Return ``0``."""
    return CycloScalar(m, tuple([_ZERO] * m), 0, d)


def from_rational(value: Fraction | int, m: int, d: int) -> CycloScalar:
    """Return the rational ``value``."""
    coeffs = [_ZERO] * m
    coeffs[0] = Fraction(value)
    return CycloScalar.make(m, d, coeffs)


def one(m: int, d: int) -> CycloScalar:
    """Return ``1``."""
    return from_rational(1, m, d)


def root_of_unity(m: int, j: int, d: int) -> CycloScalar:
    """Return ``zeta_m^j``."""
    coeffs = [_ZERO] * m
    coeffs[j % m] = _ONE
    return CycloScalar.make(m, d, coeffs)


def omega(p: int, t: int, d: int) -> CycloScalar:
    """Return ``exp(2 pi i t / p)`` in the conductor used for ``p``."""
    m = conductor_for(p)
    step = m // p if p == 2 else 1
    return root_of_unity(m, (t % p) * step, d)


def imaginary_unit(d: int) -> CycloScalar:
    """Return ``i`` (conductor 4)."""
    return root_of_unity(4, 1, d)


def inv_sqrt_d(m: int, d: int) -> CycloScalar:
    """Return ``1 / sqrt(d)``."""
    coeffs = [_ZERO] * m
    coeffs[0] = _ONE
    return CycloScalar.make(m, d, coeffs, 1)


def sqrt_rational(value: Fraction, m: int, d: int) -> CycloScalar:
    """Return the non-negative square root of a rational as ``r`` or ``r / sqrt(d)``."""
    value = Fraction(value)
    if value < 0:
        raise ConstructionError(f"cannot take the square root of {value}")
    for k, scaled in ((0, value), (1, value * d)):
        num, den = scaled.numerator, scaled.denominator
        root_num, root_den = math.isqrt(num), math.isqrt(den)
        if root_num * root_num == num and root_den * root_den == den:
            coeffs = [_ZERO] * m
            coeffs[0] = Fraction(root_num, root_den)
            return CycloScalar.make(m, d, coeffs, k)
    raise ConstructionError(
        f"sqrt({value}) is not of the form r or r/sqrt({d})", details={"value": str(value)}
    )


def rebase(a: CycloScalar, d_new: int) -> CycloScalar:
    """Re-express ``a`` against the ambient dimension ``d_new`` (same prime)."""
    if a.d == d_new:
        return a
    p = prime_of_conductor(a.m)
    n_new = _log_p(d_new, p)
    if a.scale_k == 0:
        return CycloScalar(a.m, a.coeffs, 0, d_new)
    gap = n_new - _log_p(a.d, p)
    if gap % 2:
        raise ScaleParityError(
            f"1/sqrt({a.d}) cannot be written over sqrt({d_new})",
            details={"from": a.d, "to": d_new},
        )
    factor = Fraction(p) ** (gap // 2)
    return CycloScalar.make(a.m, d_new, [c * factor for c in a.coeffs], 1)


def _align(a: CycloScalar, b: CycloScalar) -> tuple[CycloScalar, CycloScalar]:
    if a.m != b.m:
        raise ConductorMismatch(
            f"conductors differ: {a.m} vs {b.m}", details={"left": a.m, "right": b.m}
        )
    if a.d == b.d:
        return a, b
    if a.scale_k == 0:
        return rebase(a, b.d), b
    if b.scale_k == 0:
        return a, rebase(b, a.d)
    if a.d < b.d:
        return rebase(a, b.d), b
    return a, rebase(b, a.d)


def _absorbed(a: CycloScalar) -> list[Fraction]:
    """Coefficients of ``a`` with ``1/sqrt(d)`` rewritten through the Gauss sum."""
    if a.scale_k == 0:
        return list(a.coeffs)
    p = prime_of_conductor(a.m)
    n = _log_p(a.d, p)
    factor = Fraction(p ** ((n - 1) // 2), a.d)
    return [c * factor for c in _convolve(a.m, a.coeffs, _gauss_sum(p))]


def c_add(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    """Return ``a + b`` exactly."""
    a, b = _align(a, b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.scale_k == b.scale_k:
        return CycloScalar.make(
            a.m, a.d, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.scale_k
        )
    if _gauss_absorbable(a.m, a.d):
        # For p = 1 (mod 4) the Gauss sum is sqrt(p) inside Q(zeta_p), so the odd-scale
        # operand is rewritten with scale 0 and the sum stays in the ring.
        return CycloScalar.make(
            a.m, a.d, [x + y for x, y in zip(_absorbed(a), _absorbed(b))], 0
        )
    raise ScaleParityError(
        "cannot add values with odd and even powers of 1/sqrt(d)",
        details={"m": a.m, "d": a.d, "left_k": a.scale_k, "right_k": b.scale_k},
    )


def c_neg(a: CycloScalar) -> CycloScalar:
    """Return ``-a``."""
    return CycloScalar(a.m, tuple(-c for c in a.coeffs), a.scale_k, a.d)


def c_sub(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    """Return ``a - b``."""
    return c_add(a, c_neg(b))


def c_mul(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    """Return ``a * b`` exactly; scale exponents add."""
    a, b = _align(a, b)
    if a.is_zero() or b.is_zero():
        return zero(a.m, a.d)
    return CycloScalar.make(
        a.m, a.d, _convolve(a.m, a.coeffs, b.coeffs), a.scale_k + b.scale_k
    )


def c_conj(a: CycloScalar) -> CycloScalar:
    """Return the complex conjugate (``zeta^j -> zeta^(m-j)``)."""
    return CycloScalar.make(a.m, a.d, _galois_image(a.m, a.coeffs, a.m - 1), a.scale_k)


def c_eq(a: CycloScalar, b: CycloScalar) -> bool:
    """Return whether ``a`` and ``b`` denote the same number."""
    try:
        a, b = _align(a, b)
    except ScaleParityError:
        return a.is_zero() and b.is_zero()
    if a.scale_k == b.scale_k:
        return a.coeffs == b.coeffs
    if a.is_zero() or b.is_zero():
        return False
    if _gauss_absorbable(a.m, a.d):
        return _reduce(a.m, _absorbed(a)) == _reduce(b.m, _absorbed(b))
    return False


def c_inv(a: CycloScalar) -> CycloScalar:
    """Return ``1 / a`` through the product of the Galois conjugates of ``a``."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero")
    m = a.m
    cofactor: list[Fraction] = [_ONE] + [_ZERO] * (m - 1)
    for t in range(2, m):
        if math.gcd(t, m) == 1:
            cofactor = _convolve(m, cofactor, _galois_image(m, a.coeffs, t))
    norm = _reduce(m, _convolve(m, cofactor, a.coeffs))
    if any(norm[1:]) or norm[0] == 0:
        raise ConstructionError("norm of a cyclotomic scalar is not a nonzero rational")
    scale = Fraction(a.d) ** a.scale_k / norm[0]
    return CycloScalar.make(m, a.d, [c * scale for c in cofactor], a.scale_k)


def c_div(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    """Return ``a / b``."""
    return c_mul(a, c_inv(b))


def c_pow(a: CycloScalar, exponent: int) -> CycloScalar:
    """Return ``a ** exponent`` (negative exponents invert first)."""
    if exponent < 0:
        return c_pow(c_inv(a), -exponent)
    result = one(a.m, a.d)
    base = a
    while exponent:
        if exponent & 1:
            result = c_mul(result, base)
        base = c_mul(base, base)
        exponent >>= 1
    return result


def is_root_of_unity(a: CycloScalar) -> bool:
    """Return whether ``a`` is a root of unity (all of them divide ``2m``)."""
    if a.scale_k != 0 or a.is_zero():
        return False
    return c_pow(a, 2 * a.m) == one(a.m, a.d)


def monomial_form(a: CycloScalar) -> tuple[Fraction, int] | None:
    """Return ``(r, j)`` with ``a = r * zeta^j / sqrt(d)^k`` when such a form exists."""
    if a.is_zero():
        return None
    for j in range(a.m):
        shifted = _reduce(a.m, _galois_shift(a.m, a.coeffs, -j))
        if not any(shifted[1:]):
            return shifted[0], j
    return None


def _galois_shift(m: int, coeffs: Sequence[Fraction], offset: int) -> list[Fraction]:
    out = [_ZERO] * m
    for j, c in enumerate(coeffs):
        out[(j + offset) % m] = c
    return out


def c_to_complex(a: CycloScalar, precision: int = 12) -> tuple[float, float]:
    """Evaluate ``a`` as floating point for diagnostics only."""
    roots = np.exp(2j * np.pi * np.arange(a.m) / a.m)
    weights = np.array([float(c) for c in a.coeffs])
    value = complex(np.dot(weights, roots)) / math.sqrt(a.d) ** a.scale_k
    return (round(value.real, precision) + 0.0, round(value.imag, precision) + 0.0)


def _unit_symbol(m: int, j: int) -> tuple[str, bool]:
    """Return the typographic symbol of ``zeta_m^j`` and whether it carries a minus sign."""
    if m == 4:
        return ("1", "i", "1", "i")[j], j >= 2
    if j == 0:
        return "1", False
    if m == 3:
        return ("ω" if j == 1 else "ω̄"), False
    return ("ζ" if j == 1 else f"ζ^{j}"), False


def render(a: CycloScalar) -> str:
    """Render ``a`` with the symbols ``±1``, ``±i``, ``ω``, ``ω̄`` and ``ζ^j``."""
    if a.is_zero():
        return "0"
    suffix = f"/√{a.d}" if a.scale_k else ""
    monomial = monomial_form(a)
    if monomial is not None:
        r, j = monomial
        symbol, negative = _unit_symbol(a.m, j)
        if negative:
            r = -r
        sign = "-" if r < 0 else ""
        magnitude = abs(r)
        if magnitude == 1:
            return f"{sign}{symbol}{suffix}"
        if symbol == "1":
            return f"{sign}{magnitude}{suffix}"
        return f"{sign}{magnitude}·{symbol}{suffix}"
    terms = []
    for j, c in enumerate(a.coeffs):
        if c == 0:
            continue
        symbol, negative = _unit_symbol(a.m, j)
        value = -c if negative else c
        terms.append(str(value) if symbol == "1" else f"{value}·{symbol}")
    return f"({' + '.join(terms)}){suffix}"


def significant_coeffs(a: CycloScalar) -> Coefficients:
    """Return the coefficients that can be nonzero in canonical form."""
    width = 2 if a.m == 4 else a.m - 1
    return a.coeffs[:width]


def from_significant(
    m: int, d: int, coeffs: Sequence[Fraction], scale_k: int
) -> CycloScalar:
    """Inverse of :func:`significant_coeffs`."""
    padded = list(coeffs) + [_ZERO] * (m - len(coeffs))
    return CycloScalar.make(m, d, padded, scale_k)


__all__ = [
    "CycloScalar",
    "conductor_for",
    "prime_of_conductor",
    "zero",
    "one",
    "from_rational",
    "root_of_unity",
    "omega",
    "imaginary_unit",
    "inv_sqrt_d",
    "sqrt_rational",
    "rebase",
    "c_add",
    "c_neg",
    "c_sub",
    "c_mul",
    "c_conj",
    "c_eq",
    "c_inv",
    "c_div",
    "c_pow",
    "is_root_of_unity",
    "monomial_form",
    "c_to_complex",
    "render",
    "significant_coeffs",
    "from_significant",
]
