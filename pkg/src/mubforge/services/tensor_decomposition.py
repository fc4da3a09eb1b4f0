"""Tensor-product form of the field operators over ``n`` qudits of dimension ``p``.

A field basis turns every element of GF(p^n) into a digit string, so the
power-ordered computational basis can be relabelled as ``|c_0 c_1 ... c_(n-1)>``
with ``c_0`` the most significant digit. After relabelling, every ``Z_q``,
``X_q`` and ``X_q Z_r`` is a tensor product of single-qudit words
``X^a Z^b`` times a global phase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from loguru import logger

from mubforge.services.cyclotomic import (
    CycloScalar,
    c_mul,
    conductor_for,
    is_root_of_unity,
    omega,
    one,
    rebase,
    render,
)
from mubforge.services.finite_field import (
    BasisKind,
    FieldBasis,
    FieldSpec,
    expand,
    is_prime,
    normal_bases,
)
from mubforge.services.matrix_core import (
    CMatrix,
    diagonal,
    equal_up_to_phase,
    from_rows,
    mat_equal,
    mat_mul,
    mat_pow,
    mat_scale,
    permutation_matrix,
    permute,
    tensor_all,
)
from mubforge.services.weyl_operators import (
    build_F,
    build_Xq,
    build_XqZr,
    build_Zq,
    prime_fourier,
)
from mubforge.utils.errors import DimensionMismatch, NoPauliMatch, NotPrime
from mubforge.utils.logging import log_stage

Exponents = tuple[tuple[int, int], ...]

_QUBIT_SYMBOLS: dict[tuple[int, int], str] = {
    (0, 0): "I",
    (1, 0): "𝒳",
    (0, 1): "𝒵",
    (1, 1): "𝒴",
}
_QUTRIT_SYMBOLS: dict[tuple[int, int], str] = {
    (0, 0): "I",
    (1, 0): "𝒳",
    (0, 1): "𝒵",
    (1, 1): "𝒴",
    (1, 2): "𝒲",
    (2, 0): "𝒳²",
    (0, 2): "𝒵²",
    (2, 2): "𝒴²",
    (2, 1): "𝒲²",
}
_GENERIC_FACTOR = re.compile(r"^(?:𝒳(?:\^(\d+))?)?(?:𝒵(?:\^(\d+))?)?$")
_SUPERSCRIPTS = str.maketrans({"²": "^2", "³": "^3"})


@dataclass(frozen=True)
class DigitMap:
    """Relabelling of power-ordered positions by basis digit strings.

    ``perm[k]`` is the digit-string index ``sum_l c_l p^(n-1-l)`` of the
    element sitting at power-ordered position ``k``.
    """

    spec: FieldSpec
    basis: FieldBasis
    perm: tuple[int, ...]

    @property
    def inverse(self) -> tuple[int, ...]:
        """Power-ordered position of every digit-string index."""
        out = [0] * len(self.perm)
        for position, index in enumerate(self.perm):
            out[index] = position
        return tuple(out)

    def digits_of(self, position: int) -> tuple[int, ...]:
        """Digit string labelling power-ordered ``position``."""
        return index_to_digits(self.perm[position], self.spec.p, self.spec.n)


@dataclass(frozen=True)
class PauliWord:
    """Global phase times ``X^(a_0) Z^(b_0) (x) ... (x) X^(a_(n-1)) Z^(b_(n-1))``."""

    p: int
    factors: Exponents
    phase: CycloScalar

    def __post_init__(self) -> None:
        if any(not (0 <= a < self.p and 0 <= b < self.p) for a, b in self.factors):
            raise ValueError(f"word exponents must lie in 0..{self.p - 1}")
        if not is_root_of_unity(self.phase):
            raise ValueError("word phase must be a root of unity")

    @property
    def n(self) -> int:
        """Number of qudit factors."""
        return len(self.factors)

    def symbols(self) -> tuple[str, ...]:
        """Single-qudit symbols, most significant factor first."""
        return tuple(factor_symbol(self.p, a, b) for a, b in self.factors)

    def render(self, *, with_phase: bool = False) -> str:
        """Text form such as ``𝒲 ⊗ 𝒵²``; optionally prefixed by the phase."""
        text = " ⊗ ".join(self.symbols())
        if with_phase:
            return f"{render(self.phase)} · {text}"
        return text


def index_to_digits(index: int, p: int, n: int) -> tuple[int, ...]:
    """Digits of ``index`` in base ``p``, most significant first."""
    digits = []
    for _ in range(n):
        index, digit = divmod(index, p)
        digits.append(digit)
    return tuple(reversed(digits))


def digits_to_index(digits: Sequence[int], p: int) -> int:
    """Inverse of :func:`index_to_digits`."""
    index = 0
    for digit in digits:
        index = index * p + digit
    return index


def factor_symbol(p: int, a: int, b: int) -> str:
    """Symbol of ``X^a Z^b``: named letters for qubits and qutrits, powers otherwise."""
    table = {2: _QUBIT_SYMBOLS, 3: _QUTRIT_SYMBOLS}.get(p)
    if table is not None:
        return table[(a % p, b % p)]
    if a % p == 0 and b % p == 0:
        return "I"
    parts = []
    for letter, exponent in (("𝒳", a % p), ("𝒵", b % p)):
        if exponent == 1:
            parts.append(letter)
        elif exponent:
            parts.append(f"{letter}^{exponent}")
    return "".join(parts)


def parse_factor(p: int, text: str) -> tuple[int, int]:
    """Inverse of :func:`factor_symbol`; accepts ``^2`` and ``^{2}`` for superscripts."""
    cleaned = text.strip().replace("{", "").replace("}", "")
    table = {2: _QUBIT_SYMBOLS, 3: _QUTRIT_SYMBOLS}.get(p)
    if table is not None:
        normalised = cleaned.replace("^2", "²")
        for exponents, symbol in table.items():
            if symbol == normalised:
                return exponents
        raise ValueError(f"unknown single-qudit symbol {text!r} for p = {p}")
    if cleaned == "I":
        return (0, 0)
    match = _GENERIC_FACTOR.match(cleaned.translate(_SUPERSCRIPTS))
    if match is None or not cleaned:
        raise ValueError(f"unknown single-qudit symbol {text!r}")
    a = int(match.group(1) or 1) if "𝒳" in cleaned else 0
    b = int(match.group(2) or 1) if "𝒵" in cleaned else 0
    return (a % p, b % p)


def parse_word(p: int, text: str) -> Exponents:
    """Parse ``"𝒲 ⊗ 𝒵²"`` (or the juxtaposed ``"𝒲 𝒵²"``) into exponent pairs."""
    pieces = text.split("⊗") if "⊗" in text else text.split()
    return tuple(parse_factor(p, piece) for piece in pieces)


def _single_qudit(p: int, ambient: int) -> tuple[CMatrix, CMatrix]:
    m = conductor_for(p)
    shift = permutation_matrix([(j + 1) % p for j in range(p)], m, ambient)
    clock = diagonal([omega(p, j, ambient) for j in range(p)])
    return shift, clock


def single_qudit_paulis(p: int) -> tuple[CMatrix, CMatrix]:
    """Return the ``p x p`` shift and clock with ``Z X = omega X Z``."""
    if not is_prime(p):
        raise NotPrime("p must be prime", details={"p": p})
    return _single_qudit(p, p)


@lru_cache(maxsize=None)
def _factor_matrix(p: int, a: int, b: int, ambient: int) -> CMatrix:
    shift, clock = _single_qudit(p, ambient)
    return mat_mul(mat_pow(shift, a), mat_pow(clock, b))


def word_matrix(word: PauliWord, ambient: int | None = None) -> CMatrix:
    """Kronecker product of the factors times the phase, in digit-string order."""
    d = ambient if ambient is not None else word.p**word.n
    bare = tensor_all([_factor_matrix(word.p, a, b, d) for a, b in word.factors])
    return mat_scale(bare, rebase(word.phase, d))


def build_digit_map(spec: FieldSpec, basis: FieldBasis) -> DigitMap:
    """Relabel power-ordered positions by the digits of each element in ``basis``."""
    if basis.spec != spec:
        raise DimensionMismatch("basis belongs to another field")
    perm = tuple(
        digits_to_index(expand(spec.at_position(k), basis), spec.p) for k in range(spec.d)
    )
    return DigitMap(spec, basis, perm)


def compose(word: PauliWord, digit_map: DigitMap) -> CMatrix:
    """Return the word as a ``d x d`` operator in the power-ordered basis."""
    spec = digit_map.spec
    if word.p != spec.p or word.n != spec.n:
        raise DimensionMismatch(
            "word does not match the field", details={"p": word.p, "n": word.n, "d": spec.d}
        )
    return permute(word_matrix(word, spec.d), digit_map.inverse)


def _not_a_word(digit_map: DigitMap) -> NoPauliMatch:
    spec = digit_map.spec
    return NoPauliMatch(
        "operator is not a generalised Pauli word over this basis",
        details={"p": spec.p, "n": spec.n, "basis": digit_map.basis.kind.value},
    )


def decompose(op: CMatrix, digit_map: DigitMap) -> PauliWord:
    """Find the unique Pauli word equal to ``op`` up to a root-of-unity phase.

    The ``X`` exponents are read off the image of ``|0...0>`` and the ``Z``
    exponents off the images of the unit digit strings; the word is then
    checked against the whole operator once.
    """
    spec = digit_map.spec
    p, n, d = spec.p, spec.n, spec.d
    if op.dim != d:
        raise DimensionMismatch(f"operator has dimension {op.dim}, field has {d}")
    relabelled = permute(op, digit_map.perm)
    column = [i for i in range(d) if not relabelled[i, 0].is_zero()]
    if len(column) != 1:
        raise NoPauliMatch("operator is not monomial over the digit basis")
    shifts = index_to_digits(column[0], p, n)
    lead = relabelled[column[0], 0]
    clocks = []
    for place in range(n):
        unit = tuple(int(k == place) for k in range(n))
        source = digits_to_index(unit, p)
        target = digits_to_index([(a + u) % p for a, u in zip(shifts, unit)], p)
        # X^a Z^b |x> = omega^(b . x) |x + a>: the ratio to the |0...0> image is omega^(b_place).
        entry = relabelled[target, source]
        exponent = next((b for b in range(p) if c_mul(lead, omega(p, b, d)) == entry), None)
        if exponent is None:
            raise _not_a_word(digit_map)
        clocks.append(exponent)
    factors = tuple(zip(shifts, clocks))
    candidate = word_matrix(PauliWord(p, factors, one(spec.conductor, d)), d)
    phase = equal_up_to_phase(relabelled, candidate)
    if phase is None:
        raise _not_a_word(digit_map)
    return PauliWord(p, factors, phase)


def word_product(left: PauliWord, right: PauliWord) -> PauliWord:
    """Exact product; each factor uses ``Z^b X^a = omega^(ab) X^a Z^b``."""
    if left.p != right.p or left.n != right.n:
        raise DimensionMismatch("words act on different registers")
    p = left.p
    twist = sum(b1 * a2 for (_, b1), (a2, _) in zip(left.factors, right.factors))
    ambient = p**left.n
    phase = c_mul(
        c_mul(rebase(left.phase, ambient), rebase(right.phase, ambient)),
        omega(p, twist, ambient),
    )
    factors = tuple(
        ((a1 + a2) % p, (b1 + b2) % p)
        for (a1, b1), (a2, b2) in zip(left.factors, right.factors)
    )
    return PauliWord(p, factors, phase)


def factorization_of_F(spec: FieldSpec, digit_map: DigitMap) -> tuple[CMatrix, ...] | None:
    """Return ``n`` copies of ``F_p`` when the relabelled ``F`` is their tensor power."""
    relabelled = permute(build_F(spec), digit_map.perm)
    factors = tuple(prime_fourier(spec.p) for _ in range(spec.n))
    power = tensor_all(factors)
    candidate = from_rows([[rebase(x, spec.d) for x in row] for row in power.entries])
    if mat_equal(relabelled, candidate):
        return factors
    return None


def find_factorizing_basis(spec: FieldSpec) -> FieldBasis | None:
    """First normal basis (ascending generator power) in which ``F`` factorises."""
    for basis in normal_bases(spec):
        if factorization_of_F(spec, build_digit_map(spec, basis)) is not None:
            logger.bind(d=spec.d, generator=basis.generators[0].power).debug(
                "tensor.factorizing_basis"
            )
            return basis
    return None


@dataclass(frozen=True)
class DecompositionTable:
    """Pauli words of every ``Z_q``, ``X_q`` and ``X_q Z_(q+r)`` for one basis.

    Row keys are ``"Z"``, ``"X"`` and ``"mixed:r"``; entries are indexed by ``q``.
    """

    spec: FieldSpec
    basis_kind: BasisKind
    rows: dict[str, tuple[PauliWord, ...]]


@dataclass(frozen=True)
class TableComparison:
    """Differences between a generated table and a transcribed reference."""

    mismatches: list[tuple[str, int, str, str]]
    missing: list[tuple[str, int, str]]

    @property
    def matches(self) -> bool:
        """Return whether every listed reference entry agrees."""
        return not self.mismatches


def decomposition_table(spec: FieldSpec, basis: FieldBasis) -> DecompositionTable:
    """Decompose all field operators over ``basis``."""
    digit_map = build_digit_map(spec, basis)
    order = spec.order
    with log_stage("tensor.decompose"):
        rows: dict[str, tuple[PauliWord, ...]] = {
            "Z": tuple(decompose(build_Zq(spec, q), digit_map) for q in range(order)),
            "X": tuple(decompose(build_Xq(spec, q), digit_map) for q in range(order)),
        }
        for r in range(order):
            rows[f"mixed:{r}"] = tuple(
                decompose(build_XqZr(spec, q, q + r), digit_map) for q in range(order)
            )
    return DecompositionTable(spec, basis.kind, rows)


def compare_with_reference(
    table: DecompositionTable, reference: Mapping[str, Sequence[str]]
) -> TableComparison:
    """Compare exponent patterns row by row; phases are ignored.

    Reference rows shorter than the generated ones report the absent entries
    as missing instead of mismatched.
    """
    p = table.spec.p
    mismatches: list[tuple[str, int, str, str]] = []
    missing: list[tuple[str, int, str]] = []
    for key, words in table.rows.items():
        if key not in reference:
            continue
        expected = reference[key]
        for q, word in enumerate(words):
            if q >= len(expected):
                missing.append((key, q, word.render()))
                continue
            if parse_word(p, expected[q]) != word.factors:
                mismatches.append((key, q, expected[q], word.render()))
    return TableComparison(mismatches, missing)


__all__ = [
    "DigitMap",
    "PauliWord",
    "DecompositionTable",
    "TableComparison",
    "index_to_digits",
    "digits_to_index",
    "factor_symbol",
    "parse_factor",
    "parse_word",
    "single_qudit_paulis",
    "word_matrix",
    "build_digit_map",
    "compose",
    "decompose",
    "word_product",
    "factorization_of_F",
    "find_factorizing_basis",
    "decomposition_table",
    "compare_with_reference",
]
