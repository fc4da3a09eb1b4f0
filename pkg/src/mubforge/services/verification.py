"""Exact invariant suite run by ``mubforge verify``.

Every check evaluates identities between exact values and counts how many it
evaluated. A failing identity never raises: the first few descriptions are
kept on the :class:`CheckResult` and the report is marked as failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator

import numpy as np
from loguru import logger

from mubforge.config import Settings, get_settings
from mubforge.services.cyclotomic import (
    c_mul,
    from_rational,
    imaginary_unit,
    one,
    zero,
)
from mubforge.services.finite_field import (
    BasisKind,
    FieldElement,
    FieldSpec,
    basis_for,
    build_field,
    character,
    combine,
    ensure_dimension,
    expand,
    field_trace,
    jacobi_add,
    mul,
    scale,
)
from mubforge.services.matrix_core import (
    CMatrix,
    diagonal,
    identity,
    is_unitary,
    mat_add,
    mat_adjoint,
    mat_equal,
    mat_mul,
    mat_pow,
    mat_scale,
)
from mubforge.services.mub_builder import (
    FamilyAudit,
    MubFamily,
    OverlapViolation,
    audit_family,
    mubs_for,
)
from mubforge.services.reference_tables import (
    REFERENCE_TABLES,
    ReferenceTable,
    check_against,
    references_for,
)
from mubforge.services.tensor_decomposition import decomposition_table
from mubforge.services.weyl_operators import (
    build_classes,
    build_F,
    build_Vqr,
    build_Xq,
    build_XqZr,
    build_Zq,
    class_violations,
    commutator_phase,
    phased_mixed_member,
    prime_fourier,
    prime_generators,
    prime_member,
    prime_V,
    weyl_phase,
)
from mubforge.utils.errors import MubforgeError
from mubforge.utils.logging import log_stage

EXHAUSTIVE_LIMIT = 16
_KEPT_FAILURES = 5


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    checked: int
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    """All check outcomes for one field plus the overlap violations of its family."""

    p: int
    n: int
    d: int
    route: str
    checks: tuple[CheckResult, ...]
    violations: tuple[OverlapViolation, ...] = field(default=())

    @property
    def passed(self) -> bool:
        """Return whether every check passed and no overlap is off."""
        return all(check.passed for check in self.checks) and not self.violations

    def failed_checks(self) -> list[CheckResult]:
        """Checks that did not pass."""
        return [check for check in self.checks if not check.passed]


class _Tally:
    """Counter of evaluated identities remembering the first failures."""

    def __init__(self) -> None:
        self.checked = 0
        self.failures: list[str] = []
        self.failed = 0

    def expect(self, holds: bool, description: str) -> None:
        self.checked += 1
        if not holds:
            self.failed += 1
            if len(self.failures) < _KEPT_FAILURES:
                self.failures.append(description)

    def absorb(self, checked: int, failures: list[str]) -> None:
        """Record a batch of ``checked`` identities of which ``failures`` broke."""
        self.checked += checked
        self.failed += len(failures)
        room = _KEPT_FAILURES - len(self.failures)
        self.failures.extend(failures[: max(room, 0)])


CheckFn = Callable[[_Tally], None]


class InvariantSuite:
    """Runs every applicable check for GF(p^n) (or prime ``d = p`` when ``n = 1``)."""

    def __init__(
        self,
        p: int,
        n: int,
        settings: Settings | None = None,
        *,
        references: tuple[ReferenceTable, ...] = REFERENCE_TABLES,
    ) -> None:
        self.settings = settings or get_settings()
        self.d = ensure_dimension(p, n, bound=self.settings.max_dimension)
        self.p = p
        self.n = n
        self.spec: FieldSpec = build_field(p, n)
        self.references = references
        self._rng = np.random.default_rng(self.settings.verify_seed)
        self._family: MubFamily | None = None
        self._violations: list[OverlapViolation] = []

    def run(self) -> VerificationReport:
        """Evaluate every check and return the report."""
        with log_stage("verify.suite"):
            results = tuple(self._run_check(name, check) for name, check in self._plan())
        report = VerificationReport(
            p=self.p,
            n=self.n,
            d=self.d,
            route=self._family.route.value if self._family is not None else "",
            checks=results,
            violations=tuple(self._violations),
        )
        logger.bind(
            d=self.d,
            passed=report.passed,
            failed=[check.name for check in report.failed_checks()],
        ).info("verify.report")
        return report

    def _plan(self) -> list[tuple[str, CheckFn]]:
        plan: list[tuple[str, CheckFn]] = [
            ("field.character_homomorphism", self._character_homomorphism),
            ("field.character_sums", self._character_sums),
            ("field.trace_linearity", self._trace_linearity),
            ("field.round_trip", self._round_trip),
            ("field.jacobi_consistency", self._jacobi_consistency),
        ]
        if self.n == 1:
            plan += [
                ("prime.weyl_relation", self._prime_weyl_relation),
                ("prime.fourier_conjugation", self._prime_fourier_conjugation),
                ("prime.v_transfer", self._prime_v_transfer),
            ]
            if self.p == 2:
                plan.append(("prime.d2_y_relation", self._d2_y_relation))
        else:
            plan += [
                ("composite.weyl_relation", self._composite_weyl_relation),
                ("composite.fourier_conjugation", self._composite_fourier_conjugation),
                ("composite.periodicity", self._periodicity),
                ("composite.diagonal_cyclic_shift", self._diagonal_cyclic_shift),
            ]
        if self.p != 2:
            plan.append(("operators.v_conjugation", self._v_conjugation))
        plan += [
            ("classes.structure", self._class_structure),
            ("classes.commutator_formula", self._commutator_formula),
            ("mubs.unbiased", self._mubs_unbiased),
            ("mubs.eigenbases", self._mubs_eigenbases),
        ]
        if self.n >= 2:
            plan.append(("tensor.decomposition", self._tensor_decomposition))
        return plan

    def _run_check(self, name: str, check: CheckFn) -> CheckResult:
        tally = _Tally()
        try:
            check(tally)
        except MubforgeError as exc:
            logger.bind(check=name, code=exc.code).warning("verify.check_error")
            return CheckResult(name, False, tally.checked, f"{exc.code}: {exc.message}")
        detail = "; ".join(tally.failures)
        if tally.failed > len(tally.failures):
            detail += f" (+{tally.failed - len(tally.failures)} more)"
        return CheckResult(name, tally.failed == 0, tally.checked, detail)

    # -- sampling helpers -------------------------------------------------

    def _pairs(self, size: int) -> Iterator[tuple[int, int]]:
        """All index pairs below ``size`` for small fields, a seeded sample otherwise."""
        if self.d <= EXHAUSTIVE_LIMIT:
            yield from product(range(size), repeat=2)
            return
        for row in self._rng.integers(0, size, size=(self.settings.verify_samples, 2)):
            yield int(row[0]), int(row[1])

    def _elements(self) -> list[FieldElement]:
        return list(self.spec.elements())

    # -- field ------------------------------------------------------------

    def _character_homomorphism(self, tally: _Tally) -> None:
        elements = self._elements()
        for i, j in self._pairs(self.d):
            a, b = elements[i], elements[j]
            tally.expect(
                c_mul(character(a), character(b)) == character(jacobi_add(a, b)),
                f"chi(a)chi(b) != chi(a+b) at positions {i}, {j}",
            )

    def _character_sums(self, tally: _Tally) -> None:
        spec = self.spec
        m = spec.conductor
        total = zero(m, spec.d)
        for a in spec.elements():
            total = total + character(a)
        tally.expect(total == zero(m, spec.d), "sum of chi over the field is not 0")
        for theta in spec.elements():
            partial = zero(m, spec.d)
            for k in range(spec.order):
                partial = partial + character(mul(spec.power(k), theta))
            expected = spec.d - 1 if theta.is_zero() else -1
            tally.expect(
                partial == from_rational(expected, m, spec.d),
                f"sum_k chi(alpha^k theta) != {expected} for theta at {spec.position_of(theta)}",
            )

    def _trace_linearity(self, tally: _Tally) -> None:
        spec = self.spec
        elements = self._elements()
        for a in elements:
            tally.expect(0 <= field_trace(a) < spec.p, "trace outside Z_p")
            for c in range(spec.p):
                tally.expect(
                    field_trace(scale(a, c)) == (c * field_trace(a)) % spec.p,
                    f"tr(c a) != c tr(a) for c = {c}",
                )
        for i, j in self._pairs(self.d):
            a, b = elements[i], elements[j]
            tally.expect(
                field_trace(jacobi_add(a, b)) == (field_trace(a) + field_trace(b)) % spec.p,
                f"tr(a+b) != tr(a)+tr(b) at positions {i}, {j}",
            )

    def _round_trip(self, tally: _Tally) -> None:
        spec = self.spec
        bases = [basis_for(spec, kind) for kind in BasisKind]
        for a in spec.elements():
            tally.expect(spec.from_coeffs(a.coeffs) == a, f"coeffs round trip fails at {a.coeffs}")
            if a.power is not None:
                tally.expect(
                    spec.power(a.power).coeffs == a.coeffs, f"power round trip fails at {a.power}"
                )
            for basis in bases:
                tally.expect(
                    combine(expand(a, basis), basis) == a,
                    f"{basis.kind.value} expansion round trip fails at {a.coeffs}",
                )

    def _jacobi_consistency(self, tally: _Tally) -> None:
        spec = self.spec
        elements = self._elements()
        for i, j in self._pairs(self.d):
            a, b = elements[i], elements[j]
            by_coeffs = spec.from_coeffs([x + y for x, y in zip(a.coeffs, b.coeffs)])
            tally.expect(
                jacobi_add(a, b) == by_coeffs,
                f"Jacobi sum differs from coefficient sum at positions {i}, {j}",
            )

    # -- prime dimension ----------------------------------------------------

    def _prime_weyl_relation(self, tally: _Tally) -> None:
        shift, clock, w = prime_generators(self.p)
        tally.expect(
            mat_equal(mat_mul(clock, shift), mat_scale(mat_mul(shift, clock), w)),
            "ZX != omega XZ",
        )
        tally.expect(mat_equal(mat_pow(shift, self.p), _identity_like(shift)), "X^d != I")

    def _prime_fourier_conjugation(self, tally: _Tally) -> None:
        shift, clock, _ = prime_generators(self.p)
        fourier = prime_fourier(self.p)
        tally.expect(is_unitary(fourier), "F is not unitary")
        tally.expect(
            mat_equal(mat_mul(mat_mul(mat_adjoint(fourier), clock), fourier), shift),
            "F^dagger Z F != X",
        )

    def _prime_v_transfer(self, tally: _Tally) -> None:
        d = self.p
        shift, _, _ = prime_generators(d)
        v = prime_V(d)
        for m in range(d):
            v_m = mat_pow(v, m)
            moved = mat_mul(mat_mul(mat_adjoint(v_m), shift), v_m)
            tally.expect(
                mat_equal(moved, prime_member(d, m, 1)), f"V^dagger^{m} X V^{m} != XZ^{m}"
            )

    def _d2_y_relation(self, tally: _Tally) -> None:
        shift, clock, _ = prime_generators(2)
        v = prime_V(2)
        y = mat_scale(mat_mul(shift, clock), imaginary_unit(2))
        tally.expect(mat_equal(mat_mul(mat_mul(mat_adjoint(v), shift), v), y), "V^dagger X V != Y")
        tally.expect(mat_equal(mat_mul(y, y), _identity_like(y)), "Y^2 != I")

    # -- prime-power dimension ---------------------------------------------

    def _composite_weyl_relation(self, tally: _Tally) -> None:
        spec = self.spec
        for q, q2 in self._pairs(spec.order):
            lhs = mat_mul(build_Zq(spec, q), build_Xq(spec, q2))
            rhs = mat_scale(mat_mul(build_Xq(spec, q2), build_Zq(spec, q)), weyl_phase(spec, q, q2))
            tally.expect(mat_equal(lhs, rhs), f"Z_{q} X_{q2} != chi(alpha^{q + q2}) X_{q2} Z_{q}")

    def _composite_fourier_conjugation(self, tally: _Tally) -> None:
        spec = self.spec
        fourier = build_F(spec)
        tally.expect(is_unitary(fourier), "F is not unitary")
        # F is unitary, so F^dagger Z_q F = X_q is checked as Z_q F = F X_q.
        for q in range(spec.order):
            lhs = mat_mul(build_Zq(spec, q), fourier)
            tally.expect(
                mat_equal(lhs, mat_mul(fourier, build_Xq(spec, q))), f"F^dagger Z_{q} F != X_{q}"
            )

    def _periodicity(self, tally: _Tally) -> None:
        spec = self.spec
        unit = one(spec.conductor, spec.d)
        for q in range(spec.order):
            shifted = diagonal(
                [unit] + [character(spec.power(q + spec.order + k)) for k in range(1, spec.d)]
            )
            tally.expect(mat_equal(shifted, build_Zq(spec, q)), f"Z_{q + spec.order} != Z_{q}")
            tally.expect(
                spec.power(q + spec.order).coeffs == spec.power(q).coeffs,
                f"alpha^{q + spec.order} != alpha^{q}",
            )
            tally.expect(
                mat_equal(build_XqZr(spec, q + spec.order, q), build_XqZr(spec, q, q)),
                f"X_{q + spec.order} Z_{q} != X_{q} Z_{q}",
            )

    def _diagonal_cyclic_shift(self, tally: _Tally) -> None:
        spec = self.spec
        base = build_Zq(spec, 0).diagonal()
        tail = base[1:]
        for q in range(spec.order):
            values = build_Zq(spec, q).diagonal()
            rotated = tail[q:] + tail[:q]
            tally.expect(
                values[0] == base[0] and values[1:] == rotated,
                f"Z_{q} is not a cyclic shift of Z_0",
            )

    def _v_conjugation(self, tally: _Tally) -> None:
        spec = self.spec
        order = spec.order
        for q, r in product(range(order), repeat=2):
            v = build_Vqr(spec, (q + r) % order, q)
            moved = mat_mul(mat_mul(mat_adjoint(v), build_Xq(spec, q)), v)
            tally.expect(
                mat_equal(moved, phased_mixed_member(spec, q, r)),
                f"V_(q+r)^(q) conjugation fails at q={q}, r={r}",
            )

    # -- classes, families, decompositions ----------------------------------

    def _class_structure(self, tally: _Tally) -> None:
        classes = build_classes(self.spec)
        members = sum(len(cls.members) for cls in classes)
        tally.absorb(members * (members + 1) // 2, class_violations(classes, self.d))

    def _commutator_formula(self, tally: _Tally) -> None:
        spec = self.spec
        order = spec.order
        minus_one = from_rational(-1, spec.conductor, spec.d)
        draws = self._rng.integers(0, order, size=(self.settings.verify_samples, 4))
        for q, r, q2, r2 in (tuple(int(x) for x in row) for row in draws):
            a = build_XqZr(spec, q, r)
            b = build_XqZr(spec, q2, r2)
            commutator = mat_add(mat_mul(a, b), mat_scale(mat_mul(b, a), minus_one))
            shifts = mat_mul(build_Xq(spec, q), build_Xq(spec, q2))
            clocks = mat_mul(build_Zq(spec, r % order), build_Zq(spec, r2 % order))
            expected = mat_scale(mat_mul(shifts, clocks), commutator_phase(spec, q, r, q2, r2))
            tally.expect(
                mat_equal(commutator, expected),
                f"[X_{q}Z_{r}, X_{q2}Z_{r2}] differs from the commutator formula",
            )

    def _family_once(self) -> MubFamily:
        if self._family is None:
            self._family = mubs_for(self.p, self.n, verify=False)
        return self._family

    def _audit(self) -> FamilyAudit:
        return audit_family(self.p, self.n)

    def _mubs_unbiased(self, tally: _Tally) -> None:
        family = self._family_once()
        tally.expect(len(family.bases) == self.d + 1, f"{len(family.bases)} bases built")
        self._violations = list(self._audit().overlaps)
        size = len(family.bases) * self.d
        tally.absorb(
            size * (size + 1) // 2,
            [
                f"|<{v.basis_a}.{v.vec_i}|{v.basis_b}.{v.vec_j}>|^2 != {v.expected}"
                for v in self._violations
            ],
        )

    def _mubs_eigenbases(self, tally: _Tally) -> None:
        family = self._family_once()
        tally.absorb(
            sum(len(cls.members) for cls in family.classes) * self.d,
            [
                f"vector {v.vec} of basis {v.basis} is not an eigenvector of {v.member.render()}"
                for v in self._audit().eigen
            ],
        )

    def _tensor_decomposition(self, tally: _Tally) -> None:
        for kind in BasisKind:
            table = decomposition_table(self.spec, basis_for(self.spec, kind))
            tally.absorb(sum(len(words) for words in table.rows.values()), [])
            for reference in references_for(self.p, self.n, kind, self.references):
                listed = sum(len(row) for row in reference.rows.values())
                tally.absorb(
                    listed,
                    [f"{kind.value}: {problem}" for problem in check_against(table, reference)],
                )


def _identity_like(matrix: CMatrix) -> CMatrix:
    return identity(matrix.dim, matrix.m, matrix.d)


def run_suite(p: int, n: int, settings: Settings | None = None) -> VerificationReport:
    """Run the full invariant suite for GF(p^n)."""
    return InvariantSuite(p, n, settings).run()


__all__ = [
    "EXHAUSTIVE_LIMIT",
    "CheckResult",
    "VerificationReport",
    "InvariantSuite",
    "run_suite",
]
