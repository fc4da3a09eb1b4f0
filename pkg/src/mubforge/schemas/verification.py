"""Report document produced by ``mubforge verify``."""

from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from mubforge.schemas.mubs import OverlapViolationModel
from mubforge.services.verification import CheckResult, VerificationReport


class CheckModel(BaseModel):
    """Outcome of one named check."""

    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    checked: int = Field(..., ge=0, description="Number of exact identities evaluated.")
    detail: str = Field(default="", description="First failures, empty when the check passed.")

    @classmethod
    def from_result(cls, result: CheckResult) -> "CheckModel":
        """Serialise a check result."""
        return cls(
            name=result.name, passed=result.passed, checked=result.checked, detail=result.detail
        )


class VerificationDocument(BaseModel):
    """``{"p": 3, "n": 2, "d": 9, "passed": true, "checks": [...], "violations": []}``."""

    model_config = ConfigDict(extra="forbid")

    p: int = Field(..., ge=2)
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=2)
    route: str
    passed: bool
    checks: List[CheckModel]
    violations: List[OverlapViolationModel]

    @classmethod
    def from_report(cls, report: VerificationReport) -> "VerificationDocument":
        """Serialise a report."""
        return cls(
            p=report.p,
            n=report.n,
            d=report.d,
            route=report.route,
            passed=report.passed,
            checks=[CheckModel.from_result(check) for check in report.checks],
            violations=[OverlapViolationModel.from_violation(v) for v in report.violations],
        )


__all__ = ["CheckModel", "VerificationDocument"]
