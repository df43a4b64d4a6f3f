"""
Inequality Reports
==================

One InequalityReport per checked statement, collected into a SuiteReport.
The text form is one line per statement in the grammar

    <statement_id> <lhs> <rhs> <const> <pass|fail>

and carries no timing, so reports from different worker counts compare
byte for byte. The JSON sidecar adds the wall time. A failing line that
carries a known deviation is listed in a trailing comment and does not
fail the suite.
"""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from operators.test_functions import format_number

Comparison = Literal["le", "ge", "close"]


def holds(lhs: float, rhs: float, tolerance: float, comparison: Comparison) -> bool:
    """le: lhs <= rhs (1 + tol); ge: lhs >= rhs (1 - tol); close: |lhs - rhs| <= tol max(|lhs|, |rhs|)"""
    slack = tolerance * abs(rhs)
    if comparison == "le":
        return lhs <= rhs + slack
    if comparison == "ge":
        return lhs >= rhs - slack
    return abs(lhs - rhs) <= tolerance * max(abs(lhs), abs(rhs))


class InequalityReport(BaseModel):
    """Outcome of one checked inequality or identity"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    statement_id: str = Field(..., pattern=r"^\S+$", description="Dotted id such as thm1.domination")
    lhs: float = Field(..., description="Measured left side")
    rhs: float = Field(..., description="Bound the left side is compared with")
    empirical_constant: float = Field(..., description="lhs / rhs, or the frozen constant that scaled rhs")
    tolerance: float = Field(0.0, ge=0.0, description="Relative slack granted to the comparison")
    passed: bool = Field(..., serialization_alias="pass")
    comparison: Comparison = "le"
    provenance: str = Field("", description="Result the statement comes from")
    detail: str = ""
    known_deviation: str = Field("", description="Why a failure here is expected and does not fail the suite")

    @classmethod
    def compare(
        cls,
        statement_id: str,
        lhs: float,
        rhs: float,
        provenance: str,
        tolerance: float = 0.0,
        comparison: Comparison = "le",
        constant: Optional[float] = None,
        detail: str = "",
        known_deviation: str = "",
    ) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        if constant is None:
            if rhs != 0.0:
                constant = lhs / rhs
            else:
                constant = 0.0 if lhs == 0.0 else math.inf
        return cls(
            statement_id=statement_id,
            lhs=lhs,
            rhs=rhs,
            empirical_constant=float(constant),
            tolerance=tolerance,
            passed=holds(lhs, rhs, tolerance, comparison),
            comparison=comparison,
            provenance=provenance,
            detail=detail,
            known_deviation=known_deviation,
        )

    @classmethod
    def failure(cls, statement_id: str, error: Exception, provenance: str) -> "InequalityReport":
        """A case that raised: no sides, always failing"""
        return cls(
            statement_id=statement_id,
            lhs=math.nan,
            rhs=math.nan,
            empirical_constant=math.nan,
            passed=False,
            provenance=provenance,
            detail=f"{type(error).__name__}: {error}",
        )

    def line(self) -> str:
        verdict = "pass" if self.passed else "fail"
        return (
            f"{self.statement_id} {format_number(self.lhs)} {format_number(self.rhs)} "
            f"{format_number(self.empirical_constant)} {verdict}"
        )


class SuiteReport(BaseModel):
    """Every case of one suite run"""
    suite_name: str
    cases: list[InequalityReport] = Field(default_factory=list)
    fixtures_version: str = Field(..., description="Version tag of the fixtures the suite ran against")
    wall_time: float = Field(0.0, ge=0.0, description="Seconds; sidecar and log only")

    @computed_field
    @property
    def overall(self) -> Literal["pass", "fail"]:
        return "pass" if all(case.passed or case.known_deviation for case in self.cases) else "fail"

    @property
    def failures(self) -> list[InequalityReport]:
        return [case for case in self.cases if not case.passed and not case.known_deviation]

    @property
    def deviations(self) -> list[InequalityReport]:
        """Failing cases excused by a recorded known deviation"""
        return [case for case in self.cases if not case.passed and case.known_deviation]

    def to_text(self) -> str:
        lines = [f"# suite {self.suite_name} fixtures {self.fixtures_version}"]
        lines.extend(case.line() for case in self.cases)
        lines.extend(f"# known-deviation {case.statement_id}: {case.known_deviation}" for case in self.deviations)
        lines.append(f"# overall {self.overall}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)
