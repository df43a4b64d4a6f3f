"""
Verification Suite Base
=======================

A suite is an ordered list of cases. Each case names a ``check_*`` method
and its arguments; running the suite evaluates the cases, optionally in a
process pool, and yields their reports in case order whatever the worker
count.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from textwrap import dedent
from typing import Any, Iterator, Optional

from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import FixturesError
from numerics_config import NumericsConfig, NumericsSettings
from operators.test_functions import TestFunction, create_test_function

from .fixtures import Fixtures
from .reports import InequalityReport, SuiteReport

CORPUS = ("bump:1,2", "bump:0.5,1.5", "exp_decay:2", "indicator:1,2")
LAMBDA_SWEEP = (0.1, 0.25, 0.4)


class SuiteCase(BaseModel):
    """One unit of work: the statement it reports under, the check and its arguments"""
    model_config = ConfigDict(frozen=True)

    statement_id: str = Field(..., pattern=r"^\S+$")
    check: str = Field(..., description="Name of the check_* method to call")
    arguments: dict[str, Any] = Field(default_factory=dict)


def upper_fixture(value: float) -> float:
    """Frozen upper constant: the measured value widened by the margin"""
    return float(value) * NumericsConfig.FIXTURE_MARGIN


def lower_fixture(value: float) -> float:
    return float(value) / NumericsConfig.FIXTURE_MARGIN


class VerificationSuite:
    """Base class; subclasses set name, provenance and description and implement cases()"""

    name: str = "suite"
    provenance: str = ""
    description: str = dedent("""\
    An ordered collection of numerical checks of one stated result.
    """)

    def __init__(self, settings: NumericsSettings, fixtures: Optional[Fixtures] = None):
        self.settings = settings
        self.fixtures = fixtures
        self.params = settings.params()
        self.grid = settings.radius_grid()

    def cases(self) -> list[SuiteCase]:
        raise NotImplementedError

    def calibrate(self) -> dict[str, float]:
        """Frozen constants this suite compares against; empty when it needs none"""
        return {}

    def constant(self, key: str) -> float:
        if self.fixtures is None:
            raise FixturesError(f"suite {self.name} needs fixture {key!r} but no fixtures are loaded")
        return self.fixtures.get(key)

    def function(self, key: str) -> TestFunction:
        return create_test_function(key)

    def case(self, statement_id: str, check: str, **arguments: Any) -> SuiteCase:
        return SuiteCase(statement_id=statement_id, check=check, arguments=arguments)

    def compare(self, statement_id: str, lhs: float, rhs: float, **kwargs: Any) -> InequalityReport:
        return InequalityReport.compare(statement_id, lhs, rhs, self.provenance, **kwargs)

    def evaluate(self, case: SuiteCase) -> list[InequalityReport]:
        """Run one case; anything it raises, bar a fixtures problem, becomes a failing report"""
        try:
            return list(getattr(self, f"check_{case.check}")(case.statement_id, **case.arguments))
        except FixturesError:
            raise
        except Exception as e:
            logger.error(f"❌ {case.statement_id} raised {type(e).__name__}: {e}")
            return [InequalityReport.failure(case.statement_id, e, self.provenance)]

    def run(self, jobs: int = 1) -> Iterator[InequalityReport]:
        """
        Evaluate every case and yield the reports in case order.

        Args:
            jobs: Worker processes; 1 runs in-process

        Yields:
            InequalityReport: one or more per case
        """
        cases = self.cases()
        logger.info(f"🧮 Starting suite {self.name}: {len(cases)} case(s), {jobs} worker(s)")
        if jobs <= 1 or len(cases) <= 1:
            for case in cases:
                yield from self.evaluate(case)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(self.evaluate, case) for case in cases]
                for future in futures:
                    yield from future.result()
        logger.info(f"✅ Suite {self.name} finished")

    def report(self, jobs: int = 1) -> SuiteReport:
        start = time.perf_counter()
        cases = list(self.run(jobs))
        elapsed = time.perf_counter() - start
        report = SuiteReport(
            suite_name=self.name,
            cases=cases,
            fixtures_version=self.fixtures.version if self.fixtures else NumericsConfig.FIXTURES_VERSION,
            wall_time=elapsed,
        )
        logger.info(f"⏱️ {self.name}: {len(cases)} report(s), overall {report.overall}, {elapsed:.1f} s")
        return report
