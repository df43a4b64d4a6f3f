"""
Suite Registry
==============

Named suites, the combined "all" run, and calibration of the fixtures file.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional

from agno.utils.log import logger

from numerics.errors import ParameterError
from numerics_config import NumericsConfig, NumericsSettings

from .base import VerificationSuite
from .fixtures import Fixtures
from .maximal_suites import create_continuity_suite, create_corollary1_suite, create_theorem1_suite, create_theorem2_suite
from .measure_suites import create_doubling_suite, create_lemma1_suite, create_lemma2_suite
from .potential_suites import create_lemma3_suite, create_theorem3_suite, create_theorem4_suite
from .reports import InequalityReport, SuiteReport
from .spectral_suites import create_corollary2_kernel_suite, create_lemma4_suite, create_lemma5_suite

SuiteFactory = Callable[[NumericsSettings, Optional[Fixtures]], VerificationSuite]

SUITE_FACTORIES: dict[str, SuiteFactory] = {
    "lemma1": create_lemma1_suite,
    "lemma2": create_lemma2_suite,
    "doubling": create_doubling_suite,
    "theorem1": create_theorem1_suite,
    "theorem2": create_theorem2_suite,
    "continuity": create_continuity_suite,
    "corollary1": create_corollary1_suite,
    "lemma3": create_lemma3_suite,
    "lemma4": create_lemma4_suite,
    "lemma5": create_lemma5_suite,
    "corollary2-kernel": create_corollary2_kernel_suite,
    "theorem3": create_theorem3_suite,
    "theorem4": create_theorem4_suite,
}
SUITE_NAMES = tuple(SUITE_FACTORIES) + ("all",)


def create_suite(name: str, settings: NumericsSettings, fixtures: Optional[Fixtures] = None) -> VerificationSuite:
    if name not in SUITE_FACTORIES:
        raise ParameterError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    return SUITE_FACTORIES[name](settings, fixtures)


def run_suite(name: str, settings: NumericsSettings, fixtures: Optional[Fixtures], jobs: int = 1) -> SuiteReport:
    """
    Run one named suite, or every suite in registry order for "all".

    Args:
        name: A member of SUITE_NAMES
        settings: Resolved numerics settings
        fixtures: Frozen constants; suites that need none accept None
        jobs: Worker processes per suite

    Returns:
        SuiteReport: All cases in suite order, then case order
    """
    names = list(SUITE_FACTORIES) if name == "all" else [name]
    suites = [create_suite(n, settings, fixtures) for n in names]
    start = time.perf_counter()
    cases: list[InequalityReport] = []
    for suite in suites:
        cases.extend(suite.run(jobs))
    report = SuiteReport(
        suite_name=name,
        cases=cases,
        fixtures_version=fixtures.version if fixtures else NumericsConfig.FIXTURES_VERSION,
        wall_time=time.perf_counter() - start,
    )
    logger.info(f"🏁 {name}: {len(report.failures)} of {len(cases)} case(s) failed in {report.wall_time:.1f} s")
    return report


def _calibrate(suite: VerificationSuite) -> dict[str, float]:
    logger.info(f"🎯 Calibrating {suite.name}")
    return suite.calibrate()


def calibrate_fixtures(settings: NumericsSettings, jobs: int = 1) -> Fixtures:
    """Measure every frozen constant; suites are calibrated in registry order"""
    suites = [factory(settings, None) for factory in SUITE_FACTORIES.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            measured = list(pool.map(_calibrate, suites))
    else:
        measured = [_calibrate(suite) for suite in suites]
    values: dict[str, float] = {}
    for constants in measured:
        values.update(constants)
    logger.info(f"📐 Calibrated {len(values)} constant(s)")
    return Fixtures(config_hash=settings.config_hash(), values=values)
