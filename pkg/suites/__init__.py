"""
Gegenbauer Verification Suites
==============================

One suite per stated result. Each suite yields InequalityReport objects from
its run() generator and is built by a create_*_suite factory.
"""

from .base import CORPUS, SuiteCase, VerificationSuite
from .fixtures import Fixtures, parse_fixtures, read_fixtures, write_fixtures
from .maximal_suites import (
    ContinuitySuite,
    Corollary1Suite,
    Theorem1Suite,
    Theorem2Suite,
    create_continuity_suite,
    create_corollary1_suite,
    create_theorem1_suite,
    create_theorem2_suite,
)
from .measure_suites import (
    DoublingSuite,
    Lemma1Suite,
    Lemma2Suite,
    create_doubling_suite,
    create_lemma1_suite,
    create_lemma2_suite,
)
from .potential_suites import (
    Lemma3Suite,
    Theorem3Suite,
    Theorem4Suite,
    create_lemma3_suite,
    create_theorem3_suite,
    create_theorem4_suite,
)
from .registry import SUITE_NAMES, calibrate_fixtures, create_suite, run_suite
from .reports import InequalityReport, SuiteReport
from .spectral_suites import (
    Corollary2KernelSuite,
    Lemma4Suite,
    Lemma5Suite,
    create_corollary2_kernel_suite,
    create_lemma4_suite,
    create_lemma5_suite,
)

__all__ = [
    'InequalityReport',
    'SuiteReport',
    'Fixtures',
    'parse_fixtures',
    'read_fixtures',
    'write_fixtures',
    'CORPUS',
    'SuiteCase',
    'VerificationSuite',
    'SUITE_NAMES',
    'create_suite',
    'run_suite',
    'calibrate_fixtures',
    'Lemma1Suite',
    'Lemma2Suite',
    'DoublingSuite',
    'Theorem1Suite',
    'Theorem2Suite',
    'ContinuitySuite',
    'Corollary1Suite',
    'Lemma3Suite',
    'Lemma4Suite',
    'Lemma5Suite',
    'Corollary2KernelSuite',
    'Theorem3Suite',
    'Theorem4Suite',
    'create_lemma1_suite',
    'create_lemma2_suite',
    'create_doubling_suite',
    'create_theorem1_suite',
    'create_theorem2_suite',
    'create_continuity_suite',
    'create_corollary1_suite',
    'create_lemma3_suite',
    'create_lemma4_suite',
    'create_lemma5_suite',
    'create_corollary2_kernel_suite',
    'create_theorem3_suite',
    'create_theorem4_suite',
]
