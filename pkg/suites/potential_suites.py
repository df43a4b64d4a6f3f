"""
Function Space and Potential Suites
===================================

The Morrey embedding and BMO norm, the Sobolev and weak (1, q) bounds of the
Riesz potential, and the BMO bound of its modified form on the line
p alpha = 2 lambda + 1.
"""

import sys
from textwrap import dedent
from typing import Optional

import numpy as np

from numerics.params import PotentialParams
from numerics_config import NumericsSettings
from operators.function_spaces import bmo_norm, embedding_check, embedding_constant, lp_norm, morrey_norm
from operators.riesz_potential import (
    absolute_convergence,
    bmo_ratio,
    create_potential_params,
    local_part_envelope,
    modified_riesz,
    modified_split,
    riesz_apply,
    riesz_apply_kernel_form,
    riesz_apply_split,
    sobolev_ratio,
    weak_1q_profile,
)
from operators.test_functions import ConstantOne, Restricted, TestFunction

from .base import CORPUS, SuiteCase, VerificationSuite, upper_fixture
from .fixtures import Fixtures

EMBEDDING_P = 2.0
MORREY_TOL = 1e-3
SOBOLEV_ALPHA = 0.5
SOBOLEV_P = 2.0
SPLIT_TOL = 1e-4
SPLIT_RADII = (0.25, 1.0, 4.0)
KERNEL_FORM_TOL = 1e-3
SAMPLE_POINT = 1.5
SAMPLE_FUNCTION = "bump:1,2"
WEAK_THRESHOLDS = np.geomspace(1e-3, 1.0, 12)
INDEPENDENCE_TOL = 1e-5
INDEPENDENCE_RADII = (0.5, 2.0, 6.0)
# r / 4 must reach into the support of the sample function for F1 - a1 to be nonzero
LOCAL_RADII = (6.0, 8.0)
LOCAL_FLOOR = 1e-8
BMO_P = 3.0
BMO_FUNCTIONS = (("bump:1,2", None), ("exp_decay:2", 6.0))


class Lemma3Suite(VerificationSuite):
    name = "lemma3"
    provenance = "Lemma 3, Morrey embedding; BMO norm of constants"
    description: str = dedent("""\
    ||f||_{L_{1, 2 lambda + 1 - alpha}} <= C ||f||_{L_{p, gamma}} with the
    Holder constant and with the frozen constant; the gamma = 0 Morrey norm
    equals the L_p norm; the modified norm dominates the plain one; the BMO
    norm of a constant is exactly zero.
    """)

    def morrey_exponent(self) -> float:
        return (2.0 * self.settings.lam + 1.0) / 3.0

    def embedding_ratio(self, key: str) -> tuple[float, float]:
        return embedding_check(self.params, self.function(key), EMBEDDING_P, self.morrey_exponent(), grid=self.grid)

    def cases(self) -> list[SuiteCase]:
        cases = []
        for key in CORPUS:
            cases.append(self.case(f"lem3.embedding@{key}", "embedding", key=key))
            cases.append(self.case(f"lem3.morrey_gamma0@{key}", "morrey_gamma0", key=key))
            cases.append(self.case(f"lem3.modified@{key}", "modified", key=key))
        cases.append(self.case("lem3.bmo_constant", "bmo_constant"))
        return cases

    def check_embedding(self, statement_id: str, key: str):
        lhs, rhs = self.embedding_ratio(key)
        holder = embedding_constant(self.params, EMBEDDING_P)
        yield self.compare(statement_id, lhs, holder * rhs, constant=holder)
        frozen = self.constant("lem3.embedding")
        yield self.compare(f"{statement_id}.frozen", lhs, frozen * rhs, constant=frozen)

    def check_morrey_gamma0(self, statement_id: str, key: str):
        f = self.function(key)
        morrey = morrey_norm(self.params, f, EMBEDDING_P, 0.0, grid=self.grid)
        yield self.compare(statement_id, morrey, lp_norm(self.params, f, EMBEDDING_P), tolerance=MORREY_TOL, comparison="close")

    def check_modified(self, statement_id: str, key: str):
        f, gamma_m = self.function(key), self.morrey_exponent()
        plain = morrey_norm(self.params, f, EMBEDDING_P, gamma_m, grid=self.grid)
        modified = morrey_norm(self.params, f, EMBEDDING_P, gamma_m, modified=True, grid=self.grid)
        yield self.compare(statement_id, plain, modified)

    def check_bmo_constant(self, statement_id: str):
        yield self.compare(statement_id, bmo_norm(self.params, ConstantOne(), self.grid), 0.0, constant=0.0)

    def calibrate(self) -> dict[str, float]:
        ratios = [lhs / rhs for lhs, rhs in (self.embedding_ratio(key) for key in CORPUS) if rhs > 0.0]
        return {"lem3.embedding": upper_fixture(max(ratios))}


class Theorem3Suite(VerificationSuite):
    name = "theorem3"
    provenance = "Theorem 3, Riesz potential: convergence, Sobolev and weak (1, q) bounds"
    description: str = dedent("""\
    The potential of |f| is finite on the grid; 1/p - 1/q = alpha/(2 lambda + 1)
    holds exactly; the near/far split and the literal shifted-kernel form
    agree with the dual form; ||I f||_q / ||f||_p and the weak (1, q)
    constant stay below frozen values.
    """)

    def potential(self, p: float = SOBOLEV_P) -> PotentialParams:
        return create_potential_params(self.params, SOBOLEV_ALPHA, p)

    def sobolev(self, key: str) -> float:
        return sobolev_ratio(self.params, self.potential(), self.function(key))

    def weak_constant(self, key: str) -> float:
        pp = self.potential(1.0)
        f = self.function(key)
        profile = weak_1q_profile(self.params, pp, f, tuple(WEAK_THRESHOLDS * f.amplitude))
        return profile.weak_q_constant(pp.q)

    def cases(self) -> list[SuiteCase]:
        cases = [self.case("thm3.q_arithmetic", "q_arithmetic")]
        cases.extend(self.case(f"thm3.absolute@{key}", "absolute", key=key) for key in CORPUS)
        cases.extend(self.case(f"thm3.split@r={r:g}", "split", r=r) for r in SPLIT_RADII)
        cases.append(self.case(f"thm3.kernel_form@{SAMPLE_FUNCTION}", "kernel_form"))
        cases.extend(self.case(f"thm3.sobolev@{key}", "sobolev", key=key) for key in CORPUS)
        cases.extend(self.case(f"thm3.weak_1q@{key}", "weak", key=key) for key in CORPUS)
        return cases

    def check_q_arithmetic(self, statement_id: str):
        pp = self.potential()
        lhs = 1.0 / pp.p - 1.0 / pp.q
        rhs = pp.alpha / (2.0 * pp.lam + 1.0)
        yield self.compare(statement_id, lhs, rhs, tolerance=4.0 * sys.float_info.epsilon, comparison="close")

    def check_absolute(self, statement_id: str, key: str):
        xs = np.linspace(0.0, self.settings.x_max, self.settings.x_count)
        values = absolute_convergence(self.params, self.potential(), self.function(key), xs)
        yield self.compare(statement_id, float(np.max(values)), sys.float_info.max)

    def check_split(self, statement_id: str, r: float):
        f, pp = self.function(SAMPLE_FUNCTION), self.potential()
        near, far = riesz_apply_split(self.params, pp, f, SAMPLE_POINT, r)
        whole = riesz_apply(self.params, pp, f, SAMPLE_POINT)
        yield self.compare(statement_id, near + far, whole, tolerance=SPLIT_TOL, comparison="close")

    def check_kernel_form(self, statement_id: str):
        f, pp = self.function(SAMPLE_FUNCTION), self.potential()
        literal = riesz_apply_kernel_form(self.params, pp, f, SAMPLE_POINT)
        dual = riesz_apply(self.params, pp, f, SAMPLE_POINT)
        yield self.compare(statement_id, literal, dual, tolerance=KERNEL_FORM_TOL, comparison="close")

    def check_sobolev(self, statement_id: str, key: str):
        constant = self.constant("thm3.sobolev")
        yield self.compare(statement_id, self.sobolev(key), constant, constant=constant)

    def check_weak(self, statement_id: str, key: str):
        constant = self.constant("thm3.weak_1q")
        yield self.compare(statement_id, self.weak_constant(key), constant, constant=constant)

    def calibrate(self) -> dict[str, float]:
        return {
            "thm3.sobolev": upper_fixture(max(self.sobolev(key) for key in CORPUS)),
            "thm3.weak_1q": upper_fixture(max(self.weak_constant(key) for key in CORPUS)),
        }


class Theorem4Suite(VerificationSuite):
    name = "theorem4"
    provenance = "Theorem 4, modified Riesz potential into BMO on p alpha = 2 lambda + 1"
    description: str = dedent("""\
    The near/far decomposition of the modified potential sums to the same
    value for every split radius; the local part is bounded by the maximal
    function and the L_p norm; ||modified I f||_BMO / ||f||_p stays below the
    frozen constant.
    """)

    def potential(self) -> PotentialParams:
        return create_potential_params(self.params, (2.0 * self.settings.lam + 1.0) / BMO_P, BMO_P)

    def bmo_function(self, key: str, hi: Optional[float]) -> TestFunction:
        f = self.function(key)
        return f if hi is None else Restricted(base=f, hi=hi)

    def bmo(self, key: str, hi: Optional[float]) -> float:
        return bmo_ratio(self.params, self.potential(), self.bmo_function(key, hi), self.grid)

    def local_parts(self, r: float) -> tuple[float, float, float]:
        return local_part_envelope(
            self.params, self.potential(), self.function(SAMPLE_FUNCTION), SAMPLE_POINT, r, self.grid
        )

    def local_ratio(self, r: float) -> float:
        lhs, maximal, norm = self.local_parts(r)
        return lhs / (maximal + norm)

    def cases(self) -> list[SuiteCase]:
        cases = [self.case(f"thm4.independence@r={r:g}", "independence", r=r) for r in INDEPENDENCE_RADII]
        cases.extend(self.case(f"thm4.local@r={r:g}", "local", r=r) for r in LOCAL_RADII)
        cases.extend(
            self.case(f"thm4.bmo@{self.bmo_function(key, hi).label}", "bmo", key=key, hi=hi)
            for key, hi in BMO_FUNCTIONS
        )
        return cases

    def check_independence(self, statement_id: str, r: float):
        f, pp = self.function(SAMPLE_FUNCTION), self.potential()
        split = modified_split(self.params, pp, f, SAMPLE_POINT, r)
        whole = modified_riesz(self.params, pp, f, SAMPLE_POINT)
        yield self.compare(statement_id, split.total, whole, tolerance=INDEPENDENCE_TOL, comparison="close")

    def check_local(self, statement_id: str, r: float):
        lhs, maximal, norm = self.local_parts(r)
        # the local part must not vanish, or the envelope holds trivially
        yield self.compare(statement_id.replace("@", ".nonzero@", 1), lhs, LOCAL_FLOOR, comparison="ge")
        constant = self.constant("thm4.local")
        yield self.compare(statement_id, lhs / (maximal + norm), constant, constant=constant)

    def check_bmo(self, statement_id: str, key: str, hi: Optional[float]):
        constant = self.constant("thm4.bmo")
        yield self.compare(statement_id, self.bmo(key, hi), constant, constant=constant)

    def calibrate(self) -> dict[str, float]:
        return {
            "thm4.local": upper_fixture(max(self.local_ratio(r) for r in LOCAL_RADII)),
            "thm4.bmo": upper_fixture(max(self.bmo(key, hi) for key, hi in BMO_FUNCTIONS)),
        }


def create_lemma3_suite(settings: NumericsSettings, fixtures: Fixtures | None = None) -> Lemma3Suite:
    return Lemma3Suite(settings, fixtures)


def create_theorem3_suite(settings: NumericsSettings, fixtures: Fixtures | None = None) -> Theorem3Suite:
    return Theorem3Suite(settings, fixtures)


def create_theorem4_suite(settings: NumericsSettings, fixtures: Fixtures | None = None) -> Theorem4Suite:
    """
    Create the BMO suite on the line p alpha = 2 lambda + 1 with p = 3.

    Args:
        settings: Resolved numerics settings
        fixtures: Must hold thm4.local and thm4.bmo

    Returns:
        Theorem4Suite: Ready to run
    """
    return Theorem4Suite(settings, fixtures)
