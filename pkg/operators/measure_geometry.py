"""
Measure Geometry
================

The weighted measure |E| = integral over E of sh^(2 lambda) t dt, the intervals
H(x, r) = (x - r, x + r) cut to [0, inf), and the two-sided envelopes of the
measure of origin balls.
"""

import math
from typing import Literal

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import DomainError
from numerics.params import GegenbauerParams
from numerics.quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    integrate_finite,
    integrate_singular,
    panel_rule,
)

Regime = Literal["small_radius", "large_radius"]


class WeightedInterval(BaseModel):
    """H(x, r) = (x - r, x + r) intersected with [0, inf)"""
    model_config = ConfigDict(frozen=True)

    center: float = Field(..., ge=0.0, description="Centre x")
    radius: float = Field(..., gt=0.0, description="Radius r")

    @property
    def endpoints(self) -> tuple[float, float]:
        return (max(self.center - self.radius, 0.0), self.center + self.radius)

    @property
    def touches_origin(self) -> bool:
        return self.center - self.radius <= 0.0


class EnvelopeResult(BaseModel):
    """Measured origin-ball measure and the envelope bracketing it"""
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    measured: float
    error_estimate: float = Field(0.0, ge=0.0)
    regime: Regime
    comparison: float = Field(1.0, description="Comparison function the constants multiply")
    constants_used: dict[str, float] = Field(default_factory=dict, description="Constants entering lower and upper")
    printed_constants: dict[str, float] = Field(default_factory=dict, description="Constants as printed, for comparison")

    @property
    def brackets(self) -> bool:
        return self.lower <= self.measured + self.error_estimate and self.measured - self.error_estimate <= self.upper

    @property
    def printed_brackets(self) -> bool:
        lower = self.printed_constants.get("lower", 0.0) * self.comparison
        return lower <= self.measured + self.error_estimate


def _sinh_ratio(t: float) -> float:
    return math.sinh(t) / t if t > 0.0 else 1.0


def ball_measure_result(
    params: GegenbauerParams,
    iv: WeightedInterval,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> IntegralResult:
    lam = params.lam
    lo, hi = iv.endpoints
    if lo == 0.0:
        # t^(2 lambda) is the weight, (sh t / t)^(2 lambda) is smooth
        return integrate_singular(lambda t: _sinh_ratio(t) ** (2.0 * lam), 0.0, hi, spec.with_exponents(2.0 * lam, 0.0))
    return integrate_finite(lambda t: math.sinh(t) ** (2.0 * lam), lo, hi, spec)


def ball_measure(params: GegenbauerParams, iv: WeightedInterval, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """|H(x, r)| by adaptive quadrature"""
    return ball_measure_result(params, iv, spec).value


def cumulative_measure(params: GegenbauerParams, t, order: int = 16, max_width: float = 0.25) -> np.ndarray:
    """integral from 0 to t of sh^(2 lambda) s ds for every entry of t, sharing one panel rule"""
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0.0):
        raise DomainError("cumulative_measure needs t >= 0")
    top = float(np.max(ts)) if ts.size else 0.0
    count = max(1, int(math.ceil(top / max_width)))
    edges = np.unique(np.concatenate([[0.0], np.linspace(0.0, top, count + 1), ts.ravel()]))
    if edges.size < 2:
        return np.zeros_like(ts)
    _, weights = panel_rule(
        edges,
        order,
        weight=params.measure_weight,
        origin=0.0,
        origin_exponent=2.0 * params.lam,
    )
    running = np.concatenate([[0.0], np.cumsum(weights.sum(axis=-1))])
    return running[np.searchsorted(edges, ts)]


def ball_measure_table(params: GegenbauerParams, x, r, order: int = 16) -> np.ndarray:
    """|H(x, r)| on the broadcast of x and r"""
    xs, rs = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(r, dtype=float))
    if np.any(rs <= 0.0):
        raise DomainError("radii must be positive")
    lo, hi = np.maximum(xs - rs, 0.0), xs + rs
    both = cumulative_measure(params, np.concatenate([lo.ravel(), hi.ravel()]), order)
    size = lo.size
    return (both[size:] - both[:size]).reshape(xs.shape)


def small_radius_constants(params: GegenbauerParams) -> dict[str, float]:
    lam, c = params.lam, params.regime_constant
    return {
        "lower": 2.0 ** (lam + 1.5) / ((2.0 * lam + 1.0) * (1.0 + math.cosh(c)) ** (0.5 - lam)),
        "upper": 2.0 ** (2.0 * lam + 1.0) / (2.0 * lam + 1.0),
    }


def large_radius_constants(params: GegenbauerParams) -> dict[str, float]:
    lam = params.lam
    return {
        "lower": 2.0 ** (2.0 * lam + 1.0) / ((2.0 * lam + 1.0) * 3.0 ** (2.0 * lam + 1.0)),
        "upper": 4.0**lam / (2.0 * lam),
    }


def printed_constants(params: GegenbauerParams, regime: Regime) -> dict[str, float]:
    """The envelope constants exactly as they are usually quoted"""
    lam = params.lam
    if regime == "small_radius":
        return {
            "lower": 2.0 ** (2.0 * lam + 2.0) / ((2.0 * lam + 1.0) * (1.0 + math.cosh(1.0)) ** (0.5 - lam)),
            "upper": 2.0 ** (2.0 * lam + 1.0) / (2.0 * lam + 1.0),
        }
    return {
        "lower": 2.0 ** (4.0 * lam + 1.0) / ((2.0 * lam + 1.0) * 3.0 ** (2.0 * lam + 1.0)),
        "upper": 4.0**lam / (2.0 * lam),
    }


def comparison_function(params: GegenbauerParams, r: float, regime: Regime) -> float:
    lam = params.lam
    if regime == "small_radius":
        return math.sinh(0.5 * r) ** (2.0 * lam + 1.0)
    return math.cosh(0.5 * r) ** (4.0 * lam)


def lemma1_envelope(
    params: GegenbauerParams,
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    regime: Regime | None = None,
) -> EnvelopeResult:
    """
    Two-sided envelope of |H(0, r)|.

    Small radii (r <= c) compare against (sh r/2)^(2 lambda + 1), large radii
    against (ch r/2)^(4 lambda). The lower constants are the ones the estimate
    chain actually yields; the quoted ones are carried alongside.
    """
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    if regime is None:
        regime = "small_radius" if r <= params.regime_constant else "large_radius"
    constants = small_radius_constants(params) if regime == "small_radius" else large_radius_constants(params)
    shape = comparison_function(params, r, regime)
    measured = ball_measure_result(params, WeightedInterval(center=0.0, radius=r), spec)
    quoted = printed_constants(params, regime)
    if quoted["lower"] * shape > measured.value:
        logger.debug(
            f"quoted lower constant {quoted['lower']:.6g} overshoots |H(0,{r:g})| = {measured.value:.6g}; "
            f"using {constants['lower']:.6g}"
        )
    return EnvelopeResult(
        lower=constants["lower"] * shape,
        upper=constants["upper"] * shape,
        measured=measured.value,
        error_estimate=measured.error_estimate,
        regime=regime,
        comparison=shape,
        constants_used=constants,
        printed_constants=quoted,
    )


def lemma2_case(params: GegenbauerParams, x: float, r: float) -> str:
    c = params.regime_constant
    if r <= c:
        return "a.near" if x <= r else "a.far"
    return "b.near" if x <= 2.0 * r else "b.far"


def lemma2_bound(params: GegenbauerParams, x: float, r: float) -> float:
    """Comparison value for |H(x, r)|, up to a constant depending on lambda only"""
    if x < 0.0 or not r > 0.0:
        raise DomainError(f"need x >= 0 and r > 0, got x={x}, r={r}")
    lam = params.lam
    case = lemma2_case(params, x, r)
    if case == "a.near":
        return r ** (2.0 * lam + 1.0)
    if case == "a.far":
        return math.cosh(x) ** (2.0 * lam)
    if case == "b.near":
        return math.cosh(r) ** (2.0 * lam)
    return math.cosh(x) ** (2.0 * lam) * math.cosh(r) ** (2.0 * lam)


def doubling_ratio(params: GegenbauerParams, x: float, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """|H(x, 2r)| / |H(x, r)|"""
    if not r > 0.0:
        raise DomainError(f"doubling ratio needs r > 0, got {r}")
    inner = ball_measure(params, WeightedInterval(center=x, radius=r), spec)
    if inner == 0.0:
        raise DomainError(f"|H({x}, {r})| vanished")
    return ball_measure(params, WeightedInterval(center=x, radius=2.0 * r), spec) / inner


def doubling_sweep(params: GegenbauerParams, x, r) -> float:
    """sup of the doubling ratio over the product of the x and r grids"""
    xs, rs = np.meshgrid(np.asarray(x, dtype=float), np.asarray(r, dtype=float), indexing="ij")
    ratios = ball_measure_table(params, xs, 2.0 * rs) / ball_measure_table(params, xs, rs)
    return float(np.max(ratios))


def elementary_sinh_check(c: float, n: int = 1000) -> tuple[bool, float]:
    """t <= sh t <= e^(2c) t on n points of [0, 2c]; returns the verdict and the worst slack"""
    t = np.linspace(0.0, 2.0 * c, n)
    sh = np.sinh(t)
    lower_slack, upper_slack = sh - t, math.exp(2.0 * c) * t - sh
    worst = float(min(np.min(lower_slack), np.min(upper_slack)))
    return worst >= 0.0, worst


def origin_ball_constant(params: GegenbauerParams) -> float:
    """C with |H(0, r)| <= C (sh r/2)^(2 lambda + 1) for every r > 0"""
    lam, c = params.lam, params.regime_constant
    small = small_radius_constants(params)["upper"]
    # for r > c: (ch r/2)^(4 lambda) <= (ch r/2)^(2 lambda + 1) <= (coth(c/2) sh r/2)^(2 lambda + 1)
    large = large_radius_constants(params)["upper"] * (1.0 / math.tanh(0.5 * c)) ** (2.0 * lam + 1.0)
    return max(small, large)


def origin_ball_envelope(params: GegenbauerParams, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> EnvelopeResult:
    constant = origin_ball_constant(params)
    measured = ball_measure_result(params, WeightedInterval(center=0.0, radius=r), spec)
    regime: Regime = "small_radius" if r <= params.regime_constant else "large_radius"
    return EnvelopeResult(
        lower=0.0,
        upper=constant * math.sinh(0.5 * r) ** (2.0 * params.lam + 1.0),
        measured=measured.value,
        error_estimate=measured.error_estimate,
        regime=regime,
        constants_used={"upper": constant},
    )


def weighted_rule(
    params: GegenbauerParams,
    hi: float,
    breaks=(),
    order: int = 16,
    max_width: float = 0.25,
) -> tuple[np.ndarray, np.ndarray]:
    """Flat nodes and weights for integrals over [0, hi] against sh^(2 lambda) t, split at breaks"""
    count = max(1, int(math.ceil(hi / max_width)))
    inner = [b for b in breaks if 0.0 < b < hi]
    edges = np.unique(np.concatenate([np.linspace(0.0, hi, count + 1), np.asarray(inner, dtype=float)]))
    nodes, weights = panel_rule(
        edges,
        order,
        weight=params.measure_weight,
        origin=0.0,
        origin_exponent=2.0 * params.lam,
    )
    return nodes.ravel(), weights.ravel()
