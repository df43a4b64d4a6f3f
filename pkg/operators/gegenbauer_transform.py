"""
Gegenbauer Transform
====================

The transform pair

    f_P(gamma) = integral over t >= 1 of f(t) P_gamma(t) (t^2 - 1)^(lambda - 1/2) dt
    f_Q(gamma) = the same with Q_gamma

and the inverses against the other eigenfunction, with constants fitted by
least squares instead of taken from a closed form. Substituting t = ch x turns
(t^2 - 1)^(lambda - 1/2) dt into sh^(2 lambda) x dx, so every integral here
runs in x against the weighted measure: the endpoint power (t - 1)^(lambda - 1/2)
becomes the x^(2 lambda) power handled by the singular rule at x = 0.

Q_gamma(ch t) is defined through the shift: the quotient of the transforms of
A_t f and f, which does not depend on f once f lives beyond t.
"""

import math
from typing import Callable, Literal, Optional

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from numerics.errors import CalibrationError, DivergentNorm, DomainError, QuotientError
from numerics.params import GegenbauerParams
from numerics.quadrature import (
    IntegralResult,
    QuadratureSpec,
    exponential_tail,
    integrate_finite,
    integrate_semi_infinite,
    integrate_singular,
)
from numerics.special_functions import (
    eigenvalue,
    legendre_p,
    legendre_p_at_one,
    printed_cstar_terms,
    spectral_cutoff,
    spectral_rule,
    spherical_function,
)

from .measure_geometry import weighted_rule
from .shift_operator import ShiftedFunction, shift_table
from .test_functions import Bump, GApplied, TestFunction, csv_text, truncation_window

TRANSFORM_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-9)
QUOTIENT_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-8)
GAMMA_MAX = 12.0
SPECTRAL_ORDER = 24
TRANSFORM_ORDER = 24
CALIBRATION_POINTS = 9
QUOTIENT_SPREAD = 0.01
QUOTIENT_FLOOR = 1e-280
CSTAR_CEILING = 0.9

Eigenfunction = Literal["P", "Q"]


class SpectralFunction(BaseModel):
    """A transform sampled on a gamma-grid, with the quadrature weights of that grid when it came from a rule"""
    model_config = ConfigDict(frozen=True)

    gamma_grid: tuple[float, ...] = Field(..., min_length=1, description="Increasing degrees, all above 1")
    values: tuple[float, ...] = Field(..., description="Transform values, one per degree")
    weights: Optional[tuple[float, ...]] = Field(
        None, description="Weights of the gamma-rule, (gamma^2 - 1)^(lambda - 1/2) folded in"
    )
    quadrature_note: dict[str, float] = Field(default_factory=dict, description="Rule sizes and tolerances used")

    @field_validator("gamma_grid")
    @classmethod
    def _above_one(cls, grid: tuple[float, ...]) -> tuple[float, ...]:
        gs = np.asarray(grid)
        if not gs[0] > 1.0:
            raise ValueError(f"gamma grid must start above 1, got {gs[0]}")
        if np.any(np.diff(gs) <= 0.0):
            raise ValueError("gamma grid must be strictly increasing")
        return grid

    @model_validator(mode="after")
    def _matching(self) -> "SpectralFunction":
        if len(self.values) != len(self.gamma_grid):
            raise ValueError(f"{len(self.values)} values for {len(self.gamma_grid)} degrees")
        if self.weights is not None and len(self.weights) != len(self.gamma_grid):
            raise ValueError(f"{len(self.weights)} weights for {len(self.gamma_grid)} degrees")
        return self

    @property
    def gamma(self) -> np.ndarray:
        return np.asarray(self.gamma_grid)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values)

    def weighted(self) -> np.ndarray:
        """values times rule weights; fails for grids that did not come from a rule"""
        if self.weights is None:
            raise DomainError("this spectral function carries no gamma-rule weights and cannot be integrated")
        return self.array * np.asarray(self.weights)

    def scaled(self, factor: float) -> "SpectralFunction":
        return self.model_copy(update={"values": tuple(float(factor) * v for v in self.values)})

    def to_csv(self) -> str:
        return csv_text(("gamma", "value"), self.gamma_grid, self.values)


class CStarCalibration(BaseModel):
    """Fitted constant of an inverse transform and the round-trip residual it achieves"""
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Multiplier of the inverse integral")
    residual: float = Field(..., ge=0.0, description="Relative L2 round-trip error at the fitted value")
    reference_function: str = Field(..., description="Registry label of the function used to fit")
    eigenfunction: Eigenfunction = Field("P", description="P for the f_P -> f inverse, Q for f_Q -> f")

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"calibrated constant must be finite, got {value}")
        return value


class ParsevalResult(BaseModel):
    """Both sides of the Parseval-type identity, the right side with either transform of the shifted function"""
    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs_p: float
    rhs_q: float

    @property
    def matching(self) -> Eigenfunction:
        return "P" if abs(self.rhs_p - self.lhs) <= abs(self.rhs_q - self.lhs) else "Q"

    @property
    def pair(self) -> tuple[float, float]:
        return (self.lhs, self.rhs_p)


def _degree(gamma) -> float:
    g = float(getattr(gamma, "gamma", gamma))
    if g < 1.0:
        raise DomainError(f"degree gamma must be >= 1, got {g}")
    return g


def _sinh_ratio(x: float) -> float:
    return math.sinh(x) / x if x > 0.0 else 1.0


def _weighted_integral(
    params: GegenbauerParams,
    f: TestFunction,
    kernel: Callable[[float], float],
    spec: QuadratureSpec,
    kernel_bound: Optional[tuple[float, float]],
    kernel_growth: float = 0.0,
) -> IntegralResult:
    """
    Integral over x >= 0 of f(ch x) kernel(x) sh^(2 lambda) x dx.

    kernel_bound = (K, rho) states |kernel(x)| sh^(2 lambda) x <= K e^(-rho x); it
    certifies the tail. Without it the kernel may grow like e^(kernel_growth x)
    and f must decay faster.
    """
    lam = params.lam
    lo, hi = f.support
    points = list(f.breakpoints)

    def integrand(x: float) -> float:
        return float(f.of_x(x)) * kernel(x) * math.sinh(x) ** (2.0 * lam)

    total = IntegralResult(value=0.0)
    start = lo
    if lo == 0.0:
        # x^(2 lambda) is the weight, (sh x / x)^(2 lambda) f kernel is bounded
        start = min(hi, 1.0)
        total = integrate_singular(
            lambda x: float(f.of_x(x)) * kernel(x) * _sinh_ratio(x) ** (2.0 * lam),
            0.0,
            start,
            spec.with_exponents(2.0 * lam, 0.0),
            points,
        )
    if math.isfinite(hi):
        return total + integrate_finite(integrand, start, hi, spec, points)

    rate = f.decay
    amplitude = f.amplitude
    if kernel_bound is not None and math.isfinite(amplitude):
        scale, rho = kernel_bound
        decay = (rate if rate is not None else 0.0) + rho
        if decay > 0.0:
            tail = exponential_tail(amplitude * scale, decay)
            return total + integrate_semi_infinite(integrand, start, spec, tail=tail, points=points)
    if rate is None or not rate > kernel_growth:
        raise DivergentNorm(f"transform integral of {f.label} has no certified tail")
    policy = spec.truncation.model_copy(update={"tail_bound_exponent": rate - kernel_growth})
    relaxed = spec.model_copy(update={"truncation": policy})
    return total + integrate_semi_infinite(integrand, start, relaxed, points=points)


def forward_p(
    params: GegenbauerParams,
    f: TestFunction,
    gamma,
    spec: QuadratureSpec = TRANSFORM_SPEC,
) -> float:
    """f_P(gamma) by adaptive quadrature"""
    g = _degree(gamma)
    if f.is_zero:
        return 0.0
    # |P_g(ch x)| sh^(2 lambda) x <= P_g(1) (ch x)^(-g) <= P_g(1) 2^g e^(-g x)
    bound = (float(legendre_p_at_one(params, g)) * 2.0**g, g)
    kernel = lambda x: float(legendre_p(params, g, x))  # noqa: E731
    return _weighted_integral(params, f, kernel, spec, bound).value


def forward_q(
    params: GegenbauerParams,
    f: TestFunction,
    gamma,
    spec: QuadratureSpec = TRANSFORM_SPEC,
) -> float:
    """f_Q(gamma) by adaptive quadrature; Q_gamma grows like e^(gamma x), so f must be compact or decay faster"""
    g = _degree(gamma)
    if f.is_zero:
        return 0.0
    kernel = lambda x: float(spherical_function(params, g, x))  # noqa: E731
    return _weighted_integral(params, f, kernel, spec, None, kernel_growth=g + 2.0 * params.lam).value


def _transform_rule(
    params: GegenbauerParams,
    f: TestFunction,
    growth: float,
    order: int,
) -> tuple[np.ndarray, np.ndarray, float]:
    _, hi = truncation_window(f, growth=growth)
    nodes, weights = weighted_rule(params, hi, f.breakpoints, order)
    values = np.asarray(f.of_x(nodes))
    keep = values != 0.0
    return nodes[keep], weights[keep] * values[keep], hi


def spectral_gamma_max(params: GegenbauerParams, f: TestFunction, gamma_max: float = GAMMA_MAX) -> float:
    """gamma_max lowered to where the (ch x)^(-gamma-2 lambda) decay of P_gamma on the support of f clears the tail"""
    lo = f.support[0]
    if not lo > 0.0:
        return gamma_max
    return min(gamma_max, spectral_cutoff(params, lo, ceiling=gamma_max))


def _gamma_rule(
    params: GegenbauerParams,
    f: TestFunction,
    gammas,
    gamma_max: float,
    order: int,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    if gammas is None:
        return spectral_rule(params, spectral_gamma_max(params, f, gamma_max), order)
    gs = np.atleast_1d(np.asarray(gammas, dtype=float))
    if np.any(gs < 1.0):
        raise DomainError("degrees must be >= 1")
    return gs, None


def _spectral(
    gammas: np.ndarray,
    weights: Optional[np.ndarray],
    values: np.ndarray,
    note: dict[str, float],
) -> SpectralFunction:
    return SpectralFunction(
        gamma_grid=tuple(float(g) for g in gammas),
        values=tuple(float(v) for v in values),
        weights=None if weights is None else tuple(float(w) for w in weights),
        quadrature_note=note,
    )


def forward_p_grid(
    params: GegenbauerParams,
    f: TestFunction,
    gammas=None,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
    x_order: int = TRANSFORM_ORDER,
) -> SpectralFunction:
    """
    f_P on a gamma-grid through a fixed x-rule.

    Without explicit gammas the grid is the spectral rule on [1, gamma_max], with
    gamma_max cut down for f living far from the origin, and the result carries
    its weights so the inverse can integrate it.
    """
    gs, weights = _gamma_rule(params, f, gammas, gamma_max, order)
    nodes, weighted_values, hi = _transform_rule(params, f, -float(np.min(gs)), x_order)
    if nodes.size == 0:
        values = np.zeros_like(gs)
    else:
        values = legendre_p(params, gs[:, None], nodes[None, :]) @ weighted_values
    return _spectral(gs, weights, values, {"gamma_max": float(np.max(gs)), "order": order, "x_max": hi})


def forward_q_grid(
    params: GegenbauerParams,
    f: TestFunction,
    gammas=None,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
    x_order: int = TRANSFORM_ORDER,
) -> SpectralFunction:
    gs, weights = _gamma_rule(params, f, gammas, gamma_max, order)
    nodes, weighted_values, hi = _transform_rule(params, f, float(np.max(gs)) + 2.0 * params.lam, x_order)
    if nodes.size == 0:
        values = np.zeros_like(gs)
    else:
        values = spherical_function(params, gs[:, None], nodes[None, :]) @ weighted_values
    return _spectral(gs, weights, values, {"gamma_max": float(np.max(gs)), "order": order, "x_max": hi})


def _inverse_sum(params: GegenbauerParams, fhat: SpectralFunction, x, eigenfunction: Eigenfunction) -> np.ndarray:
    """Uncalibrated inverse: the gamma-rule sum of fhat times the other eigenfunction at ch x"""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0.0):
        raise DomainError("inverse transforms need x >= 0")
    weighted = fhat.weighted()
    if eigenfunction == "P":
        kernel = spherical_function(params, fhat.gamma[None, :], xs[:, None])
    else:
        kernel = legendre_p(params, fhat.gamma[None, :], xs[:, None])
    return np.asarray(kernel) @ weighted


def _checked(constant: Optional[CStarCalibration], eigenfunction: Eigenfunction) -> float:
    if constant is None:
        raise CalibrationError(f"inverse {eigenfunction}-transform needs a calibrated constant")
    if constant.eigenfunction != eigenfunction:
        raise CalibrationError(f"constant was fitted for the {constant.eigenfunction}-inverse, not {eigenfunction}")
    return constant.value


def _output(values: np.ndarray, x) -> float | np.ndarray:
    return float(values[0]) if np.ndim(x) == 0 else values


def inverse_p(
    params: GegenbauerParams,
    fhat: SpectralFunction,
    x,
    cstar: Optional[CStarCalibration],
) -> float | np.ndarray:
    """c* times the integral of f_P(gamma) Q_gamma(ch x) (gamma^2 - 1)^(lambda - 1/2) over the rule"""
    value = _checked(cstar, "P")
    return _output(value * _inverse_sum(params, fhat, x, "P"), x)


def inverse_q(
    params: GegenbauerParams,
    fhat_q: SpectralFunction,
    x,
    c_lambda: Optional[CStarCalibration],
) -> float | np.ndarray:
    value = _checked(c_lambda, "Q")
    return _output(value * _inverse_sum(params, fhat_q, x, "Q"), x)


def fit_scalar(raw, target) -> tuple[float, float]:
    """c minimising ||c raw - target||_2 and the relative residual at that c"""
    raw = np.asarray(raw, dtype=float)
    target = np.asarray(target, dtype=float)
    norm_raw = float(raw @ raw)
    norm_target = float(np.linalg.norm(target))
    if norm_raw == 0.0 or norm_target == 0.0:
        raise CalibrationError("cannot fit a constant against a vanishing reconstruction or reference")
    value = float(raw @ target) / norm_raw
    residual = float(np.linalg.norm(value * raw - target)) / norm_target
    return value, residual


def calibration_grid(reference: TestFunction, count: int = CALIBRATION_POINTS) -> np.ndarray:
    """Interior points of the reference support where the round trip is compared"""
    lo, hi = truncation_window(reference, tail_tol=1e-6)
    return np.linspace(lo, hi, count + 2)[1:-1]


def _calibrate(
    params: GegenbauerParams,
    reference: TestFunction,
    eigenfunction: Eigenfunction,
    gamma_max: float,
    order: int,
    ceiling: float,
) -> CStarCalibration:
    transform = forward_p_grid if eigenfunction == "P" else forward_q_grid
    fhat = transform(params, reference, gamma_max=gamma_max, order=order)
    xs = calibration_grid(reference)
    raw = _inverse_sum(params, fhat, xs, eigenfunction)
    value, residual = fit_scalar(raw, reference.of_x(xs))
    logger.info(f"📐 {eigenfunction}-inverse constant {value:.6g} from {reference.label}, residual {residual:.3g}")
    if not value > 0.0:
        raise CalibrationError(f"{eigenfunction}-inverse constant came out non-positive: {value}")
    if residual > ceiling:
        raise CalibrationError(
            f"{eigenfunction}-inverse round trip residual {residual:.3g} above ceiling {ceiling:g} for {reference.label}"
        )
    return CStarCalibration(
        value=value,
        residual=residual,
        reference_function=reference.label,
        eigenfunction=eigenfunction,
    )


def calibrate_cstar(
    params: GegenbauerParams,
    reference: TestFunction,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
    ceiling: float = CSTAR_CEILING,
) -> CStarCalibration:
    """
    Fit c* so that inverse_p(forward_p(reference)) matches the reference.

    The quoted closed form of c* carries the integration variable inside a
    Gamma factor; its gamma-free pieces are logged for comparison only.
    """
    terms = printed_cstar_terms(params)
    logger.debug(f"quoted c* pieces at lambda={params.lam:g}: {terms}")
    return _calibrate(params, reference, "P", gamma_max, order, ceiling)


def calibrate_c_lambda(
    params: GegenbauerParams,
    reference: TestFunction,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
    ceiling: float = CSTAR_CEILING,
) -> CStarCalibration:
    """Fit the constant of inverse_q the same way, independently of c*"""
    return _calibrate(params, reference, "Q", gamma_max, order, ceiling)


def round_trip_error(
    params: GegenbauerParams,
    f: TestFunction,
    cstar: CStarCalibration,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
) -> float:
    """Relative L2 error of inverse o forward on the calibration grid of f"""
    transform = forward_p_grid if cstar.eigenfunction == "P" else forward_q_grid
    fhat = transform(params, f, gamma_max=gamma_max, order=order)
    xs = calibration_grid(f)
    rebuilt = cstar.value * _inverse_sum(params, fhat, xs, cstar.eigenfunction)
    target = np.asarray(f.of_x(xs))
    return float(np.linalg.norm(rebuilt - target) / np.linalg.norm(target))


def quotient_references(t: float) -> tuple[Bump, Bump]:
    """Two bumps living beyond t, where the shift quotient is reference independent"""
    return (Bump(a=t + 0.25, b=t + 1.25), Bump(a=t + 0.5, b=t + 2.0))


def _quotient(numerators: np.ndarray, denominators: np.ndarray, t: float) -> np.ndarray:
    if np.any(np.abs(denominators) < QUOTIENT_FLOOR):
        raise QuotientError(f"reference transform vanishes at t={t}")
    ratios = numerators / denominators
    first, second = ratios
    spread = np.abs(first - second) / np.maximum(np.abs(first), np.abs(second))
    worst = float(np.max(spread))
    if worst > QUOTIENT_SPREAD:
        raise QuotientError(f"Q quotient depends on the reference: spread {worst:.3g} at t={t}")
    return 0.5 * (first + second)


def legendre_q(params: GegenbauerParams, gamma, t: float, spec: QuadratureSpec = QUOTIENT_SPEC) -> float:
    """Q_gamma(ch t) as (A_t f)_P(gamma) / f_P(gamma) for two references f, which must agree"""
    g = _degree(gamma)
    if t < 0.0:
        raise DomainError(f"Q needs t >= 0, got {t}")
    if t == 0.0:
        return 1.0
    numerators, denominators = [], []
    for reference in quotient_references(t):
        denominators.append(forward_p(params, reference, g, spec))
        numerators.append(forward_p(params, ShiftedFunction(base=reference, params=params, t=t), g, spec))
    return float(_quotient(np.asarray(numerators), np.asarray(denominators), t))


def shift_multiplier_check(
    params: GegenbauerParams,
    f: TestFunction,
    t: float,
    gamma,
    spec: QuadratureSpec = QUOTIENT_SPEC,
) -> tuple[float, float]:
    """((A_t f)_P(gamma), f_P(gamma) Q_gamma(ch t))"""
    g = _degree(gamma)
    if f.is_zero:
        return (0.0, 0.0)
    fhat = forward_p(params, f, g, spec)
    if t == 0.0:
        return (fhat, fhat)
    lhs = forward_p(params, ShiftedFunction(base=f, params=params, t=t), g, spec)
    return (lhs, fhat * legendre_q(params, g, t, spec))


def g_multiplier_check(
    params: GegenbauerParams,
    f: TestFunction,
    gamma,
    step: Optional[float] = None,
    spec: QuadratureSpec = TRANSFORM_SPEC,
) -> tuple[float, float]:
    """((G f)_P(gamma), gamma (gamma + 2 lambda) f_P(gamma)) for f compactly supported away from x = 0"""
    g = _degree(gamma)
    if f.is_zero:
        return (0.0, 0.0)
    lhs = forward_p(params, GApplied(base=f, params=params, step=step), g, spec)
    return (lhs, float(eigenvalue(params, g)) * forward_p(params, f, g, spec))


def parseval_check(
    params: GegenbauerParams,
    f: TestFunction,
    g: TestFunction,
    t: float,
    cstar: CStarCalibration,
    gamma_max: float = GAMMA_MAX,
    order: int = SPECTRAL_ORDER,
) -> ParsevalResult:
    """
    integral of f A_t g against the weight, and c* times the gamma-integral of
    f_P against both transforms of A_t g.

    Which transform of A_t g reproduces the left side is reported, not assumed.
    """
    value = _checked(cstar, "P")
    if f.is_zero or g.is_zero:
        return ParsevalResult(lhs=0.0, rhs_p=0.0, rhs_q=0.0)
    nodes, weighted_f, _ = _transform_rule(params, f, 0.0, TRANSFORM_ORDER)
    lhs = float(np.sum(weighted_f * shift_table(params, g, t, nodes)))

    shifted = ShiftedFunction(base=g, params=params, t=t)
    f_hat = forward_p_grid(params, f, gamma_max=gamma_max, order=order)
    shifted_p = forward_p_grid(params, shifted, f_hat.gamma)
    shifted_q = forward_q_grid(params, shifted, f_hat.gamma)
    rhs_p = value * float(f_hat.weighted() @ shifted_p.array)
    rhs_q = value * float(f_hat.weighted() @ shifted_q.array)
    logger.debug(f"parseval at t={t:g}: lhs {lhs:.6g}, P-side {rhs_p:.6g}, Q-side {rhs_q:.6g}")
    return ParsevalResult(lhs=lhs, rhs_p=rhs_p, rhs_q=rhs_q)
