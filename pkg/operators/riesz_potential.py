"""
Riesz-Gegenbauer Potential
==========================

Kernel form

    I f(ch x) = integral over t >= 0 of A_t k(x) f(ch t) sh^(2 lambda) t dt,   k(t) = (sh t)^(alpha - 2 lambda - 1)

evaluated through the equivalent dual form, integral of A_t f(ch x) (sh t)^(alpha - 1) dt,
and cross-checked against the literal shifted-kernel integral. The heat form
integrates the heat kernel against r^(alpha/2 - 1); the modified potential
subtracts k(t) on t > 1/4 so that p alpha = 2 lambda + 1 lands in BMO.
"""

import math
from typing import Literal, Optional

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from numerics.errors import DivergentNorm, DomainError, ParameterError
from numerics.params import GegenbauerParams, PotentialParams
from numerics.quadrature import (
    DEFAULT_SPEC,
    NESTED_INNER_SPEC,
    NESTED_OUTER_SPEC,
    ZERO,
    IntegralResult,
    QuadratureSpec,
    exponential_tail,
    integrate_finite,
    integrate_semi_infinite,
    integrate_singular,
    panel_rule,
)
from numerics.special_functions import eigenvalue, gamma_fn, heat_kernel_table, legendre_p, spectral_rule

from .function_spaces import bmo_norm, lp_norm
from .gegenbauer_transform import forward_p
from .maximal_operators import (
    MAX_PANEL,
    DistributionProfile,
    RadiusGrid,
    clip_kinks,
    create_radius_grid,
    maximal_G,
    superlevel_measure,
)
from .measure_geometry import weighted_rule
from .shift_operator import SHIFT_ORDER, shift_kinks_in_t, shift_power_kernel, shift_table
from .test_functions import GridFunction, Restricted, TestFunction, sample_grid, truncation_window

KERNEL_X_MIN = 0.05
POTENTIAL_SPAN = 6.0
PROFILE_POINTS = 257
CHI_THRESHOLD = 0.25
HEAT_R_MIN = 1e-6
HEAT_R_MAX = 30.0
HEAT_LOG_STEP = 0.05
KERNEL_GAMMA_MAX = 14.0


class BmoCenter(BaseModel):
    """Centring constants of the F1 + F2 split at radius r"""
    model_config = ConfigDict(frozen=True)

    a1: float = Field(..., description="Minus the k f mass over (0, r/4) outside (0, min(1/4, r/4))")
    a2: float = Field(..., description="The k f mass over (0, max(1/4, r/4)) outside (0, r/4)")
    a_f: float = Field(..., description="a1 + a2")

    @model_validator(mode="after")
    def _sum(self) -> "BmoCenter":
        if not math.isclose(self.a_f, self.a1 + self.a2, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError(f"a_f={self.a_f} differs from a1 + a2 = {self.a1 + self.a2}")
        return self


class ModifiedSplit(BaseModel):
    """F1, F2 and their centring constants at one (x, r)"""
    model_config = ConfigDict(frozen=True)

    x: float
    r: float
    f1: float
    f2: float
    center: BmoCenter

    @property
    def total(self) -> float:
        return self.f1 + self.f2

    @property
    def local_part(self) -> float:
        """F1 - a1, the potential of f restricted to t < r/4"""
        return self.f1 - self.center.a1


def create_potential_params(params: GegenbauerParams, alpha: float, p: float) -> PotentialParams:
    return PotentialParams(lam=params.lam, alpha=alpha, p=p)


def _checked(params: GegenbauerParams, pp: PotentialParams) -> PotentialParams:
    if not math.isclose(params.lam, pp.lam, rel_tol=0.0, abs_tol=1e-15):
        raise ParameterError(f"potential built for lambda={pp.lam}, operator has lambda={params.lam}")
    return pp


def _growth(pp: PotentialParams) -> float:
    """Exponential growth rate of (sh t)^(alpha - 1) in t"""
    return max(0.0, pp.alpha - 1.0)


def _dual_window(f: TestFunction, pp: PotentialParams, x: float) -> tuple[float, float]:
    """t-range where A_t f(ch x) can be nonzero; the upper end is inf for non-compact f"""
    lo, hi = f.support
    if math.isfinite(hi):
        return (max(0.0, lo - x, x - hi), x + hi)
    if f.decay is None or not f.decay > _growth(pp):
        raise DivergentNorm(f"potential of {f.label} has no certified tail")
    return (max(0.0, lo - x), math.inf)


def _dual_integral(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    lower: float = 0.0,
    upper: float = math.inf,
    spec: QuadratureSpec = DEFAULT_SPEC,
    absolute: bool = False,
) -> IntegralResult:
    """integral over [lower, upper] of (|)A_t f(ch x)(|) (sh t)^(alpha - 1) dt"""
    beta = pp.alpha - 1.0
    t_lo, t_hi = _dual_window(f, pp, x)
    a, b = max(lower, t_lo), min(upper, t_hi)
    if not b > a:
        return ZERO
    points = shift_kinks_in_t(f, x)

    def shifted(t: float) -> float:
        value = float(shift_table(params, f, t, x))
        return abs(value) if absolute else value

    def integrand(t: float) -> float:
        return shifted(t) * math.sinh(t) ** beta

    total, start = ZERO, a
    if a == 0.0:
        # t^(alpha - 1) is the weight, (sh t / t)^(alpha - 1) A_t f is bounded
        start = min(b, 1.0)
        total = integrate_singular(
            lambda t: shifted(t) * (math.sinh(t) / t if t > 0.0 else 1.0) ** beta,
            0.0,
            start,
            spec.with_exponents(beta, 0.0),
            points,
        )
    if math.isfinite(b):
        return total + integrate_finite(integrand, start, b, spec, points)
    # A_t f(ch x) = A_x f(ch t) <= amplitude e^(kappa x) e^(-kappa t)
    tail = exponential_tail(f.amplitude * math.exp(f.decay * x), f.decay - _growth(pp))
    return total + integrate_semi_infinite(integrand, start, spec, tail=tail, points=points)


def riesz_apply(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """I f(ch x) by adaptive quadrature of the dual form"""
    _checked(params, pp)
    if x < 0.0:
        raise DomainError(f"potential needs x >= 0, got {x}")
    if f.is_zero:
        return 0.0
    return _dual_integral(params, pp, f, x, spec=spec).value


def riesz_apply_split(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> tuple[float, float]:
    """(A1, A2): the dual-form integral over t < r and t > r"""
    _checked(params, pp)
    if not r > 0.0:
        raise DomainError(f"split radius must be positive, got {r}")
    if f.is_zero:
        return (0.0, 0.0)
    near = _dual_integral(params, pp, f, x, 0.0, r, spec).value
    far = _dual_integral(params, pp, f, x, r, math.inf, spec).value
    return (near, far)


def riesz_apply_kernel_form(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    spec: QuadratureSpec = NESTED_OUTER_SPEC,
    inner: QuadratureSpec = NESTED_INNER_SPEC,
) -> float:
    """
    I f(ch x) from the definition: the shifted kernel A_t k(x), itself a phi-integral,
    integrated against f(ch t) sh^(2 lambda) t.

    A_t k(x) behaves like |t - x|^(alpha - 1) near t = x, so the outer integral is
    taken in d = |t - x| on each side with that endpoint power, and the inner
    integral is handed d itself rather than the rounded difference.
    """
    _checked(params, pp)
    if x < KERNEL_X_MIN:
        raise DomainError(f"the kernel form is evaluated for x >= {KERNEL_X_MIN}, got {x}")
    if f.is_zero:
        return 0.0
    lam, beta, kappa = params.lam, pp.alpha - 1.0, pp.kernel_exponent
    lo, hi = truncation_window(f, growth=_growth(pp))

    def weighted(t: float) -> float:
        return float(f.of_x(t)) * math.sinh(t) ** (2.0 * lam)

    if not lo < x < hi:
        def integrand(t: float) -> float:
            return shift_power_kernel(params, kappa, t, x, inner) * weighted(t)

        return integrate_finite(integrand, lo, hi, spec, list(f.breakpoints)).value

    def side(sign: float, span: float) -> IntegralResult:
        def regular(d: float) -> float:
            t = x + sign * d
            return shift_power_kernel(params, kappa, t, x, inner, distance=d) * weighted(t) * d ** -beta

        points = [abs(p - x) for p in f.breakpoints if 0.0 < sign * (p - x) < span]
        return integrate_singular(regular, 0.0, span, spec.with_exponents(beta, 0.0), points)

    return (side(-1.0, x - lo) + side(1.0, hi - x)).value


def _dual_rule(
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    order: int,
) -> tuple[np.ndarray, np.ndarray]:
    t_lo, t_hi = _dual_window(f, pp, x)
    if math.isinf(t_hi):
        t_hi = x + truncation_window(f, growth=_growth(pp))[1]
    if not t_hi > t_lo:
        return np.zeros(0), np.zeros(0)
    count = max(1, int(math.ceil((t_hi - t_lo) / MAX_PANEL)))
    kinks = clip_kinks(shift_kinks_in_t(f, x), t_lo, t_hi)
    edges = np.unique(np.concatenate([np.linspace(t_lo, t_hi, count + 1), kinks]))
    beta = pp.alpha - 1.0
    nodes, weights = panel_rule(
        edges,
        order,
        weight=lambda t: np.sinh(t) ** beta,
        origin=0.0,
        origin_exponent=beta,
    )
    return nodes.ravel(), weights.ravel()


def riesz_table(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x,
    order: int = SHIFT_ORDER,
    absolute: bool = False,
) -> np.ndarray:
    """
    I f(ch x) for every entry of x by a fixed rule in t per x.

    With absolute the shift is taken in absolute value, which gives the
    majorant of the kernel bound.
    """
    _checked(params, pp)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0.0):
        raise DomainError("potential needs x >= 0")
    out = np.zeros_like(xs)
    if f.is_zero:
        return out
    for i, xi in enumerate(xs):
        nodes, weights = _dual_rule(pp, f, float(xi), order)
        if nodes.size == 0:
            continue
        values = shift_table(params, f, nodes, xi, order)
        out[i] = float(np.sum(weights * (np.abs(values) if absolute else values)))
    return out


def kernel_bound_majorant(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """integral of |A_t f(ch x)| (sh x)^(alpha - 2 lambda - 1) sh^(2 lambda) x dx; equals I|f|(ch t) for f >= 0"""
    _checked(params, pp)
    if f.is_zero:
        return 0.0
    return _dual_integral(params, pp, f, t, spec=spec, absolute=True).value


def riesz_kernel_table(
    params: GegenbauerParams,
    alpha: float,
    x,
    method: Literal["heat", "spectral"] = "heat",
    gamma_max: float = KERNEL_GAMMA_MAX,
    order: int = 24,
) -> np.ndarray:
    """
    K(x) = Gamma(alpha/2)^-1 * integral over r > 0 of r^(alpha/2 - 1) h_r(ch x) dr.

    "heat" runs the trapezoid rule in log r over [HEAT_R_MIN, HEAT_R_MAX] with
    h_r frozen at HEAT_R_MIN below it; "spectral" swaps the r- and gamma-integrals
    analytically, giving the gamma-integral of (gamma(gamma + 2 lambda))^(-alpha/2) P_gamma(ch x).
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if method == "spectral":
        gammas, weights = spectral_rule(params, gamma_max, order)
        factors = eigenvalue(params, gammas) ** (-0.5 * alpha) * weights
        return factors @ legendre_p(params, gammas[:, None], xs[None, :])

    u = np.arange(math.log(HEAT_R_MIN), math.log(HEAT_R_MAX) + 0.5 * HEAT_LOG_STEP, HEAT_LOG_STEP)
    radii = np.exp(u)
    heat = heat_kernel_table(params, radii, xs, gamma_max, order)
    body = np.trapezoid(radii[:, None] ** (0.5 * alpha) * heat, u, axis=0)
    left = heat[0] * HEAT_R_MIN ** (0.5 * alpha) / (0.5 * alpha)
    return (body + left) / gamma_fn(0.5 * alpha)


def riesz_heat_table(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    t,
    x_order: int = SHIFT_ORDER,
    method: Literal["heat", "spectral"] = "heat",
) -> np.ndarray:
    """
    Heat-form potential at every entry of t: the x-integral of K(x) A_t f(ch x) against the weight.

    One x-rule serves every t so K is tabulated once; it is split at the
    breakpoints of f only, not at the moving kinks of A_t f.
    """
    _checked(params, pp)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < 0.0):
        raise DomainError("potential needs t >= 0")
    if f.is_zero:
        return np.zeros_like(ts)
    _, hi = truncation_window(f)
    nodes, weights = weighted_rule(params, hi + float(np.max(ts)), f.breakpoints, x_order)
    kernel = weights * riesz_kernel_table(params, pp.alpha, nodes, method)
    return np.array([float(shift_table(params, f, ti, nodes, x_order) @ kernel) for ti in ts])


def riesz_heat_form(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    t: float,
    x_order: int = SHIFT_ORDER,
) -> float:
    """I^alpha f(ch t) through the heat semigroup: inner r-integral, outer x-integral"""
    if t < 0.0:
        raise DomainError(f"potential needs t >= 0, got {t}")
    return float(riesz_heat_table(params, pp, f, t, x_order)[0])


def riesz_multiplier_check(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    gamma: float,
    order: int = 8,
) -> tuple[float, float]:
    """((I f)_P(gamma), (gamma(gamma + 2 lambda))^(-alpha/2) f_P(gamma)) with I f in heat form on a fixed rule"""
    if f.is_zero:
        return (0.0, 0.0)
    _, hi = truncation_window(f)
    nodes, weights = weighted_rule(params, hi + POTENTIAL_SPAN, f.breakpoints, order, max_width=0.5)
    potential = riesz_heat_table(params, pp, f, nodes)
    lhs = float(np.sum(weights * potential * legendre_p(params, gamma, nodes)))
    rhs = float(eigenvalue(params, gamma)) ** (-0.5 * pp.alpha) * forward_p(params, f, gamma)
    return (lhs, rhs)


def _potential_rule(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    order: int,
) -> tuple[np.ndarray, np.ndarray]:
    _, hi = truncation_window(f, growth=2.0 * params.lam / pp.p)
    return weighted_rule(params, hi + POTENTIAL_SPAN, f.breakpoints, order, max_width=0.5)


def sobolev_ratio(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x_order: int = 8,
) -> float:
    """||I f||_{q,lambda} / ||f||_{p,lambda} over the truncated domain"""
    _checked(params, pp)
    if pp.regime != "sobolev" or not pp.p > 1.0:
        raise ParameterError(f"Sobolev ratio needs 1 < p < (2 lambda + 1)/alpha, got p={pp.p}, alpha={pp.alpha}")
    reference = lp_norm(params, f, pp.p)
    if reference == 0.0:
        raise DomainError(f"{f.label} has zero L_p norm")
    nodes, weights = _potential_rule(params, pp, f, x_order)
    values = riesz_table(params, pp, f, nodes)
    ratio = float(np.sum(weights * np.abs(values) ** pp.q)) ** (1.0 / pp.q) / reference
    logger.debug(f"Sobolev ratio ({pp.p:g} -> {pp.q:g}) for {f.label}: {ratio:.6g}")
    return ratio


def absolute_convergence(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    """I|f| on the grid; finite entries certify that the defining integral converges absolutely there"""
    values = riesz_table(params, pp, abs(f), x, order)
    if not np.all(np.isfinite(values)):
        raise DivergentNorm(f"potential of |{f.label}| diverges on the grid")
    return values


def weak_1q_profile(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    betas,
    x_grid=None,
) -> DistributionProfile:
    """Superlevel measures of I f against ||f||_{1,lambda}, for the weak (1, q) estimate"""
    _checked(params, pp)
    if pp.p != 1.0:
        raise ParameterError(f"weak (1, q) profile needs p = 1, got {pp.p}")
    if x_grid is None:
        _, hi = truncation_window(f, growth=2.0 * params.lam)
        xs = sample_grid(0.0, hi + POTENTIAL_SPAN, PROFILE_POINTS, f.breakpoints)
    else:
        xs = np.asarray(x_grid, dtype=float)
    values = riesz_table(params, pp, f, xs)
    return DistributionProfile(
        thresholds=tuple(float(b) for b in betas),
        superlevel_measures=tuple(superlevel_measure(params, xs, values, float(b)) for b in betas),
        norm_input=lp_norm(params, f, 1.0),
    )


def _bmo_line(params: GegenbauerParams, pp: PotentialParams) -> PotentialParams:
    _checked(params, pp)
    if pp.regime != "bmo":
        raise ParameterError(f"modified potential needs p alpha = 2 lambda + 1, got p={pp.p}, alpha={pp.alpha}")
    return pp


def kernel_mass(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Signed integral from a to b of k(t) f(ch t) sh^(2 lambda) t dt = (sh t)^(alpha - 1) f(ch t) dt"""
    if a > b:
        return -kernel_mass(params, pp, f, b, a, spec)
    lo, hi = f.support
    a, b = max(a, lo), min(b, hi)
    if not b > a:
        return 0.0
    beta = pp.alpha - 1.0
    points = list(f.breakpoints)
    integrand = lambda t: float(f.of_x(t)) * math.sinh(t) ** beta  # noqa: E731
    if math.isfinite(b):
        return integrate_finite(integrand, a, b, spec, points).value
    if f.decay is None or not f.decay > _growth(pp):
        raise DivergentNorm(f"k f mass of {f.label} is not finite")
    tail = exponential_tail(f.amplitude, f.decay - _growth(pp))
    return integrate_semi_infinite(integrand, a, spec, tail=tail, points=points).value


def modified_riesz(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """I f(ch x) minus the mass of k f over t > 1/4"""
    _bmo_line(params, pp)
    if f.is_zero:
        return 0.0
    return riesz_apply(params, pp, f, x, spec) - kernel_mass(params, pp, f, CHI_THRESHOLD, math.inf, spec)


def modified_riesz_table(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    _bmo_line(params, pp)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if f.is_zero:
        return np.zeros_like(xs)
    return riesz_table(params, pp, f, xs, order) - kernel_mass(params, pp, f, CHI_THRESHOLD, math.inf)


def bmo_center(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> BmoCenter:
    quarter = 0.25 * r
    a1 = -kernel_mass(params, pp, f, min(CHI_THRESHOLD, quarter), quarter, spec)
    a2 = kernel_mass(params, pp, f, quarter, max(CHI_THRESHOLD, quarter), spec)
    return BmoCenter(a1=a1, a2=a2, a_f=a1 + a2)


def modified_split(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ModifiedSplit:
    """
    F1 = I(f on t < r/4) - mass of k f over (1/4, r/4)
    F2 = I(f on t > r/4) - mass of k f over (max(1/4, r/4), inf)

    F1 + F2 is the modified potential whatever r is.
    """
    _bmo_line(params, pp)
    if not r > 0.0:
        raise DomainError(f"split radius must be positive, got {r}")
    quarter = 0.25 * r
    inner, outer = Restricted(base=f, hi=quarter), Restricted(base=f, lo=quarter)
    top = max(CHI_THRESHOLD, quarter)
    f1 = riesz_apply(params, pp, inner, x, spec) - kernel_mass(params, pp, f, CHI_THRESHOLD, top, spec)
    f2 = riesz_apply(params, pp, outer, x, spec) - kernel_mass(params, pp, f, top, math.inf, spec)
    return ModifiedSplit(x=x, r=r, f1=f1, f2=f2, center=bmo_center(params, pp, f, r, spec))


def local_part_envelope(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    x: float,
    r: float,
    grid: Optional[RadiusGrid] = None,
) -> tuple[float, float, float]:
    """(|F1 - a1|, (sh r/2)^alpha M_G f(ch x), ||f||_{p,lambda}), the pieces of the local estimate"""
    split = modified_split(params, pp, f, x, r)
    radii = grid or create_radius_grid()
    maximal = maximal_G(params, f, x, radii)
    return (abs(split.local_part), math.sinh(0.5 * r) ** pp.alpha * maximal, lp_norm(params, f, pp.p))


def bmo_ratio(
    params: GegenbauerParams,
    pp: PotentialParams,
    f: TestFunction,
    grid: Optional[RadiusGrid] = None,
    count: int = 65,
) -> float:
    """||modified I f||_BMO / ||f||_{p,lambda}"""
    _bmo_line(params, pp)
    reference = lp_norm(params, f, pp.p)
    if reference == 0.0:
        raise DomainError(f"{f.label} has zero L_p norm")
    _, hi = truncation_window(f, growth=2.0 * params.lam / pp.p)
    xs = sample_grid(0.0, hi + POTENTIAL_SPAN, count, f.breakpoints)
    sampled = GridFunction.from_arrays(xs, modified_riesz_table(params, pp, f, xs))
    ratio = bmo_norm(params, sampled, grid) / reference
    logger.debug(f"BMO ratio for {f.label} at p={pp.p:g}: {ratio:.6g}")
    return ratio
