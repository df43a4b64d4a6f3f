"""
Special Functions
=================

Gamma, the Gauss series 2F1, the decaying eigenfunction P of the Gegenbauer
operator G, its regular companion, the heat kernel h_r and a finite-difference
applier for G.

Array inputs broadcast; scalar inputs return floats.
"""

import math
from typing import Callable, Optional

import numpy as np
from agno.utils.log import logger
from scipy import special

from .errors import DivergentParameters, DomainError, SeriesNotConverged
from .params import GegenbauerParams
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    integrate_semi_infinite,
    integrate_singular,
    panel_rule,
    subdivided_edges,
)

X_MIN = 1e-3
SPECTRAL_OFFSET = 0.1
SERIES_TERM_BUDGET = 10**6


def _scalar_or_array(value: np.ndarray, *inputs) -> float | np.ndarray:
    if all(np.ndim(item) == 0 for item in inputs):
        return float(value)
    return value


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0"""
    if not x > 0.0:
        raise DomainError(f"gamma_fn needs a positive argument, got {x}")
    return float(special.gamma(x))


def gauss_2f1(
    a: float,
    b: float,
    c: float,
    z: float,
    rel_tol: float = 1e-15,
    max_terms: int = SERIES_TERM_BUDGET,
) -> float:
    """
    Gauss hypergeometric series F(a, b; c; z).

    z = 1 with c - a - b > 0 is evaluated by Gauss's summation theorem.
    """
    if c <= 0.0 and float(c).is_integer():
        raise DivergentParameters(f"c={c} is a non-positive integer")
    if abs(z) > 1.0 or (z == 1.0 and c - a - b <= 0.0) or z == -1.0 and c - a - b <= -1.0:
        raise DivergentParameters(f"2F1({a}, {b}; {c}; {z}) diverges")
    if z == 1.0:
        return float(
            special.gamma(c) * special.gamma(c - a - b) * special.rgamma(c - a) * special.rgamma(c - b)
        )

    total, term = 1.0, 1.0
    settle = abs(a) + abs(b) + abs(c) + 1.0
    for n in range(max_terms):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        term *= ratio
        total += term
        if term == 0.0:
            return total
        bound = max(abs(ratio), abs(z))
        if n > settle and bound < 1.0 and abs(term) * bound / (1.0 - bound) <= rel_tol * abs(total):
            return total
    raise SeriesNotConverged(f"2F1({a}, {b}; {c}; {z}) not converged after {max_terms} terms")


def gauss_2f1_euler(a: float, b: float, c: float, z: float) -> float:
    """F(a, b; c; z) through Euler's transformation (1-z)^(c-a-b) F(c-a, c-b; c; z)"""
    if not abs(z) < 1.0:
        raise DivergentParameters(f"Euler transformation needs |z| < 1, got {z}")
    return (1.0 - z) ** (c - a - b) * gauss_2f1(c - a, c - b, c, z)


def _degrees(gamma) -> np.ndarray:
    g = np.asarray(getattr(gamma, "gamma", gamma), dtype=float)
    if np.any(g < 1.0):
        raise DomainError(f"degree gamma must be >= 1, got min {np.min(g)}")
    return g


def _log_two_cosh(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(x, -x)


def _legendre_p_core(lam: float, g: np.ndarray, x: np.ndarray) -> np.ndarray:
    log_two_ch = _log_two_cosh(x)
    log_prefactor = (
        special.gammaln(g + 2.0 * lam)
        - special.gammaln(g)
        - special.gammaln(g + lam + 1.0)
        - (g + 2.0 * lam) * log_two_ch
    )
    argument = np.exp(2.0 * (math.log(2.0) - log_two_ch))
    series = special.hyp2f1(0.5 * g + lam, 0.5 * g + lam + 0.5, g + lam + 1.0, argument)
    return math.cos(math.pi * lam) * np.exp(log_prefactor) * series


def legendre_p(params: GegenbauerParams, gamma, x) -> float | np.ndarray:
    """
    P^lambda_gamma(ch x) from its hypergeometric representation.

    Below X_MIN the value is extrapolated linearly from X_MIN and 2 X_MIN.
    """
    g = _degrees(gamma)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise DomainError("legendre_p needs x >= 0")
    g, xs = np.broadcast_arrays(g, xs)
    clipped = np.maximum(xs, X_MIN)
    values = _legendre_p_core(params.lam, g, clipped)
    near = xs < X_MIN
    if np.any(near):
        p1 = _legendre_p_core(params.lam, g, np.full_like(xs, X_MIN))
        p2 = _legendre_p_core(params.lam, g, np.full_like(xs, 2.0 * X_MIN))
        values = np.where(near, p1 + (xs - X_MIN) * (p2 - p1) / X_MIN, values)
    if not np.all(np.isfinite(values)):
        raise DivergentParameters("hypergeometric representation of P returned a non-finite value")
    return _scalar_or_array(values, getattr(gamma, "gamma", gamma), x)


def legendre_p_at_one(params: GegenbauerParams, gamma) -> np.ndarray:
    """P^lambda_gamma(1) in closed form; bounds |P^lambda_gamma(ch x)| (ch x)^(gamma + 2 lambda)"""
    lam = params.lam
    g = _degrees(gamma)
    log_value = (
        special.gammaln(g + 2.0 * lam)
        + special.gammaln(0.5 - lam)
        - special.gammaln(g)
        - special.gammaln(g + 1.0)
        - 2.0 * lam * math.log(2.0)
        - 0.5 * math.log(math.pi)
    )
    return math.cos(math.pi * lam) * np.exp(log_value)


def spherical_function(params: GegenbauerParams, gamma, t) -> float | np.ndarray:
    """Regular eigenfunction F(-gamma, gamma + 2 lambda; lambda + 1/2; (1 - ch t)/2), equal to 1 at t = 0"""
    lam = params.lam
    g = _degrees(gamma)
    ts = np.asarray(t, dtype=float)
    values = special.hyp2f1(-g, g + 2.0 * lam, lam + 0.5, 0.5 * (1.0 - np.cosh(ts)))
    return _scalar_or_array(values, gamma, t)


def eigenvalue(params: GegenbauerParams, gamma) -> np.ndarray:
    g = np.asarray(getattr(gamma, "gamma", gamma), dtype=float)
    return g * (g + 2.0 * params.lam)


def apply_G(
    params: GegenbauerParams,
    f: Callable[[np.ndarray], np.ndarray],
    y,
    h: Optional[float] = None,
) -> float | np.ndarray:
    """
    (y^2-1)^(1/2-lambda) d/dy [(y^2-1)^(lambda+1/2) f'(y)] by a flux-form central difference.

    The step defaults to 1e-3 max(1, y); the stencil must stay above y = 1.
    """
    lam = params.lam
    ys = np.asarray(y, dtype=float)
    step = 1e-3 * np.maximum(1.0, ys) if h is None else np.full_like(ys, float(h))
    if np.any(ys - 2.0 * step <= 1.0):
        raise DomainError(f"stencil leaves the domain: y - 2h <= 1 at y={np.min(ys)}")

    def flux_weight(s):
        return (s * s - 1.0) ** (lam + 0.5)

    ahead, here, behind = f(ys + step), f(ys), f(ys - step)
    flux = flux_weight(ys + 0.5 * step) * (ahead - here) - flux_weight(ys - 0.5 * step) * (here - behind)
    values = (ys * ys - 1.0) ** (0.5 - lam) * flux / step**2
    return _scalar_or_array(np.asarray(values, dtype=float), y)


def spectral_rule(
    params: GegenbauerParams,
    gamma_max: float = 12.0,
    order: int = 24,
    panel_width: float = 0.5,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for integrals over gamma in [1, gamma_max] against (gamma^2-1)^(lambda-1/2).

    The first panel [1, 1 + SPECTRAL_OFFSET] is Gauss-Jacobi for the endpoint power.
    """
    lam = params.lam
    edges = np.concatenate(
        [[1.0], subdivided_edges(1.0 + SPECTRAL_OFFSET, gamma_max, max_width=panel_width)]
    )
    nodes, weights = panel_rule(
        edges,
        order,
        weight=lambda g: (g * g - 1.0) ** (lam - 0.5),
        origin=1.0,
        origin_exponent=lam - 0.5,
    )
    return nodes.ravel(), weights.ravel()


def spectral_cutoff(params: GegenbauerParams, x_min: float, tail_tol: float = 1e-10, ceiling: float = 60.0) -> float:
    """Smallest integer gamma_max with P(1) (ch x_min)^(-gamma-2 lambda) below tail_tol from there on"""
    gamma = 2.0
    log_ch = float(_log_two_cosh(np.asarray(x_min))) - math.log(2.0)
    while gamma < ceiling:
        bound = float(legendre_p_at_one(params, gamma)) * math.exp(-(gamma + 2.0 * params.lam) * log_ch)
        if bound <= tail_tol:
            return gamma
        gamma += 1.0
    logger.debug(f"spectral cutoff capped at {ceiling} for x_min={x_min}")
    return ceiling


def heat_kernel(
    params: GegenbauerParams,
    r: float,
    x: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """h_r(ch x) = integral over gamma >= 1 of e^(-gamma(gamma+2 lambda) r) P_gamma(ch x) (gamma^2-1)^(lambda-1/2)"""
    if not r > 0.0:
        raise DomainError(f"heat kernel needs r > 0, got {r}")
    lam = params.lam
    split = 1.0 + SPECTRAL_OFFSET

    def near(g: float) -> float:
        return math.exp(-g * (g + 2.0 * lam) * r) * legendre_p(params, g, x) * (g + 1.0) ** (lam - 0.5)

    def far(g: float) -> float:
        return math.exp(-g * (g + 2.0 * lam) * r) * legendre_p(params, g, x) * (g * g - 1.0) ** (lam - 0.5)

    def tail(cutoff: float) -> float:
        # |P_g(ch x)| <= P_g(1), decreasing in g; (g^2-1)^(lambda-1/2) is decreasing too
        amplitude = float(legendre_p_at_one(params, cutoff)) * (cutoff**2 - 1.0) ** (lam - 0.5)
        return amplitude * math.exp(-cutoff * (cutoff + 2.0 * lam) * r) / ((2.0 * cutoff + 2.0 * lam) * r)

    head: IntegralResult = integrate_singular(near, 1.0, split, spec.with_exponents(lam - 0.5, 0.0))
    rest = integrate_semi_infinite(far, split, spec, tail=tail)
    return (head + rest).value


def heat_kernel_table(
    params: GegenbauerParams,
    r: np.ndarray,
    x: np.ndarray,
    gamma_max: float = 14.0,
    order: int = 24,
) -> np.ndarray:
    """h_r(ch x) on the outer product of r and x through the fixed spectral rule"""
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    gammas, weights = spectral_rule(params, gamma_max, order)
    decay = np.exp(-np.outer(rs, eigenvalue(params, gammas)))
    eigen = legendre_p(params, gammas[:, None], xs[None, :]) * weights[:, None]
    return decay @ eigen


def corollary2_heat_bound(params: GegenbauerParams, r, x) -> np.ndarray:
    """Gamma(lambda + 1/2) e^(-r) (ch x)^(-2 lambda - 1)"""
    lam = params.lam
    return gamma_fn(lam + 0.5) * np.exp(-np.asarray(r, dtype=float)) * np.cosh(np.asarray(x, dtype=float)) ** (
        -2.0 * lam - 1.0
    )


def printed_cstar_terms(params: GegenbauerParams) -> dict[str, float]:
    """The gamma-free pieces of the printed inverse-transform constant, for logging only"""
    lam = params.lam
    c = (5.0 - 2.0 * lam) / 4.0
    at_half = gauss_2f1(1.0, 0.5 - lam, c, 0.5)
    at_shifted = gauss_2f1(1.0, 0.5 - lam, c, (1.0 - 2.0 * lam) / 2.0)
    prefactor = (
        2.0 ** (1.5 - lam)
        * math.sqrt(math.pi)
        * gamma_fn(lam + 1.0)
        * gamma_fn((3.0 + 2.0 * lam) / 4.0)
        / (gamma_fn(lam + 0.5) * gamma_fn(c) * math.cos(math.pi * lam))
    )
    return {
        "f_at_half": at_half,
        "f_at_shifted": at_shifted,
        "denominator": at_half - at_shifted,
        "prefactor_without_gamma_term": prefactor,
    }
