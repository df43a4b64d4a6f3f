"""
Function Spaces
===============

Weighted L_p, Morrey-Gegenbauer (plain and modified) and BMO-Gegenbauer norms,
and the embedding check between Morrey spaces.

The suprema over (x, r) run over the same lattice the maximal operators use.
"""

import math
from typing import Optional

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import DivergentNorm, DomainError, ParameterError
from numerics.params import GegenbauerParams
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_finite, integrate_singular

from .maximal_operators import RadiusGrid, create_radius_grid, default_x_grid, origin_ball_integrals, origin_ball_samples
from .measure_geometry import origin_ball_constant
from .test_functions import ConstantOne, GridFunction, LinearCombination, TestFunction, sample_grid, truncation_window

LATTICE_X_COUNT = 33
SUP_GRID_COUNT = 4097


class NormSpec(BaseModel):
    """Which norm to take"""
    model_config = ConfigDict(frozen=True)

    p: float = Field(..., ge=1.0, description="Integrability exponent, inf allowed")
    morrey_gamma: Optional[float] = Field(None, ge=0.0, description="Morrey exponent in [0, 2 lambda + 1]")
    modified: bool = Field(False, description="Use [sh r/2]_1 = min(1, sh r/2) in the Morrey normaliser")

    def check(self, params: GegenbauerParams) -> "NormSpec":
        if self.morrey_gamma is not None and self.morrey_gamma > 2.0 * params.lam + 1.0:
            raise ParameterError(f"morrey_gamma={self.morrey_gamma} exceeds 2*lambda+1 = {2.0 * params.lam + 1.0}")
        return self


def lp_norm(params: GegenbauerParams, f: TestFunction, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """||f||_{p,lambda}; p = inf is the sup over a dense grid of the truncation window"""
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    if f.is_zero:
        return 0.0
    lam = params.lam
    if math.isinf(p):
        lo, hi = truncation_window(f)
        grid = sample_grid(lo, hi, SUP_GRID_COUNT, f.breakpoints)
        return float(np.max(np.abs(f.of_x(grid))))

    lo, hi = truncation_window(f, growth=2.0 * lam / p, tail_tol=spec.truncation.tail_tol)
    points = list(f.breakpoints)
    if lo == 0.0:
        def near_origin(t: float) -> float:
            ratio = math.sinh(t) / t if t > 0.0 else 1.0
            return abs(float(f.of_x(t))) ** p * ratio ** (2.0 * lam)

        total = integrate_singular(near_origin, 0.0, hi, spec.with_exponents(2.0 * lam, 0.0), points)
    else:
        total = integrate_finite(lambda t: abs(float(f.of_x(t))) ** p * math.sinh(t) ** (2.0 * lam), lo, hi, spec, points)
    if not math.isfinite(total.value):
        raise DivergentNorm(f"||{f.label}||_{p:g} is not finite")
    return total.value ** (1.0 / p)


def _lattice(f: TestFunction, grid: Optional[RadiusGrid], x_grid, growth: float) -> tuple[RadiusGrid, np.ndarray]:
    radii = grid or create_radius_grid()
    xs = default_x_grid(f, radii, LATTICE_X_COUNT, growth) if x_grid is None else np.asarray(x_grid, dtype=float)
    return radii, xs


def morrey_norm(
    params: GegenbauerParams,
    f: TestFunction,
    p: float,
    gamma_m: float,
    modified: bool = False,
    grid: Optional[RadiusGrid] = None,
    x_grid=None,
) -> float:
    """
    sup over (x, r) of ((sh r/2)^-gamma * integral over [0, r] of (A_t|f|(ch x))^p dmu(t))^(1/p).

    The modified norm replaces sh r/2 by min(1, sh r/2) in the normaliser.
    """
    NormSpec(p=p, morrey_gamma=gamma_m, modified=modified).check(params)
    if math.isinf(p):
        raise DomainError("Morrey norms need finite p")
    if f.is_zero:
        return 0.0
    radii, xs = _lattice(f, grid, x_grid, 2.0 * params.lam / p)
    mass, _ = origin_ball_integrals(params, f, xs, radii, power=p)
    scale = np.sinh(0.5 * radii.array)
    if modified:
        scale = np.minimum(1.0, scale)
    return float(np.max(mass * scale[None, :] ** (-gamma_m))) ** (1.0 / p)


def _anchored(g: TestFunction) -> TestFunction:
    """g - g(1); oscillation is unchanged and a constant becomes exactly zero"""
    anchor = float(g.evaluate(1.0))
    return LinearCombination(terms=((1.0, g), (-anchor, ConstantOne())))


def bmo_norm(
    params: GegenbauerParams,
    g: TestFunction | GridFunction,
    grid: Optional[RadiusGrid] = None,
    x_grid=None,
    absolute_mean: bool = False,
) -> float:
    """
    sup over (x, r) of the mean oscillation of A_t g(ch x) over H(0, r).

    The centring value is the ball mean of A_t g; with absolute_mean the mean of
    |A_t g| is used instead.
    """
    radii = grid or create_radius_grid()
    if isinstance(g, GridFunction):
        top = g.x_grid[-1]
        g = g.as_test_function()
    elif g.decay is None and not math.isfinite(g.support[1]):
        # no decay to truncate against; the lattice spans one maximal radius
        top = 0.0
    else:
        top = truncation_window(g)[1]
    if x_grid is None:
        xs = np.linspace(0.0, top + radii.radii[-1], LATTICE_X_COUNT)
    else:
        xs = np.asarray(x_grid, dtype=float)
    centred = _anchored(g)
    if centred.is_zero:
        return 0.0
    best = 0.0
    for sample in origin_ball_samples(params, centred, xs, radii):
        weights, values = sample.weights, sample.values
        for index in sample.radius_index:
            w, v = weights[:index], values[:index]
            volume = float(np.sum(w))
            mean = float(np.sum(w * (np.abs(v) if absolute_mean else v))) / volume
            best = max(best, float(np.sum(w * np.abs(v - mean))) / volume)
    return best


def embedding_constant(params: GegenbauerParams, p: float) -> float:
    """Holder constant for the Morrey embedding, from the origin-ball envelope"""
    return origin_ball_constant(params) ** (1.0 - 1.0 / p)


def embedding_check(
    params: GegenbauerParams,
    f: TestFunction,
    p: float,
    gamma_m: float,
    alpha: Optional[float] = None,
    grid: Optional[RadiusGrid] = None,
    x_grid=None,
) -> tuple[float, float]:
    """
    (||f||_{L_{1,lambda,2 lambda+1-alpha}}, ||f||_{L_{p,lambda,gamma}}) with alpha p = 2 lambda + 1 - gamma.

    alpha defaults to the value fixed by that relation.
    """
    dimension = 2.0 * params.lam + 1.0
    implied = (dimension - gamma_m) / p
    if alpha is None:
        alpha = implied
    elif not math.isclose(alpha * p, dimension - gamma_m, rel_tol=1e-12):
        raise ParameterError(f"alpha*p = {alpha * p} must equal 2*lambda+1-gamma = {dimension - gamma_m}")
    if not 0.0 < alpha:
        raise ParameterError(f"embedding needs alpha > 0, got {alpha}")
    if f.is_zero:
        return (0.0, 0.0)
    radii, xs = _lattice(f, grid, x_grid, 2.0 * params.lam / p)
    lhs = morrey_norm(params, f, 1.0, dimension - alpha, grid=radii, x_grid=xs)
    rhs = morrey_norm(params, f, p, gamma_m, grid=radii, x_grid=xs)
    logger.debug(f"embedding for {f.label}: {lhs:.6g} vs {rhs:.6g}")
    return (lhs, rhs)


def evaluate_norm(params: GegenbauerParams, f: TestFunction, spec: NormSpec) -> float:
    """Dispatch on NormSpec: L_p when no Morrey exponent is given"""
    spec.check(params)
    if spec.morrey_gamma is None:
        return lp_norm(params, f, spec.p)
    return morrey_norm(params, f, spec.p, spec.morrey_gamma, spec.modified)
