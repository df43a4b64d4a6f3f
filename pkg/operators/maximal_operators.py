"""
Maximal Operators
=================

M_G f(ch x) = sup_r |H(0, r)|^-1 * integral over [0, r] of A_t|f|(ch x) sh^(2 lambda) t dt
M_mu f(ch x) = sup_r |H(x, r)|^-1 * integral over H(x, r) of |f(ch t)| sh^(2 lambda) t dt

The supremum runs over a log-spaced RadiusGrid. Origin-ball averages for all
radii come from one cumulative panel rule per x, so each x costs a single pass.
"""

import math
from typing import Callable, Iterator, NamedTuple, Optional, Sequence

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import optimize

from numerics.errors import DomainError, DominationViolation, ParameterError
from numerics.params import GegenbauerParams
from numerics.quadrature import panel_rule

from .measure_geometry import cumulative_measure
from .shift_operator import SHIFT_ORDER, shift_kinks_in_t, shift_table, shifted_lp_norm
from .test_functions import TestFunction, truncation_window

MAX_PANEL = 0.25
BALL_SUBPANELS = 8
DOMINATION_FLOOR = 1e-12
RADIUS_XATOL = 1e-3
X_XATOL = 1e-4


class RadiusGrid(BaseModel):
    """Log-spaced radii standing in for sup over r > 0"""
    model_config = ConfigDict(frozen=True)

    radii: tuple[float, ...] = Field(..., description="Increasing positive radii")

    @field_validator("radii")
    @classmethod
    def _increasing(cls, radii: tuple[float, ...]) -> tuple[float, ...]:
        values = np.asarray(radii)
        if len(radii) < 16:
            raise ValueError(f"a radius grid needs at least 16 radii, got {len(radii)}")
        if np.any(values <= 0.0) or np.any(np.diff(values) <= 0.0):
            raise ValueError("radii must be positive and strictly increasing")
        return radii

    @property
    def count(self) -> int:
        return len(self.radii)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.radii)

    def covers(self, regime_constant: float) -> bool:
        """At least two decades below and one above the regime constant"""
        return self.radii[0] <= regime_constant / 100.0 and self.radii[-1] >= 10.0 * regime_constant

    def refined(self) -> "RadiusGrid":
        """Geometric midpoints inserted between neighbouring radii"""
        r = self.array
        mids = np.sqrt(r[:-1] * r[1:])
        return RadiusGrid(radii=tuple(float(v) for v in np.sort(np.concatenate([r, mids]))))


def create_radius_grid(
    r_min: float = 1e-3,
    r_max: float = 10.0,
    count: int = 32,
    regime_constant: Optional[float] = None,
) -> RadiusGrid:
    """Log-spaced radius grid; with regime_constant the span is checked"""
    if not 0.0 < r_min < r_max:
        raise ParameterError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    grid = RadiusGrid(radii=tuple(float(v) for v in np.geomspace(r_min, r_max, count)))
    if regime_constant is not None and not grid.covers(regime_constant):
        raise ParameterError(
            f"radius grid [{r_min:g}, {r_max:g}] must reach two decades below and one above c={regime_constant:g}"
        )
    return grid


class DistributionProfile(BaseModel):
    """Weighted measures of superlevel sets {T f > threshold}"""
    model_config = ConfigDict(frozen=True)

    thresholds: tuple[float, ...] = Field(..., description="Positive thresholds")
    superlevel_measures: tuple[float, ...] = Field(..., description="|{T f > threshold}|_lambda")
    norm_input: float = Field(..., ge=0.0, description="Norm of the input function")

    @model_validator(mode="after")
    def _monotone(self) -> "DistributionProfile":
        order = np.argsort(self.thresholds)
        measures = np.asarray(self.superlevel_measures)[order]
        if np.any(measures < 0.0):
            raise ValueError("superlevel measures must be non-negative")
        if np.any(np.diff(measures) > 1e-12 * max(1.0, float(np.max(measures, initial=0.0)))):
            raise ValueError("superlevel measures must be non-increasing in the threshold")
        return self

    def weak_constant(self) -> float:
        """sup over thresholds of alpha |{T f > alpha}| / ||f||"""
        products = np.asarray(self.thresholds) * np.asarray(self.superlevel_measures)
        return float(np.max(products)) / self.norm_input

    def weak_q_constant(self, q: float) -> float:
        """sup over thresholds of beta |{T f > beta}|^(1/q) / ||f||"""
        products = np.asarray(self.thresholds) * np.asarray(self.superlevel_measures) ** (1.0 / q)
        return float(np.max(products)) / self.norm_input


def clip_kinks(kinks: Sequence[float], lo: float, hi: float) -> list[float]:
    # out-of-range kinks collapse onto hi, where they add only empty panels
    return [k if lo < k < hi else hi for k in kinks]


class OriginBallSample(NamedTuple):
    """Shift values on a t-rule over [0, r_max] for one x; panels end exactly at every radius"""
    x: float
    edges: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    radius_index: np.ndarray


def origin_ball_samples(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    order: int = SHIFT_ORDER,
) -> Iterator[OriginBallSample]:
    """A_t f(ch x) on a panel rule in t for each x; callers pass |f| where the shift of |f| is meant"""
    radii = grid.array
    top = radii[-1]
    uniform = np.linspace(0.0, top, int(math.ceil(top / MAX_PANEL)) + 1)
    for xi in np.atleast_1d(np.asarray(x, dtype=float)):
        kinks = clip_kinks(shift_kinks_in_t(f, xi), 0.0, top)
        edges = np.sort(np.concatenate([uniform, radii, np.asarray(kinks, dtype=float)]))
        nodes, weights = panel_rule(
            edges,
            order,
            weight=params.measure_weight,
            origin=0.0,
            origin_exponent=2.0 * params.lam,
        )
        yield OriginBallSample(
            x=float(xi),
            edges=edges,
            weights=weights,
            values=shift_table(params, f, nodes, xi, order),
            radius_index=np.searchsorted(edges, radii),
        )


def origin_ball_integrals(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    power: float = 1.0,
    order: int = SHIFT_ORDER,
) -> tuple[np.ndarray, np.ndarray]:
    """(integral over [0, r] of (A_t|f|(ch x))^power dmu(t), |H(0, r)|) for every x and radius"""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    mass = np.empty((xs.size, grid.count))
    volume = np.empty_like(mass)
    for i, sample in enumerate(origin_ball_samples(params, abs(f), xs, grid, order)):
        running = np.concatenate([[0.0], np.cumsum(np.sum(sample.weights * sample.values**power, axis=-1))])
        measure = np.concatenate([[0.0], np.cumsum(np.sum(sample.weights, axis=-1))])
        mass[i] = running[sample.radius_index]
        volume[i] = measure[sample.radius_index]
    return mass, volume


def origin_ball_averages(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    """|H(0, r)|^-1 integral over [0, r] of A_t|f|(ch x) dmu(t), shape (len(x), len(radii))"""
    mass, volume = origin_ball_integrals(params, f, x, grid, 1.0, order)
    return mass / volume


def maximal_G_profile(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    if f.is_zero:
        return np.zeros(np.atleast_1d(x).shape)
    return np.max(origin_ball_averages(params, f, x, grid, order), axis=-1)


def maximal_G(params: GegenbauerParams, f: TestFunction, x: float, grid: RadiusGrid) -> float:
    """M_G f(ch x) as the maximum over the radius grid"""
    return float(maximal_G_profile(params, f, [x], grid)[0])


def centred_ball_averages(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    """|H(x, r)|^-1 integral over H(x, r) of |f(ch t)| dmu(t), shape (len(x), len(radii))"""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    radii = grid.array
    out = np.empty((xs.size, radii.size))
    breaks = np.asarray(f.breakpoints, dtype=float)
    for i, xi in enumerate(xs):
        lo, hi = np.maximum(xi - radii, 0.0), xi + radii
        base = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, BALL_SUBPANELS + 1)
        if breaks.size:
            inside = (breaks[None, :] > lo[:, None]) & (breaks[None, :] < hi[:, None])
            extra = np.where(inside, breaks[None, :], hi[:, None])
            base = np.concatenate([base, extra], axis=-1)
        edges = np.sort(base, axis=-1)
        nodes, weights = panel_rule(
            edges,
            order,
            weight=params.measure_weight,
            origin=0.0,
            origin_exponent=2.0 * params.lam,
        )
        values = np.abs(f.of_x(nodes))
        out[i] = np.sum(weights * values, axis=(-2, -1)) / np.sum(weights, axis=(-2, -1))
    return out


def maximal_mu_profile(
    params: GegenbauerParams,
    f: TestFunction,
    x,
    grid: RadiusGrid,
    order: int = SHIFT_ORDER,
) -> np.ndarray:
    if f.is_zero:
        return np.zeros(np.atleast_1d(x).shape)
    return np.max(centred_ball_averages(params, f, x, grid, order), axis=-1)


def maximal_mu(params: GegenbauerParams, f: TestFunction, x: float, grid: RadiusGrid) -> float:
    """M_mu f(ch x) as the maximum over the radius grid"""
    return float(maximal_mu_profile(params, f, [x], grid)[0])


def origin_ball_average(params: GegenbauerParams, f: TestFunction, x: float, r: float, order: int = SHIFT_ORDER) -> float:
    """|H(0, r)|^-1 integral over [0, r] of A_t|f|(ch x) dmu(t) for one radius off the grid"""
    kinks = [k for k in shift_kinks_in_t(f, x) if 0.0 < k < r]
    uniform = np.linspace(0.0, r, int(math.ceil(r / MAX_PANEL)) + 1)
    edges = np.unique(np.concatenate([uniform, np.asarray(kinks, dtype=float)]))
    nodes, weights = panel_rule(edges, order, weight=params.measure_weight, origin=0.0, origin_exponent=2.0 * params.lam)
    values = shift_table(params, abs(f), nodes, x, order)
    return float(np.sum(weights * values) / np.sum(weights))


def centred_ball_average(params: GegenbauerParams, f: TestFunction, x: float, r: float, order: int = SHIFT_ORDER) -> float:
    """|H(x, r)|^-1 integral over H(x, r) of |f(ch t)| dmu(t) for one radius off the grid"""
    lo, hi = max(x - r, 0.0), x + r
    breaks = [b for b in f.breakpoints if lo < b < hi]
    edges = np.unique(np.concatenate([np.linspace(lo, hi, BALL_SUBPANELS + 1), np.asarray(breaks, dtype=float)]))
    nodes, weights = panel_rule(edges, order, weight=params.measure_weight, origin=0.0, origin_exponent=2.0 * params.lam)
    return float(np.sum(weights * np.abs(f.of_x(nodes))) / np.sum(weights))


def polish_maximum(objective: Callable[[float], float], points: np.ndarray, values: np.ndarray, xatol: float) -> float:
    """
    Largest value of objective near the best sampled point.

    Brent's method runs on the bracket between the neighbours of the sampled
    argmax; the result never falls below the sampled maximum.
    """
    best = int(np.argmax(values))
    lo, hi = points[max(best - 1, 0)], points[min(best + 1, points.size - 1)]
    if not hi > lo:
        return float(values[best])
    found = optimize.minimize_scalar(
        lambda s: -objective(float(s)), bounds=(float(lo), float(hi)), method="bounded", options={"xatol": xatol}
    )
    return max(float(values[best]), -float(found.fun))


def critical_radii(f: TestFunction, x: float, grid: RadiusGrid) -> np.ndarray:
    """Grid radii plus the distances at which a ball around x or a shift from x meets a breakpoint of f"""
    kinks = np.asarray(shift_kinks_in_t(f, x), dtype=float)
    kinks = kinks[(kinks > grid.radii[0]) & (kinks < grid.radii[-1])]
    return np.union1d(grid.array, kinks)


def polished_maxima(params: GegenbauerParams, f: TestFunction, x: float, grid: RadiusGrid) -> tuple[float, float]:
    """(M_G f(ch x), M_mu f(ch x)) with the sup over r located between grid radii"""
    radii = critical_radii(f, x, grid)
    mg = origin_ball_averages(params, f, [x], RadiusGrid(radii=tuple(radii)))[0]
    mmu = centred_ball_averages(params, f, [x], RadiusGrid(radii=tuple(radii)))[0]
    xatol = RADIUS_XATOL * radii[0]
    return (
        polish_maximum(lambda r: origin_ball_average(params, f, x, r), radii, mg, xatol),
        polish_maximum(lambda r: centred_ball_average(params, f, x, r), radii, mmu, xatol),
    )


def _pointwise_ratio(mg: float, mmu: float, x: float) -> float:
    if mmu <= 0.0:
        if mg > DOMINATION_FLOOR:
            raise DominationViolation(f"M_G f > 0 where M_mu f = 0 at x = {x!r}")
        return 1.0
    return mg / mmu


def domination_ratio(params: GegenbauerParams, f: TestFunction, x_grid, grid: RadiusGrid) -> float:
    """
    sup over x of M_G f / M_mu f, the empirical domination constant.

    The breakpoints of f inside the x-range join the x-grid. At every x both
    sups over r are located between grid radii, and the x-sup is located
    between the neighbours of the best x, so the value settles as the grids
    are refined. 0/0 counts as 1; M_G > 0 where M_mu = 0 raises
    DominationViolation.
    """
    if f.is_zero:
        raise DomainError("domination ratio is undefined for the zero function")
    xs = np.asarray(x_grid, dtype=float)
    breaks = [b for b in f.breakpoints if xs.min() <= b <= xs.max()]
    xs = np.union1d(xs, breaks)

    def ratio_at(x: float) -> float:
        return _pointwise_ratio(*polished_maxima(params, f, x, grid), x)

    ratios = np.array([ratio_at(float(x)) for x in xs])
    best = polish_maximum(ratio_at, xs, ratios, X_XATOL)
    logger.debug(f"Domination ratio for {f.label}: grid {np.max(ratios):.6g}, located {best:.6g}")
    return best


def default_x_grid(f: TestFunction, grid: RadiusGrid, count: int = 97, growth: float = 0.0) -> np.ndarray:
    """Uniform x-grid reaching one maximal radius past the (truncated) support"""
    _, hi = truncation_window(f, growth)
    return np.linspace(0.0, hi + grid.radii[-1], count)


def superlevel_measure(params: GegenbauerParams, x, values, alpha: float) -> float:
    """
    |{x : v(x) > alpha}|_lambda for piecewise-linear v on the grid.

    Cells crossing the threshold contribute the exact weighted measure of the
    sub-interval where the interpolant exceeds alpha.
    """
    xs, vs = np.asarray(x, dtype=float), np.asarray(values, dtype=float)
    left_x, right_x = xs[:-1], xs[1:]
    left_v, right_v = vs[:-1], vs[1:]
    above_l, above_r = left_v > alpha, right_v > alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        crossing = left_x + (alpha - left_v) / (right_v - left_v) * (right_x - left_x)
    start = np.where(above_l, left_x, np.where(above_r, crossing, right_x))
    stop = np.where(above_r, right_x, np.where(above_l, crossing, left_x))
    stop = np.maximum(stop, start)
    cumulative = cumulative_measure(params, np.concatenate([start, stop]))
    return float(np.sum(cumulative[start.size:] - cumulative[: start.size]))


def weak_type_profile(
    params: GegenbauerParams,
    f: TestFunction,
    alphas: Sequence[float],
    grid: RadiusGrid,
    x_grid=None,
) -> DistributionProfile:
    """Superlevel measures of M_G f against ||f||_{1,lambda}"""
    xs = default_x_grid(f, grid, growth=2.0 * params.lam) if x_grid is None else np.asarray(x_grid, dtype=float)
    values = maximal_G_profile(params, f, xs, grid)
    measures = tuple(superlevel_measure(params, xs, values, a) for a in alphas)
    norm = shifted_lp_norm(params, f, 0.0, 1.0)[1]
    return DistributionProfile(
        thresholds=tuple(float(a) for a in alphas),
        superlevel_measures=measures,
        norm_input=norm,
    )


def trapezoid_lp(params: GegenbauerParams, x, values, p: float) -> float:
    """Weighted L_p norm of grid samples by the trapezoid rule"""
    xs, vs = np.asarray(x, dtype=float), np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return float(np.max(vs))
    return float(np.trapezoid(vs**p * params.measure_weight(xs), xs)) ** (1.0 / p)


def strong_type_norm(
    params: GegenbauerParams,
    f: TestFunction,
    p: float,
    grid: RadiusGrid,
    x_grid=None,
) -> float:
    """||M_G f||_{p,lambda} / ||f||_{p,lambda} on the truncated domain"""
    if not p > 1.0:
        raise DomainError(f"strong type needs p > 1, got {p}")
    growth = 0.0 if math.isinf(p) else 2.0 * params.lam / p
    xs = default_x_grid(f, grid, growth=growth) if x_grid is None else np.asarray(x_grid, dtype=float)
    reference = shifted_lp_norm(params, f, 0.0, p)[1]
    if reference == 0.0:
        raise DomainError(f"{f.label} has zero L_p norm")
    values = maximal_G_profile(params, f, xs, grid)
    ratio = trapezoid_lp(params, xs, values, p) / reference
    logger.debug(f"strong type ({p:g},{p:g}) for {f.label}: ratio {ratio:.6g}")
    return ratio


def differentiation_error(
    params: GegenbauerParams,
    f: TestFunction,
    x: float,
    r: float,
    order: int = SHIFT_ORDER,
) -> tuple[float, float]:
    """
    (|avg_r - f(ch x)|, (sh r/2)^-(2 lambda + 1) * integral over [0, r] of |A_t f - f(ch x)| dmu(t)).

    avg_r is the origin-ball average of A_t f(ch x).
    """
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    lam = params.lam
    kinks = [k for k in shift_kinks_in_t(f, x) if k < r]
    edges = np.unique(np.concatenate([np.linspace(0.0, r, BALL_SUBPANELS + 1), kinks]))
    nodes, weights = panel_rule(edges, order, weight=params.measure_weight, origin=0.0, origin_exponent=2.0 * lam)
    shifted = shift_table(params, f, nodes, x, order)
    centre = float(f.of_x(x))
    volume = float(np.sum(weights))
    average = float(np.sum(weights * shifted)) / volume
    deviation = float(np.sum(weights * np.abs(shifted - centre)))
    return abs(average - centre), deviation / math.sinh(0.5 * r) ** (2.0 * lam + 1.0)
