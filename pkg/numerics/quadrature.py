"""
Quadrature Engine
=================

Adaptive integration for finite intervals, algebraic endpoint singularities and
semi-infinite hyperbolic-weight integrals, fixed vectorised panel rules for
sweeps, and a Monte-Carlo oracle for cross-checks.

The adaptive path runs on QUADPACK (scipy.integrate.quad). The vectorised path
uses Gauss-Legendre / Gauss-Jacobi panels built from scipy.special roots.
"""

import math
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import integrate, special

from .errors import DomainError, NonFiniteIntegrand, TailNotCertified, ToleranceNotMet

ScalarFunction = Callable[[float], float]
TailMajorant = Callable[[float], float]


class TruncationPolicy(BaseModel):
    """How semi-infinite integrals are cut off and how the discarded tail is certified"""
    model_config = ConfigDict(frozen=True)

    cutoff: float = Field(8.0, gt=0.0, description="Initial length of the kept interval [a, a + cutoff]")
    tail_bound_exponent: float = Field(1.0, gt=0.0, description="Decay rate assumed when no majorant is supplied")
    tail_tol: float = Field(1e-10, gt=0.0, description="Largest admissible tail bound")
    max_cutoff: float = Field(512.0, gt=0.0, description="Longest kept interval before giving up")


class QuadratureSpec(BaseModel):
    """Tolerances, subdivision budget and endpoint exponents for one integral"""
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(1e-10, gt=0.0, description="Absolute tolerance")
    rel_tol: float = Field(1e-8, gt=0.0, description="Relative tolerance")
    max_subdivisions: int = Field(2000, ge=1, description="QUADPACK subinterval limit")
    singularity_exponents: tuple[float, float] = Field(
        (0.0, 0.0), description="(beta_left, beta_right) of the weight (t-a)^bl (b-t)^br"
    )
    truncation: TruncationPolicy = Field(default_factory=TruncationPolicy)
    roundoff_slack: float = Field(
        100.0, ge=1.0, description="Factor by which a flagged result may exceed the tolerance and still be accepted"
    )

    @field_validator("singularity_exponents")
    @classmethod
    def _integrable(cls, value: tuple[float, float]) -> tuple[float, float]:
        if min(value) <= -1.0:
            raise ValueError(f"endpoint exponents must exceed -1, got {value}")
        return value

    def with_exponents(self, left: float = 0.0, right: float = 0.0) -> "QuadratureSpec":
        return self.model_copy(update={"singularity_exponents": (left, right)})

    def with_tolerances(self, rel_tol: float, abs_tol: Optional[float] = None) -> "QuadratureSpec":
        return self.model_copy(update={"rel_tol": rel_tol, "abs_tol": abs_tol if abs_tol is not None else self.abs_tol})

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


class IntegralResult(BaseModel):
    """Value, error estimate and subdivision count of one integral"""
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(0.0, ge=0.0)
    subdivisions_used: int = Field(0, ge=0)

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            subdivisions_used=self.subdivisions_used + other.subdivisions_used,
        )

    def scaled(self, factor: float) -> "IntegralResult":
        return IntegralResult(
            value=factor * self.value,
            error_estimate=abs(factor) * self.error_estimate,
            subdivisions_used=self.subdivisions_used,
        )


DEFAULT_SPEC = QuadratureSpec()
NESTED_INNER_SPEC = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-8)
NESTED_OUTER_SPEC = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-6)
ZERO = IntegralResult(value=0.0)


def _guarded(f: ScalarFunction) -> ScalarFunction:
    def evaluate(t: float) -> float:
        value = float(f(t))
        if not math.isfinite(value):
            raise NonFiniteIntegrand(f"integrand returned {value} at t={t!r}")
        return value
    return evaluate


def _interior(points: Optional[Iterable[float]], a: float, b: float) -> list[float]:
    if not points:
        return []
    span = b - a
    kept = sorted({float(p) for p in points if a + 1e-12 * span < p < b - 1e-12 * span})
    return kept


def integrate_finite(
    f: ScalarFunction,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    points: Optional[Iterable[float]] = None,
) -> IntegralResult:
    """Integral of f over [a, b]; points marks interior kinks"""
    if a > b:
        raise DomainError(f"integration limits out of order: a={a} > b={b}")
    if a == b:
        return ZERO
    breaks = _interior(points, a, b)
    out = integrate.quad(
        _guarded(f),
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        points=breaks or None,
        full_output=1,
    )
    value, error, info = float(out[0]), float(out[1]), out[2]
    if len(out) > 3:
        allowed = spec.roundoff_slack * spec.tolerance_for(value)
        if not error <= allowed:
            raise ToleranceNotMet(
                f"quad on [{a}, {b}] stopped at error {error:.3e} > {allowed:.3e}: {out[3]}"
            )
        logger.debug(f"quad on [{a}, {b}] flagged but accepted (error {error:.3e}): {out[3]}")
    return IntegralResult(value=value, error_estimate=error, subdivisions_used=int(info["last"]))


def integrate_singular(
    g: ScalarFunction,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    points: Optional[Iterable[float]] = None,
) -> IntegralResult:
    """
    Integral of (t-a)^bl (b-t)^br g(t) over [a, b] for bounded g.

    Each half is mapped by t = a + L s^(1/(1+bl)) (mirrored on the right), which
    turns the algebraic weight into a constant Jacobian.
    """
    left, right = spec.singularity_exponents
    if left <= -1.0 or right <= -1.0:
        raise DomainError(f"endpoint exponents must exceed -1, got {(left, right)}")
    if a > b:
        raise DomainError(f"integration limits out of order: a={a} > b={b}")
    if a == b:
        return ZERO

    mid = 0.5 * (a + b)
    half = mid - a
    k_left, k_right = 1.0 + left, 1.0 + right
    breaks = _interior(points, a, b)

    def left_part(s: float) -> float:
        t = a + half * s ** (1.0 / k_left)
        return (b - t) ** right * float(g(t))

    def right_part(s: float) -> float:
        t = b - half * s ** (1.0 / k_right)
        return (t - a) ** left * float(g(t))

    left_points = [((p - a) / half) ** k_left for p in breaks if p < mid]
    right_points = [((b - p) / half) ** k_right for p in breaks if p > mid]

    lhs = integrate_finite(left_part, 0.0, 1.0, spec, left_points).scaled(half**k_left / k_left)
    rhs = integrate_finite(right_part, 0.0, 1.0, spec, right_points).scaled(half**k_right / k_right)
    return lhs + rhs


def exponential_tail(amplitude: float, rate: float, origin: float = 0.0) -> TailMajorant:
    """Majorant T -> amplitude e^(-rate (T - origin)) / rate of a tail integral"""
    if rate <= 0.0:
        raise DomainError(f"tail decay rate must be positive, got {rate}")
    return lambda cutoff: amplitude * math.exp(-rate * (cutoff - origin)) / rate


def integrate_semi_infinite(
    f: ScalarFunction,
    a: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    tail: Optional[TailMajorant] = None,
    points: Optional[Iterable[float]] = None,
) -> IntegralResult:
    """
    Integral of f over [a, inf) as the integral over [a, T] plus a certified tail.

    Without an explicit majorant the tail is bounded by |f(T)| / tail_bound_exponent,
    i.e. f is assumed to decay at least at that exponential rate beyond T.
    """
    policy = spec.truncation
    if tail is None:
        rate = policy.tail_bound_exponent
        tail = lambda cutoff: abs(float(f(cutoff))) / rate  # noqa: E731

    length = policy.cutoff
    bound = tail(a + length)
    while not bound <= policy.tail_tol:
        length *= 2.0
        if length > policy.max_cutoff:
            raise TailNotCertified(
                f"tail bound {bound:.3e} still above {policy.tail_tol:.1e} at cutoff {a + length / 2.0}"
            )
        bound = tail(a + length)

    body = integrate_finite(f, a, a + length, spec, points)
    return IntegralResult(
        value=body.value,
        error_estimate=body.error_estimate + bound,
        subdivisions_used=body.subdivisions_used,
    )


def mc_oracle(
    f: Callable[..., np.ndarray],
    domain: Sequence,
    n: int,
    seed: int,
    weight_exponents: Optional[tuple[float, float]] = None,
    batch: int = 1_000_000,
) -> tuple[float, float]:
    """
    Monte-Carlo estimate and standard error of an integral over a box.

    f is vectorised: it receives one array per dimension. domain is a single
    (lo, hi) pair or a sequence of pairs (at most two). With weight_exponents
    (bl, br) on a 1-D domain the integral of (t-lo)^bl (hi-t)^br f(t) is estimated
    by sampling the matching Beta law.
    """
    if n < 1:
        raise DomainError(f"sample count must be positive, got {n}")
    box = [tuple(map(float, domain))] if np.isscalar(domain[0]) else [tuple(map(float, d)) for d in domain]
    if len(box) > 2:
        raise DomainError("mc_oracle supports at most two dimensions")
    if weight_exponents is not None and len(box) != 1:
        raise DomainError("importance sampling is one-dimensional")

    rng = np.random.default_rng(seed)
    if weight_exponents is None:
        volume = math.prod(hi - lo for lo, hi in box)
    else:
        lo, hi = box[0]
        bl, br = weight_exponents
        volume = (hi - lo) ** (1.0 + bl + br) * special.beta(1.0 + bl, 1.0 + br)

    total = 0.0
    total_sq = 0.0
    remaining = n
    while remaining > 0:
        size = min(batch, remaining)
        if weight_exponents is None:
            samples = [lo + (hi - lo) * rng.random(size) for lo, hi in box]
        else:
            lo, hi = box[0]
            samples = [lo + (hi - lo) * rng.beta(1.0 + weight_exponents[0], 1.0 + weight_exponents[1], size)]
        values = np.asarray(f(*samples), dtype=float) * np.ones(size)
        if not np.all(np.isfinite(values)):
            raise NonFiniteIntegrand("mc_oracle drew a non-finite integrand sample")
        total += float(np.sum(values))
        total_sq += float(np.sum(values * values))
        remaining -= size

    mean = total / n
    variance = max(total_sq - total * mean, 0.0) / (n - 1) if n > 1 else 0.0
    return volume * mean, volume * math.sqrt(variance / n)


@lru_cache(maxsize=64)
def _legendre_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(order)
    nodes, weights = 0.5 * (x + 1.0), 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=64)
def _jacobi_nodes(order: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    # weight (1+x)^beta on [-1, 1] mapped to s^beta on [0, 1]
    x, w = special.roots_jacobi(order, 0.0, beta)
    nodes, weights = 0.5 * (x + 1.0), w * 2.0 ** (-1.0 - beta)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(
    edges: np.ndarray,
    order: int,
    weight: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    origin: float = 0.0,
    origin_exponent: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss rule over the panels between consecutive edges (last axis).

    Returns nodes and weights of shape edges.shape[:-1] + (panels, order). When a
    weight function is given it is folded into the weights; if it behaves like
    (t - origin)^origin_exponent and a row's first edge equals origin, that panel
    uses Gauss-Jacobi so the endpoint power is integrated exactly.
    """
    edges = np.asarray(edges, dtype=float)
    lo = edges[..., :-1, None]
    width = edges[..., 1:, None] - lo
    s, w = _legendre_nodes(order)
    nodes = lo + width * s
    weights = width * w
    if weight is None:
        return nodes, weights

    weights = weights * weight(nodes)
    if origin_exponent != 0.0:
        sj, wj = _jacobi_nodes(order, float(origin_exponent))
        first_lo, first_width = lo[..., :1, :], width[..., :1, :]
        jacobi_nodes = first_lo + first_width * sj
        offset = np.where(jacobi_nodes > origin, jacobi_nodes - origin, 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            smooth = weight(jacobi_nodes) / offset**origin_exponent
        jacobi_weights = first_width ** (1.0 + origin_exponent) * wj * np.nan_to_num(smooth)
        at_origin = first_lo == origin
        nodes[..., :1, :] = np.where(at_origin, jacobi_nodes, nodes[..., :1, :])
        weights[..., :1, :] = np.where(at_origin, jacobi_weights, weights[..., :1, :])
    return nodes, weights


def subdivided_edges(lo: float, hi: float, breaks: Iterable[float] = (), max_width: float = 0.5) -> np.ndarray:
    """Sorted panel edges covering [lo, hi] with the given breakpoints and panels no wider than max_width"""
    if hi <= lo:
        return np.array([lo, lo])
    count = max(1, int(math.ceil((hi - lo) / max_width)))
    inner = [b for b in breaks if lo < b < hi]
    return np.unique(np.concatenate([np.linspace(lo, hi, count + 1), np.asarray(inner, dtype=float)]))
