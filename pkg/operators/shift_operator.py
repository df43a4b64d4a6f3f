"""
Generalized Shift
=================

A^lambda_{ch t} f(ch x) = C_lambda * integral over [0, pi] of
f(ch x ch t - sh x sh t cos phi) (sin phi)^(2 lambda - 1) dphi,
with C_lambda = Gamma(lambda + 1/2) / (Gamma(1/2) Gamma(lambda)).

Three evaluations are offered:
- shift_apply: the phi-integral with adaptive singular quadrature (the reference)
- shift_power_kernel: the same integral for the singular kernel (sh s)^exponent
- shift_table: a vectorised fixed rule on the equivalent Beta(lambda, lambda)
  expectation E f(ch(x - t) + 2 sh x sh t V)
- shift_average_kernel_form: the ball average I(x, r) rewritten as a z-integral
  against the incomplete Beta profile A(x, z, r)
"""

import math
from typing import Optional

import numpy as np
from pydantic import Field
from scipy import special

from numerics.errors import DivergentNorm, DomainError
from numerics.params import GegenbauerParams
from numerics.quadrature import (
    DEFAULT_SPEC,
    NESTED_INNER_SPEC,
    NESTED_OUTER_SPEC,
    QuadratureSpec,
    integrate_finite,
    integrate_singular,
    panel_rule,
)

from .measure_geometry import weighted_rule
from .test_functions import TestFunction, truncation_window

SHIFT_ORDER = 16
PROFILE_SLACK = 1e-9


def _phi_weight_factor(phi: float) -> float:
    """sin(phi) / (phi (pi - phi)), accurate at both ends"""
    if phi <= 0.5 * math.pi:
        return float(np.sinc(phi / math.pi)) / (math.pi - phi)
    return float(np.sinc(1.0 - phi / math.pi)) / phi


def shift_kinks_in_phi(f: TestFunction, t: float, x: float) -> list[float]:
    """Angles where ch x ch t - sh x sh t cos phi crosses a breakpoint of f"""
    spread = math.sinh(x) * math.sinh(t)
    if spread == 0.0:
        return []
    centre = math.cosh(x) * math.cosh(t)
    angles = []
    for xk in f.breakpoints:
        cosine = (centre - math.cosh(xk)) / spread
        if -1.0 < cosine < 1.0:
            angles.append(math.acos(cosine))
    return angles


def shift_apply(
    params: GegenbauerParams,
    f: TestFunction,
    t: float,
    x: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """A^lambda_{ch t} f(ch x) by adaptive quadrature of the phi-integral"""
    if t < 0.0 or x < 0.0:
        raise DomainError(f"shift needs t >= 0 and x >= 0, got t={t}, x={x}")
    if t == 0.0 or x == 0.0:
        return float(f.evaluate(math.cosh(x) * math.cosh(t)))
    beta = 2.0 * params.lam - 1.0
    centre = math.cosh(x) * math.cosh(t)
    spread = math.sinh(x) * math.sinh(t)

    def integrand(phi: float) -> float:
        return float(f.evaluate(centre - spread * math.cos(phi))) * _phi_weight_factor(phi) ** beta

    result = integrate_singular(
        integrand,
        0.0,
        math.pi,
        spec.with_exponents(beta, beta),
        points=shift_kinks_in_phi(f, t, x),
    )
    return params.shift_normalization * result.value


def shift_power_kernel(
    params: GegenbauerParams,
    exponent: float,
    t: float,
    x: float,
    spec: QuadratureSpec = NESTED_INNER_SPEC,
    distance: Optional[float] = None,
) -> float:
    """
    A^lambda_{ch t} k(ch x) for k = (sh s)^exponent, singular at s = 0 when exponent < 0.

    The argument enters as ch s - 1 = 2 sh^2(d/2) + 2 sh x sh t sin^2(phi/2) with
    d = |x - t|, so nothing cancels near t = x; pass distance when d is known more
    accurately than x - t. There the phi-integrand peaks at angles of order
    d / sqrt(sh x sh t), and panels at that scale times powers of 4 resolve it.
    """
    if t < 0.0 or x < 0.0:
        raise DomainError(f"shift needs t >= 0 and x >= 0, got t={t}, x={x}")
    if t == 0.0 or x == 0.0:
        return math.sinh(x + t) ** exponent
    d = abs(x - t) if distance is None else distance
    beta = 2.0 * params.lam - 1.0
    gap = 2.0 * math.sinh(0.5 * d) ** 2
    spread = math.sinh(x) * math.sinh(t)
    if gap == 0.0 and exponent + 2.0 * params.lam <= 0.0:
        raise DivergentNorm(f"A_t k(x) diverges at t = x = {x} for kernel exponent {exponent}")

    def integrand(phi: float) -> float:
        above = gap + 2.0 * spread * math.sin(0.5 * phi) ** 2
        return (above * (above + 2.0)) ** (0.5 * exponent) * _phi_weight_factor(phi) ** beta

    points = []
    angle = 0.0625 * math.sqrt(2.0 * gap / spread)
    while 0.0 < angle < math.pi:
        points.append(angle)
        angle *= 4.0
    result = integrate_singular(integrand, 0.0, math.pi, spec.with_exponents(beta, beta), points)
    return params.shift_normalization * result.value


def _half_rule(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    return panel_rule(np.sort(edges, axis=-1), order)


def shift_table(params: GegenbauerParams, f: TestFunction, t, x, order: int = SHIFT_ORDER) -> np.ndarray:
    """
    A^lambda_{ch t} f(ch x) on the broadcast of t and x.

    Each half of the Beta(lambda, lambda) law is mapped by v = s^(1/lambda)/2
    (mirrored for v > 1/2), which absorbs the v^(lambda-1) endpoint power; the
    s-panels are split wherever the argument crosses a breakpoint of f.
    """
    lam = params.lam
    ts, xs = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    if np.any(ts < 0.0) or np.any(xs < 0.0):
        raise DomainError("shift needs t >= 0 and x >= 0")
    shape = ts.shape
    z_minus = np.cosh(xs - ts).reshape(-1, 1)
    delta = (2.0 * np.sinh(xs) * np.sinh(ts)).reshape(-1, 1)
    moving = delta[:, 0] > 0.0
    out = np.asarray(f.evaluate(z_minus[:, 0]), dtype=float).copy()
    if not np.any(moving):
        return out.reshape(shape)

    z_minus, delta = z_minus[moving], delta[moving]
    rows = z_minus.shape[0]
    base = np.broadcast_to(np.linspace(0.0, 1.0, 5), (rows, 5))
    kinks = np.cosh(np.asarray(f.breakpoints, dtype=float))
    if kinks.size:
        v = (kinks[None, :] - z_minus) / delta
        left_edges = np.concatenate([base, (2.0 * np.clip(v, 0.0, 0.5)) ** lam], axis=-1)
        right_edges = np.concatenate([base, (2.0 * (1.0 - np.clip(v, 0.5, 1.0))) ** lam], axis=-1)
    else:
        left_edges = right_edges = base

    z0, dz = z_minus[:, :, None], delta[:, :, None]
    s_left, w_left = _half_rule(left_edges, order)
    v_left = 0.5 * s_left ** (1.0 / lam)
    left = np.sum(w_left * (1.0 - v_left) ** (lam - 1.0) * f.evaluate(z0 + dz * v_left), axis=(-2, -1))

    s_right, w_right = _half_rule(right_edges, order)
    v_right = 1.0 - 0.5 * s_right ** (1.0 / lam)
    right = np.sum(w_right * v_right ** (lam - 1.0) * f.evaluate(z0 + dz * v_right), axis=(-2, -1))

    factor = 0.5**lam / (lam * special.beta(lam, lam))
    out[moving] = factor * (left + right)
    return out.reshape(shape)


def shift_kinks_in_t(f: TestFunction, x: float) -> list[float]:
    """Shift distances where A_t f(ch x) meets a breakpoint of f"""
    points = set()
    for xk in f.breakpoints:
        points.add(abs(x - xk))
        points.add(x + xk)
    return sorted(p for p in points if p > 0.0)


def shift_average_integral(
    params: GegenbauerParams,
    f: TestFunction,
    x: float,
    r: float,
    spec: QuadratureSpec = NESTED_OUTER_SPEC,
    inner: QuadratureSpec = NESTED_INNER_SPEC,
) -> float:
    """I(x, r) = integral over [0, r] of A_t|f|(ch x) sh^(2 lambda) t dt, nested over the phi-form"""
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    if f.is_zero:
        return 0.0
    lam = params.lam
    magnitude = abs(f)

    def integrand(t: float) -> float:
        ratio = math.sinh(t) / t if t > 0.0 else 1.0
        return shift_apply(params, magnitude, t, x, inner) * ratio ** (2.0 * lam)

    return integrate_singular(
        integrand,
        0.0,
        r,
        spec.with_exponents(2.0 * lam, 0.0),
        points=shift_kinks_in_t(f, x),
    ).value


def profile_argument(params: GegenbauerParams, x, z, r) -> np.ndarray:
    """U = (ch r - z ch x) / (sqrt(z^2 - 1) sh x), unclamped"""
    xs, zs, rs = (np.asarray(v, dtype=float) for v in (x, z, r))
    with np.errstate(divide="ignore", invalid="ignore"):
        return (np.cosh(rs) - zs * np.cosh(xs)) / (np.sqrt(zs * zs - 1.0) * np.sinh(xs))


def inner_profile(params: GegenbauerParams, x, z, r) -> float | np.ndarray:
    """
    A(x, z, r) = integral from -1 to U of (1 - u^2)^(lambda - 1) du.

    Equals full_beta * I_{(1+U)/2}(lambda, lambda). U is clamped to [-1, 1];
    at z = 1 (U undefined) the profile is full.
    """
    lam = params.lam
    xs, zs, rs = (np.asarray(v, dtype=float) for v in (x, z, r))
    if np.any(xs <= 0.0):
        raise DomainError("inner profile needs x > 0")
    lowest = np.where(xs <= rs, 1.0, np.cosh(xs - rs))
    if np.any(zs < lowest * (1.0 - PROFILE_SLACK)) or np.any(zs > np.cosh(xs + rs) * (1.0 + PROFILE_SLACK)):
        raise DomainError("z outside the admissible window [ch(x-r), ch(x+r)]")
    u = np.nan_to_num(np.clip(profile_argument(params, xs, zs, rs), -1.0, 1.0), nan=1.0)
    value = params.full_beta * special.betainc(lam, lam, 0.5 * (1.0 + u))
    if np.ndim(x) == 0 and np.ndim(z) == 0 and np.ndim(r) == 0:
        return float(value)
    return value


def shift_average_kernel_form(
    params: GegenbauerParams,
    f: TestFunction,
    x: float,
    r: float,
    spec: QuadratureSpec = NESTED_INNER_SPEC,
) -> float:
    """I(x, r) = C_lambda * integral of |f(z)| (z^2 - 1)^(lambda - 1/2) A(x, z, r) dz"""
    if not x > 0.0:
        raise DomainError("the kernel form divides by sh x; x must be positive")
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    if f.is_zero:
        return 0.0
    lam = params.lam
    lo, hi = f.support
    z_top = math.cosh(x + r)
    if math.isfinite(hi):
        z_top = min(z_top, math.cosh(hi))
    kinks = [math.cosh(xk) for xk in f.breakpoints]

    def profile(z: float) -> float:
        u = profile_argument(params, x, z, r)
        u = 1.0 if math.isnan(u) else min(max(float(u), -1.0), 1.0)
        return float(special.betainc(lam, lam, 0.5 * (1.0 + u)))

    if x <= r:
        z_bottom = max(1.0, math.cosh(lo))
        if z_bottom >= z_top:
            return 0.0
        points = kinks + [math.cosh(r - x)]
        if z_bottom == 1.0:
            def near_one(z: float) -> float:
                return abs(float(f.evaluate(z))) * (z + 1.0) ** (lam - 0.5) * profile(z)

            return integrate_singular(near_one, 1.0, z_top, spec.with_exponents(lam - 0.5, 0.0), points).value
    else:
        z_bottom = max(math.cosh(x - r), math.cosh(lo))
        if z_bottom >= z_top:
            return 0.0
        points = kinks

    def integrand(z: float) -> float:
        return abs(float(f.evaluate(z))) * (z * z - 1.0) ** (lam - 0.5) * profile(z)

    return integrate_finite(integrand, z_bottom, z_top, spec, points).value


def shift_window(f: TestFunction, t: float, growth: float = 0.0, tail_tol: float = 1e-10) -> tuple[float, float]:
    """x-interval outside which A_t f is negligible"""
    lo, hi = truncation_window(f, growth, tail_tol)
    return (max(0.0, lo - t), hi + t)


def shifted_lp_norm(
    params: GegenbauerParams,
    f: TestFunction,
    t: float,
    p: float,
    subtract_original: bool = False,
    order: int = SHIFT_ORDER,
) -> tuple[float, float]:
    """
    (||A_t f (- f)||_{p,lambda}, ||f||_{p,lambda}) on one shared x-rule.

    Sharing the rule keeps comparisons such as contraction free of
    discretisation bias between the two sides.
    """
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    if f.is_zero:
        return (0.0, 0.0)
    growth = 0.0 if math.isinf(p) else 2.0 * params.lam / p
    _, hi = shift_window(f, t, growth)
    breaks = [b for xk in f.breakpoints for b in (xk, abs(xk - t), xk + t)]
    nodes, weights = weighted_rule(params, hi, breaks, order)
    original = np.asarray(f.of_x(nodes))
    shifted = shift_table(params, f, t, nodes, order)
    field = shifted - original if subtract_original else shifted
    if math.isinf(p):
        return (float(np.max(np.abs(field))), float(np.max(np.abs(original))))
    norm = float(np.sum(weights * np.abs(field) ** p)) ** (1.0 / p)
    reference = float(np.sum(weights * np.abs(original) ** p)) ** (1.0 / p)
    if not (math.isfinite(norm) and math.isfinite(reference)):
        raise DivergentNorm(f"non-finite L_p norm for {f.label}")
    return (norm, reference)


def shift_modulus(
    params: GegenbauerParams,
    f: TestFunction,
    t: float,
    p: float,
    order: Optional[int] = None,
) -> float:
    """||A_t f - f||_{p,lambda}"""
    if t == 0.0:
        return 0.0
    return shifted_lp_norm(params, f, t, p, subtract_original=True, order=order or SHIFT_ORDER)[0]


class ShiftedFunction(TestFunction):
    """x -> A^lambda_{ch t} base(ch x), evaluated through shift_table"""
    base: TestFunction
    params: GegenbauerParams
    t: float = Field(..., ge=0.0, description="Shift distance")
    order: int = Field(SHIFT_ORDER, ge=2)

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        if self.t == 0.0:
            return self.base._values_x(x)
        return shift_table(self.params, self.base, self.t, x, self.order)

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.base.support
        if not hi > lo:
            return (0.0, 0.0)
        return (max(0.0, lo - self.t), hi + self.t)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        points = {b for xk in self.base.breakpoints for b in (abs(xk - self.t), xk + self.t)}
        return tuple(sorted(points))

    @property
    def decay(self) -> Optional[float]:
        # A_t is positive and maps e^(-kappa x) below e^(kappa t) e^(-kappa x)
        return self.base.decay

    @property
    def amplitude(self) -> float:
        rate = self.base.decay
        if rate is None or math.isfinite(self.base.support[1]):
            return self.base.amplitude
        return self.base.amplitude * math.exp(rate * self.t)

    @property
    def label(self) -> str:
        return f"A_{self.t:g}[{self.base.label}]"
