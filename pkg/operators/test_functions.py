"""
Test Functions
==============

Named analytic functions f(ch x) used as operator inputs, the registry that
builds them from keys such as ``bump:1,2``, and GridFunction, the sampled form
operators return.

Functions are evaluated either in y = ch x (``evaluate``) or directly in x
(``of_x``); both are vectorised.
"""

import math
from abc import ABC, abstractmethod
from typing import ClassVar, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from numerics.errors import DivergentNorm, DomainError, ParameterError
from numerics.params import GegenbauerParams
from numerics.special_functions import apply_G


def _as_output(values: np.ndarray, argument) -> float | np.ndarray:
    if np.ndim(argument) == 0:
        return float(values)
    return values


def format_number(value: float) -> str:
    """17 significant digits, enough to round-trip a double"""
    return f"{float(value):.17g}"


def csv_text(header: Sequence[str], *columns: Sequence[float]) -> str:
    """Plot-ready CSV: one header line, newline-terminated rows"""
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(format_number(v) for v in row))
    return "\n".join(lines) + "\n"


class TestFunction(BaseModel, ABC):
    """A function of y = ch x >= 1 with hints about support, kinks and decay"""
    __test__ = False
    model_config = ConfigDict(frozen=True)

    registry_name: ClassVar[str] = ""
    positional: ClassVar[tuple[str, ...]] = ()

    @abstractmethod
    def _values_x(self, x: np.ndarray) -> np.ndarray:
        """Values at f(ch x) for an array x >= 0"""

    def of_x(self, x) -> float | np.ndarray:
        xs = np.asarray(x, dtype=float)
        return _as_output(np.asarray(self._values_x(xs), dtype=float) * np.ones_like(xs), x)

    def _values_y(self, y: np.ndarray) -> np.ndarray:
        return self._values_x(np.arccosh(np.maximum(y, 1.0)))

    def evaluate(self, y) -> float | np.ndarray:
        ys = np.asarray(y, dtype=float)
        return _as_output(np.asarray(self._values_y(ys), dtype=float) * np.ones_like(ys), y)

    def __call__(self, y) -> float | np.ndarray:
        return self.evaluate(y)

    @property
    def support(self) -> tuple[float, float]:
        """Interval in x outside which f vanishes"""
        return (0.0, math.inf)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points in x where f or a derivative jumps"""
        return ()

    @property
    def decay(self) -> Optional[float]:
        """Rate kappa with |f(ch x)| <= amplitude e^(-kappa x); None when f does not decay"""
        return None

    @property
    def amplitude(self) -> float:
        """Upper bound for |f|"""
        return math.inf

    @property
    def is_zero(self) -> bool:
        lo, hi = self.support
        return not hi > lo

    @property
    def label(self) -> str:
        args = ",".join(f"{getattr(self, name):g}" for name in self.positional)
        return f"{self.registry_name}:{args}" if args else self.registry_name

    def __add__(self, other: "TestFunction") -> "LinearCombination":
        return LinearCombination(terms=((1.0, self), (1.0, other)))

    def __sub__(self, other: "TestFunction") -> "LinearCombination":
        return LinearCombination(terms=((1.0, self), (-1.0, other)))

    def __mul__(self, factor: float) -> "LinearCombination":
        return LinearCombination(terms=((float(factor), self),))

    __rmul__ = __mul__

    def __neg__(self) -> "LinearCombination":
        return self * -1.0

    def __abs__(self) -> "AbsValue":
        return AbsValue(base=self)


class Bump(TestFunction):
    """exp(1 - 1/(1 - s^2)) with s mapping (a, b) onto (-1, 1); peak 1 at the midpoint"""
    registry_name: ClassVar[str] = "bump"
    positional: ClassVar[tuple[str, ...]] = ("a", "b")

    a: float = Field(..., ge=0.0, description="Left end of the support in x")
    b: float = Field(..., description="Right end of the support in x")

    @model_validator(mode="after")
    def _ordered(self) -> "Bump":
        if not self.b > self.a:
            raise ValueError(f"bump needs a < b, got ({self.a}, {self.b})")
        return self

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        s = (2.0 * x - self.a - self.b) / (self.b - self.a)
        inside = np.abs(s) < 1.0
        s2 = np.where(inside, s * s, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - s2)), 0.0)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b)

    @property
    def amplitude(self) -> float:
        return 1.0


class ExpDecay(TestFunction):
    """y -> e^(-kappa arcch y)"""
    registry_name: ClassVar[str] = "exp_decay"
    positional: ClassVar[tuple[str, ...]] = ("kappa",)

    kappa: float = Field(..., gt=0.0, description="Decay rate in x")

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-self.kappa * x)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        # e^(-kappa |x|) has a corner at the origin
        return (0.0,)

    @property
    def decay(self) -> Optional[float]:
        return self.kappa

    @property
    def amplitude(self) -> float:
        return 1.0


class Indicator(TestFunction):
    """1 for a < x < b, else 0"""
    registry_name: ClassVar[str] = "indicator"
    positional: ClassVar[tuple[str, ...]] = ("a", "b")

    a: float = Field(..., ge=0.0)
    b: float

    @model_validator(mode="after")
    def _ordered(self) -> "Indicator":
        if not self.b > self.a:
            raise ValueError(f"indicator needs a < b, got ({self.a}, {self.b})")
        return self

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.where((x > self.a) & (x < self.b), 1.0, 0.0)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b)

    @property
    def amplitude(self) -> float:
        return 1.0


class Identity(TestFunction):
    """y -> y"""
    registry_name: ClassVar[str] = "identity"

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.cosh(x)

    def _values_y(self, y: np.ndarray) -> np.ndarray:
        return y


class ConstantOne(TestFunction):
    registry_name: ClassVar[str] = "constant_one"

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.ones_like(x)

    @property
    def amplitude(self) -> float:
        return 1.0


class Zero(TestFunction):
    registry_name: ClassVar[str] = "zero"

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 0.0)

    @property
    def decay(self) -> Optional[float]:
        return math.inf

    @property
    def amplitude(self) -> float:
        return 0.0


class PowerKernel(TestFunction):
    """(sh x)^exponent; with exponent alpha - 2 lambda - 1 < 0 this is the Riesz kernel, singular at x = 0"""
    registry_name: ClassVar[str] = "power"
    positional: ClassVar[tuple[str, ...]] = ("exponent",)

    exponent: float

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.sinh(x) ** self.exponent

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0,)

    @property
    def decay(self) -> Optional[float]:
        return -self.exponent if self.exponent < 0.0 else None


class Restricted(TestFunction):
    """base times the indicator of lo < x < hi"""
    base: TestFunction
    lo: float = Field(0.0, ge=0.0)
    hi: float = math.inf

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        inside = (x > self.lo) & (x < self.hi)
        lo, hi = self.support
        parked = 0.5 * (lo + hi) if math.isfinite(hi) else lo + 1.0
        return np.where(inside, self.base._values_x(np.where(inside, x, parked)), 0.0)

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.base.support
        return (max(lo, self.lo), min(hi, self.hi))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        edges = tuple(e for e in (self.lo, self.hi) if math.isfinite(e) and e > 0.0)
        return tuple(sorted(set(self.base.breakpoints + edges)))

    @property
    def decay(self) -> Optional[float]:
        return self.base.decay

    @property
    def amplitude(self) -> float:
        return self.base.amplitude

    @property
    def label(self) -> str:
        return f"{self.base.label}|({self.lo:g},{self.hi:g})"


class AbsValue(TestFunction):
    base: TestFunction

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return np.abs(self.base._values_x(x))

    def _values_y(self, y: np.ndarray) -> np.ndarray:
        return np.abs(self.base._values_y(y))

    @property
    def support(self) -> tuple[float, float]:
        return self.base.support

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.base.breakpoints

    @property
    def decay(self) -> Optional[float]:
        return self.base.decay

    @property
    def amplitude(self) -> float:
        return self.base.amplitude

    @property
    def label(self) -> str:
        return f"|{self.base.label}|"


class LinearCombination(TestFunction):
    """sum of coefficient * function"""
    terms: tuple[tuple[float, TestFunction], ...] = Field(..., min_length=1)

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return sum(c * f._values_x(x) for c, f in self.terms)

    def _values_y(self, y: np.ndarray) -> np.ndarray:
        return sum(c * f._values_y(y) for c, f in self.terms)

    def _active(self) -> list[tuple[float, TestFunction]]:
        return [(c, f) for c, f in self.terms if c != 0.0 and not f.is_zero]

    @property
    def support(self) -> tuple[float, float]:
        active = self._active()
        if not active:
            return (0.0, 0.0)
        return (min(f.support[0] for _, f in active), max(f.support[1] for _, f in active))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(sorted({b for _, f in self._active() for b in f.breakpoints}))

    @property
    def decay(self) -> Optional[float]:
        rates = [f.decay if f.support[1] == math.inf else math.inf for _, f in self._active()]
        if not rates:
            return math.inf
        if any(r is None for r in rates):
            return None
        return min(rates)

    @property
    def amplitude(self) -> float:
        return sum(abs(c) * f.amplitude for c, f in self._active())

    @property
    def label(self) -> str:
        return " + ".join(f"{c:g}*{f.label}" for c, f in self.terms)


class GApplied(TestFunction):
    """G applied to a compactly supported base by finite differences; zero outside the support"""
    base: TestFunction
    params: GegenbauerParams
    step: Optional[float] = Field(None, gt=0.0, description="Fixed difference step in y; default is relative")

    @model_validator(mode="after")
    def _away_from_one(self) -> "GApplied":
        lo, hi = self.base.support
        if not (math.isfinite(hi) and lo > 0.0):
            raise ParameterError("G is applied only to functions compactly supported away from x = 0")
        return self

    def _values_y(self, y: np.ndarray) -> np.ndarray:
        lo, hi = self.base.support
        inside = (y > math.cosh(lo)) & (y < math.cosh(hi))
        out = np.zeros_like(y, dtype=float)
        if np.any(inside):
            out[inside] = apply_G(self.params, self.base._values_y, y[inside], self.step)
        return out

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        return self._values_y(np.cosh(x))

    @property
    def support(self) -> tuple[float, float]:
        return self.base.support

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.base.breakpoints

    @property
    def amplitude(self) -> float:
        lo, hi = self.support
        grid = np.cosh(np.linspace(lo, hi, 401)[1:-1])
        return float(1.25 * np.max(np.abs(self._values_y(grid))))

    @property
    def label(self) -> str:
        return f"G[{self.base.label}]"


class InterpolatedFunction(TestFunction):
    """Piecewise-linear interpolation of samples in x, held constant past the last sample"""
    x_grid: tuple[float, ...]
    values: tuple[float, ...]
    extrapolation: Literal["constant", "zero"] = "constant"

    def _values_x(self, x: np.ndarray) -> np.ndarray:
        xs, vs = np.asarray(self.x_grid), np.asarray(self.values)
        if self.extrapolation == "zero":
            return np.interp(x, xs, vs, left=0.0, right=0.0)
        return np.interp(x, xs, vs)

    @property
    def support(self) -> tuple[float, float]:
        if self.extrapolation == "zero":
            return (self.x_grid[0], self.x_grid[-1])
        return (0.0, math.inf)

    @property
    def amplitude(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def label(self) -> str:
        return f"grid[{len(self.x_grid)}]"


REGISTRY: dict[str, type[TestFunction]] = {
    cls.registry_name: cls
    for cls in (Bump, ExpDecay, Indicator, Identity, ConstantOne, Zero, PowerKernel)
}


def create_test_function(key: str) -> TestFunction:
    """Build a registry function from ``name`` or ``name:arg1,arg2``"""
    name, _, raw = key.strip().partition(":")
    if name not in REGISTRY:
        raise ParameterError(f"unknown test function {name!r}; known: {', '.join(sorted(REGISTRY))}")
    cls = REGISTRY[name]
    args = [float(a) for a in raw.split(",") if a.strip()] if raw else []
    if len(args) != len(cls.positional):
        raise ParameterError(f"{name} takes {len(cls.positional)} argument(s) {cls.positional}, got {len(args)}")
    return cls(**dict(zip(cls.positional, args)))


def truncation_window(
    f: TestFunction,
    growth: float = 0.0,
    tail_tol: float = 1e-10,
) -> tuple[float, float]:
    """
    Interval in x carrying the mass of f up to tail_tol.

    growth is the exponential rate of the weight f is integrated against, so a
    decaying f needs decay > growth. Compact support is returned as is.
    """
    lo, hi = f.support
    if math.isfinite(hi):
        return (lo, hi)
    rate = f.decay
    if rate is None or not rate > growth:
        raise DivergentNorm(f"{f.label} has no certified truncation against growth e^({growth:g} x)")
    return (lo, max(lo, 0.0) + -math.log(tail_tol) / (rate - growth) + 1.0)


def sample_grid(lo: float, hi: float, count: int, breaks: Sequence[float] = ()) -> np.ndarray:
    """count uniform points on [lo, hi] merged with the interior breakpoints"""
    if count < 2:
        raise DomainError(f"a grid needs at least two points, got {count}")
    inner = [b for b in breaks if lo < b < hi]
    return np.unique(np.concatenate([np.linspace(lo, hi, count), np.asarray(inner, dtype=float)]))


class GridFunction(BaseModel):
    """Samples of a computed field on an increasing x-grid"""
    model_config = ConfigDict(frozen=True)

    x_grid: tuple[float, ...] = Field(..., min_length=1, description="Strictly increasing x >= 0")
    values: tuple[float, ...] = Field(..., description="Finite values, one per grid point")
    interpolation: Literal["linear", "none"] = "linear"

    @field_validator("x_grid")
    @classmethod
    def _increasing(cls, grid: tuple[float, ...]) -> tuple[float, ...]:
        xs = np.asarray(grid)
        if np.any(xs < 0.0) or np.any(np.diff(xs) <= 0.0):
            raise ValueError("x_grid must be strictly increasing and non-negative")
        return grid

    @model_validator(mode="after")
    def _matching(self) -> "GridFunction":
        if len(self.values) != len(self.x_grid):
            raise ValueError(f"{len(self.values)} values for {len(self.x_grid)} grid points")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("GridFunction values must be finite")
        return self

    @classmethod
    def from_arrays(cls, x, values, interpolation: Literal["linear", "none"] = "linear") -> "GridFunction":
        return cls(
            x_grid=tuple(float(v) for v in np.asarray(x)),
            values=tuple(float(v) for v in np.asarray(values)),
            interpolation=interpolation,
        )

    @property
    def x(self) -> np.ndarray:
        return np.asarray(self.x_grid)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.values)

    def evaluate(self, x) -> float | np.ndarray:
        if self.interpolation == "none":
            raise DomainError("GridFunction without interpolation is only defined on its grid")
        return _as_output(np.interp(np.asarray(x, dtype=float), self.x, self.y), x)

    def as_test_function(self, extrapolation: Literal["constant", "zero"] = "constant") -> InterpolatedFunction:
        return InterpolatedFunction(x_grid=self.x_grid, values=self.values, extrapolation=extrapolation)

    def to_csv(self, header: tuple[str, str] = ("x", "value")) -> str:
        return csv_text(header, self.x_grid, self.values)
