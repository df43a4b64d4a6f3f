"""
Parameter Models
================

The order lambda, the spectral degree and the potential exponents shared by
every operator.
"""

import math
from fractions import Fraction
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import special


def _fraction(value: float) -> Fraction:
    return Fraction(value).limit_denominator(10**9)


class GegenbauerParams(BaseModel):
    """The order lambda in (0, 1/2) and the regime constant c splitting small and large radii"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., alias="lambda", gt=0.0, lt=0.5, description="Order lambda of the Gegenbauer operator")
    regime_constant: float = Field(1.0, ge=1.0, description="Radius c separating the small and large regimes")

    @classmethod
    def edge(cls, lam: float = 0.5, regime_constant: float = 1.0) -> "GegenbauerParams":
        """Unchecked construction for closed-form cross-checks at the lambda = 1/2 edge"""
        return cls.model_construct(lam=lam, regime_constant=regime_constant)

    @property
    def shift_normalization(self) -> float:
        """Gamma(lambda + 1/2) / (Gamma(1/2) Gamma(lambda))"""
        lam = self.lam
        return math.exp(special.gammaln(lam + 0.5) - special.gammaln(0.5) - special.gammaln(lam))

    @property
    def full_beta(self) -> float:
        """Integral of (1 - u^2)^(lambda - 1) over [-1, 1]"""
        return 1.0 / self.shift_normalization

    def measure_weight(self, t):
        """sh^(2 lambda) t, the density of the weighted measure"""
        return np.sinh(t) ** (2.0 * self.lam)


class Degree(BaseModel):
    """Spectral variable of the transforms"""
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(..., ge=1.0, description="Degree gamma >= 1")


class PotentialParams(BaseModel):
    """Riesz exponent alpha and integrability p, with q fixed by 1/p - 1/q = alpha/(2 lambda + 1)"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., alias="lambda", gt=0.0, lt=0.5, description="Order lambda")
    alpha: float = Field(..., gt=0.0, description="Riesz exponent, below 2 lambda + 1")
    p: float = Field(..., ge=1.0, description="Integrability exponent of the input")

    @model_validator(mode="after")
    def _check_alpha(self) -> "PotentialParams":
        if not self.alpha < 2.0 * self.lam + 1.0:
            raise ValueError(f"alpha={self.alpha} must lie in (0, 2*lambda+1) = (0, {2.0 * self.lam + 1.0})")
        return self

    @property
    def homogeneous_dimension(self) -> Fraction:
        return 2 * _fraction(self.lam) + 1

    @property
    def q(self) -> float:
        """Target exponent; inf on the BMO line p * alpha = 2 lambda + 1"""
        inverse = 1 / _fraction(self.p) - _fraction(self.alpha) / self.homogeneous_dimension
        if inverse <= 0:
            return math.inf
        return float(1 / inverse)

    @property
    def regime(self) -> Literal["sobolev", "bmo", "outside"]:
        scaled = _fraction(self.p) * _fraction(self.alpha)
        if scaled < self.homogeneous_dimension:
            return "sobolev"
        if scaled == self.homogeneous_dimension:
            return "bmo"
        return "outside"

    @property
    def kernel_exponent(self) -> float:
        """alpha - 2 lambda - 1, the power of sh x in the Riesz kernel"""
        return self.alpha - 2.0 * self.lam - 1.0
