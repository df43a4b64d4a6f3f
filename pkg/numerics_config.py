#!/usr/bin/env python3
"""
Numerics Configuration for the Gegenbauer Harness
=================================================

Defaults for tolerances, grids and rule orders, the ``key = value`` config
file loader, and the settings hash that ties a fixtures file to the
configuration it was produced under.
"""

import hashlib
import os
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import ParameterError
from numerics.params import GegenbauerParams
from numerics.quadrature import QuadratureSpec
from operators.maximal_operators import RadiusGrid, create_radius_grid


class NumericsConfig:
    """Defaults shared by the CLI, the suites and the calibration run"""

    LAMBDA = 0.25
    REGIME_CONSTANT = 1.0

    # sup over r > 0 runs over a log grid reaching two decades below c
    R_MIN = 1e-3
    R_MAX = 10.0
    R_COUNT = 32

    X_MAX = 6.0
    X_COUNT = 33

    GAMMA_MAX = 12.0
    RULE_ORDER = 24
    SHIFT_ORDER = 16

    ABS_TOL = 1e-10
    REL_TOL = 1e-8

    SEED = 20250101
    CSTAR_CEILING = 0.9
    JOBS = 1

    # frozen constants are the calibrated value widened by this factor
    FIXTURE_MARGIN = 1.05
    FIXTURES_VERSION = "v1"
    FIXTURES_ENV = "GEGENBAUER_FIXTURES"
    DEFAULT_FIXTURES = "fixtures/gegenbauer_fixtures.txt"

    @classmethod
    def get_defaults(cls) -> Dict[str, Any]:
        """Every config-file key with its default value"""
        return {
            "lambda": cls.LAMBDA,
            "regime_constant": cls.REGIME_CONSTANT,
            "r_min": cls.R_MIN,
            "r_max": cls.R_MAX,
            "r_count": cls.R_COUNT,
            "x_max": cls.X_MAX,
            "x_count": cls.X_COUNT,
            "gamma_max": cls.GAMMA_MAX,
            "rule_order": cls.RULE_ORDER,
            "shift_order": cls.SHIFT_ORDER,
            "abs_tol": cls.ABS_TOL,
            "rel_tol": cls.REL_TOL,
            "seed": cls.SEED,
            "cstar_ceiling": cls.CSTAR_CEILING,
            "jobs": cls.JOBS,
        }

    @classmethod
    def get_fixtures_path(cls) -> Path:
        """GEGENBAUER_FIXTURES when set, the committed default otherwise"""
        return Path(os.getenv(cls.FIXTURES_ENV) or cls.DEFAULT_FIXTURES)


class NumericsSettings(BaseModel):
    """One resolved configuration"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(NumericsConfig.LAMBDA, alias="lambda", gt=0.0, lt=0.5, description="Order lambda in (0, 1/2)")
    regime_constant: float = Field(NumericsConfig.REGIME_CONSTANT, ge=1.0, description="Regime constant c >= 1")
    r_min: float = Field(NumericsConfig.R_MIN, gt=0.0, description="Smallest radius of the sup grid")
    r_max: float = Field(NumericsConfig.R_MAX, gt=0.0, description="Largest radius of the sup grid")
    r_count: int = Field(NumericsConfig.R_COUNT, ge=16, description="Radii in the sup grid")
    x_max: float = Field(NumericsConfig.X_MAX, gt=0.0, description="Right end of the x-grid")
    x_count: int = Field(NumericsConfig.X_COUNT, ge=2, description="Points in the x-grid")
    gamma_max: float = Field(NumericsConfig.GAMMA_MAX, gt=1.0, description="Spectral cut-off")
    rule_order: int = Field(NumericsConfig.RULE_ORDER, ge=2, description="Gauss order of spectral panels")
    shift_order: int = Field(NumericsConfig.SHIFT_ORDER, ge=2, description="Gauss order of shift panels")
    abs_tol: float = Field(NumericsConfig.ABS_TOL, gt=0.0)
    rel_tol: float = Field(NumericsConfig.REL_TOL, gt=0.0)
    seed: int = Field(NumericsConfig.SEED, ge=0, description="Seed of every random draw")
    cstar_ceiling: float = Field(NumericsConfig.CSTAR_CEILING, gt=0.0, description="Largest admissible calibration residual")
    jobs: int = Field(NumericsConfig.JOBS, ge=1, description="Worker processes for suite cases")

    def params(self) -> GegenbauerParams:
        return GegenbauerParams(lam=self.lam, regime_constant=self.regime_constant)

    def radius_grid(self) -> RadiusGrid:
        return create_radius_grid(self.r_min, self.r_max, self.r_count)

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec(abs_tol=self.abs_tol, rel_tol=self.rel_tol)

    def to_text(self) -> str:
        """Canonical key = value text; jobs is left out since it never changes results"""
        values = self.model_dump(by_alias=True, exclude={"jobs"})
        return "".join(f"{key} = {values[key]!r}\n" for key in sorted(values))

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()


_INTEGER_KEYS = {"r_count", "x_count", "rule_order", "shift_order", "seed", "jobs"}


def parse_config_text(text: str) -> Dict[str, Any]:
    """key = value lines; '#' starts a comment; unknown keys are rejected"""
    known = NumericsConfig.get_defaults()
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ParameterError(f"config line {number}: expected 'key = value', got {raw!r}")
        if key not in known:
            raise ParameterError(f"config line {number}: unknown key {key!r}")
        try:
            values[key] = int(value) if key in _INTEGER_KEYS else float(value)
        except ValueError as e:
            raise ParameterError(f"config line {number}: {key} = {value!r} is not a number") from e
    return values


def load_config(path: Optional[str | Path] = None, **overrides: Any) -> NumericsSettings:
    """Settings from the defaults, then the config file, then explicit overrides"""
    values = NumericsConfig.get_defaults()
    if path is not None:
        values.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return NumericsSettings(**values)


def print_numerics_info(settings: Optional[NumericsSettings] = None):
    """Print the resolved configuration"""
    settings = settings or load_config()
    print("\n🧮 Numerics Configuration")
    print("=" * 35)
    print(f"📐 lambda = {settings.lam:g}, regime constant c = {settings.regime_constant:g}")
    print(f"   - radius grid: {settings.r_count} radii in [{settings.r_min:g}, {settings.r_max:g}]")
    print(f"   - x-grid: {settings.x_count} points in [0, {settings.x_max:g}]")
    print(f"   - spectral cut-off gamma_max = {settings.gamma_max:g}, rule order {settings.rule_order}")
    print(f"   - tolerances: abs {settings.abs_tol:g}, rel {settings.rel_tol:g}")
    print(f"\n🗂️  Fixtures: {NumericsConfig.get_fixtures_path()}")
    print(f"   config hash {settings.config_hash()[:16]}...")


if __name__ == "__main__":
    print_numerics_info()
