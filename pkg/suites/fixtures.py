"""
Frozen Fixtures
===============

Calibrated constants the suites compare against, stored as text:

    # gegenbauer-fixtures v1
    # config-hash <sha256 of the numerics settings>
    key = value

Values carry 17 significant digits so a re-read reproduces them exactly.
"""

from pathlib import Path

from agno.utils.log import logger
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import FixturesError
from numerics_config import NumericsConfig, NumericsSettings
from operators.test_functions import format_number

HEADER_PREFIX = "# gegenbauer-fixtures "
HASH_PREFIX = "# config-hash "


class Fixtures(BaseModel):
    """Versioned, hash-tagged set of frozen constants"""
    model_config = ConfigDict(frozen=True)

    version: str = Field(NumericsConfig.FIXTURES_VERSION, description="File format version")
    config_hash: str = Field(..., min_length=64, max_length=64, description="sha256 of the producing settings")
    values: dict[str, float] = Field(default_factory=dict)

    def get(self, key: str) -> float:
        if key not in self.values:
            raise FixturesError(f"fixture {key!r} is missing; re-run calibrate")
        return self.values[key]

    def to_text(self) -> str:
        lines = [f"{HEADER_PREFIX}{self.version}", f"{HASH_PREFIX}{self.config_hash}"]
        lines.extend(f"{key} = {format_number(self.values[key])}" for key in sorted(self.values))
        return "\n".join(lines) + "\n"


def parse_fixtures(text: str) -> Fixtures:
    lines = text.splitlines()
    if len(lines) < 2 or not lines[0].startswith(HEADER_PREFIX) or not lines[1].startswith(HASH_PREFIX):
        raise FixturesError("fixtures file lacks the version and config-hash header")
    version = lines[0][len(HEADER_PREFIX):].strip()
    if version != NumericsConfig.FIXTURES_VERSION:
        raise FixturesError(f"fixtures version {version!r}, expected {NumericsConfig.FIXTURES_VERSION!r}")
    values: dict[str, float] = {}
    for number, line in enumerate(lines[2:], start=3):
        if not line.strip() or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        try:
            values[key.strip()] = float(value)
        except ValueError as e:
            raise FixturesError(f"fixtures line {number}: expected 'key = value', got {line!r}") from e
    return Fixtures(version=version, config_hash=lines[1][len(HASH_PREFIX):].strip(), values=values)


def read_fixtures(path: str | Path, settings: NumericsSettings) -> Fixtures:
    """Load fixtures and refuse them unless they were produced under these settings"""
    path = Path(path)
    if not path.is_file():
        raise FixturesError(f"fixtures file {path} not found; run 'gegenbauer calibrate' first")
    fixtures = parse_fixtures(path.read_text(encoding="utf-8"))
    expected = settings.config_hash()
    if fixtures.config_hash != expected:
        raise FixturesError(
            f"fixtures {path} were calibrated under config {fixtures.config_hash[:12]}..., "
            f"current config is {expected[:12]}..."
        )
    logger.info(f"🗂️ Loaded {len(fixtures.values)} fixture(s) from {path}")
    return fixtures


def write_fixtures(path: str | Path, fixtures: Fixtures) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(fixtures.to_text(), encoding="utf-8")
    logger.info(f"💾 Wrote {len(fixtures.values)} fixture(s) to {path}")
    return path
