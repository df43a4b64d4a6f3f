import pytest
from pydantic import ValidationError

from numerics.errors import ParameterError
from numerics_config import NumericsConfig, NumericsSettings, load_config, parse_config_text


def test_config_text_with_comments_and_blank_lines():
    values = parse_config_text("# grid\nlambda = 0.4\n\nr_count = 48  # finer\n")
    assert values == {"lambda": 0.4, "r_count": 48}
    assert isinstance(values["r_count"], int)


@pytest.mark.parametrize("text", ["unknown = 1", "lambda 0.4", "lambda =", "r_count = many", "r_count = 1.5"])
def test_malformed_config_lines_are_rejected(text):
    with pytest.raises(ParameterError):
        parse_config_text(text)


def test_defaults_then_file_then_overrides(tmp_path):
    path = tmp_path / "numerics.cfg"
    path.write_text("lambda = 0.1\nx_max = 4\n", encoding="utf-8")
    settings = load_config(path, regime_constant=2.0, jobs=None)
    assert settings.lam == 0.1
    assert settings.x_max == 4.0
    assert settings.regime_constant == 2.0
    assert settings.jobs == NumericsConfig.JOBS
    assert load_config(path, **{"lambda": 0.3}).lam == 0.3


def test_order_outside_the_open_interval_is_invalid():
    with pytest.raises(ValidationError):
        load_config(**{"lambda": 0.7})
    with pytest.raises(ValidationError):
        NumericsSettings(r_count=8)


def test_hash_ignores_the_worker_count():
    assert NumericsSettings(jobs=4).config_hash() == NumericsSettings().config_hash()
    assert NumericsSettings(seed=1).config_hash() != NumericsSettings().config_hash()
    assert len(NumericsSettings().config_hash()) == 64


def test_canonical_text_is_sorted_and_uses_the_public_key(settings):
    lines = settings.to_text().splitlines()
    assert lines == sorted(lines)
    assert "lambda = 0.25" in lines
    assert not any(line.startswith("jobs") for line in lines)


def test_settings_build_the_objects_the_operators_take(settings):
    assert settings.params().lam == settings.lam
    assert settings.radius_grid().count == settings.r_count
    assert settings.quadrature_spec().rel_tol == settings.rel_tol


def test_fixtures_path_follows_the_environment(monkeypatch, tmp_path):
    monkeypatch.delenv(NumericsConfig.FIXTURES_ENV, raising=False)
    assert str(NumericsConfig.get_fixtures_path()) == NumericsConfig.DEFAULT_FIXTURES
    monkeypatch.setenv(NumericsConfig.FIXTURES_ENV, str(tmp_path / "frozen.txt"))
    assert NumericsConfig.get_fixtures_path() == tmp_path / "frozen.txt"
