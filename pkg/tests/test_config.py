"""Tests for configuration and logging utilities."""

from __future__ import annotations

import json
import logging

import pytest

from levicool import (
    Settings,
    configure_logging,
    get_logger,
    get_settings,
    load_settings,
    set_settings,
)


def test_default_settings_use_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("LEVICOOL_OUTPUT_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("LEVICOOL_JOBS", "3")
    settings = get_settings()
    assert settings.output_dir == tmp_path / "results"
    assert settings.jobs == 3
    assert settings.resolved_jobs == 3
    assert settings.per_seed_files is False


def test_zero_jobs_resolves_to_hardware_threads():
    settings = Settings(jobs=0)
    assert settings.resolved_jobs >= 1


def test_env_file_fills_missing_values(tmp_path):
    env_file = tmp_path / ".env"
    env_file.write_text("# local overrides\nLEVICOOL_PER_SEED_FILES=yes\nLEVICOOL_ENV='Lab'\n")

    settings = Settings.from_env({}, env_file=env_file)
    assert settings.per_seed_files is True
    assert settings.environment == "lab"


def test_load_settings_from_json(tmp_path):
    config_file = tmp_path / "settings.json"
    config_file.write_text(json.dumps({"log_level": "debug", "environment": "Prod", "jobs": 2}))

    settings = load_settings(override_files=[config_file])
    assert settings.log_level == "DEBUG"
    assert settings.environment == "prod"
    assert settings.jobs == 2
    assert get_settings() is settings


def test_load_settings_from_toml(tmp_path):
    config_file = tmp_path / "settings.toml"
    config_file.write_text('per_seed_files = true\noutput_dir = "runs"\n')

    settings = load_settings(override_files=[config_file])
    assert settings.per_seed_files is True
    assert settings.output_dir.name == "runs"


def test_invalid_log_level_raises(tmp_path):
    config_file = tmp_path / "bad.json"
    config_file.write_text(json.dumps({"log_level": "verbose"}))

    with pytest.raises(ValueError):
        load_settings(override_files=[config_file])


def test_negative_jobs_rejected():
    with pytest.raises(ValueError):
        Settings().with_overrides({"jobs": -1})


def test_configure_logging_sets_formatter(tmp_path):
    set_settings(Settings(output_dir=tmp_path))
    logger = configure_logging(get_settings())
    logger.info("configured")

    formatter = logger.handlers[0].formatter
    assert "%(levelname)s" in formatter._fmt  # type: ignore[union-attr]

    child = get_logger("test")
    assert isinstance(child, logging.Logger)
    assert child.name == "levicool.test"
