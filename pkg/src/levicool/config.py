"""Runtime settings for the levicool simulator."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional

__all__ = ["Settings", "get_settings", "load_settings", "set_settings"]

_SETTINGS_CACHE: Optional["Settings"] = None

_VALID_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}


def _parse_bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _load_env_file(path: Path) -> Dict[str, str]:
    if not path.exists():
        return {}

    data: Dict[str, str] = {}
    for line in path.read_text().splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            continue
        key, raw_value = stripped.split("=", 1)
        data[key.strip()] = raw_value.strip().strip('"').strip("'")
    return data


def _check_level(log_level: str) -> str:
    if log_level not in _VALID_LEVELS:
        raise ValueError(
            f"Unsupported log level '{log_level}'. Choose from {sorted(_VALID_LEVELS)}."
        )
    return log_level


def _check_jobs(raw: Any) -> int:
    jobs = int(raw)
    if jobs < 0:
        raise ValueError(f"Job count must be >= 0 (0 selects all hardware threads), got {jobs}.")
    return jobs


@dataclass(frozen=True)
class Settings:
    """Process-wide configuration resolved from environment variables."""

    environment: str = "development"
    log_level: str = "INFO"
    output_dir: Path = Path("results")
    jobs: int = 0
    per_seed_files: bool = False

    @property
    def resolved_jobs(self) -> int:
        return self.jobs or (os.cpu_count() or 1)

    @classmethod
    def from_env(
        cls,
        env: Mapping[str, str] | None = None,
        *,
        env_file: Path | None = Path(".env"),
    ) -> "Settings":
        env = dict(os.environ if env is None else env)
        if env_file:
            env.update({k: v for k, v in _load_env_file(env_file).items() if k not in env})

        environment = env.get("LEVICOOL_ENV", cls.environment).strip() or cls.environment
        log_level = _check_level(env.get("LEVICOOL_LOG_LEVEL", cls.log_level).strip().upper())
        output_dir = Path(env.get("LEVICOOL_OUTPUT_DIR", str(cls.output_dir))).expanduser()
        jobs = _check_jobs(env.get("LEVICOOL_JOBS", cls.jobs))
        per_seed_files = _parse_bool(env.get("LEVICOOL_PER_SEED_FILES", "false"))

        return cls(
            environment=environment.lower(),
            log_level=log_level,
            output_dir=output_dir,
            jobs=jobs,
            per_seed_files=per_seed_files,
        )

    def with_overrides(self, overrides: Mapping[str, Any]) -> "Settings":
        output_dir = Path(overrides.get("output_dir", self.output_dir)).expanduser()
        log_level = _check_level(str(overrides.get("log_level", self.log_level)).upper())
        environment = str(overrides.get("environment", self.environment)).lower()
        jobs = _check_jobs(overrides.get("jobs", self.jobs))
        per_seed_raw = overrides.get("per_seed_files", self.per_seed_files)
        if isinstance(per_seed_raw, str):
            per_seed_files = _parse_bool(per_seed_raw)
        else:
            per_seed_files = bool(per_seed_raw)

        return replace(
            self,
            environment=environment or self.environment,
            log_level=log_level,
            output_dir=output_dir,
            jobs=jobs,
            per_seed_files=per_seed_files,
        )


def get_settings() -> Settings:
    global _SETTINGS_CACHE

    if _SETTINGS_CACHE is None:
        _SETTINGS_CACHE = Settings.from_env()
    return _SETTINGS_CACHE


def set_settings(settings: Settings) -> Settings:
    global _SETTINGS_CACHE

    _SETTINGS_CACHE = settings
    return settings


def load_settings(*, override_files: Optional[Iterable[Path]] = None) -> Settings:
    base = Settings.from_env()

    overrides: Dict[str, Any] = {}
    for file_path in override_files or ():
        file_path = Path(file_path)
        if not file_path.exists():
            continue

        if file_path.suffix.lower() == ".json":
            data = json.loads(file_path.read_text())
        elif file_path.suffix.lower() in {".toml", ".tml"}:
            try:
                import tomllib  # type: ignore[attr-defined]
            except ModuleNotFoundError:  # pragma: no cover
                import tomli as tomllib  # type: ignore
            data = tomllib.loads(file_path.read_text())
        else:
            continue

        if not isinstance(data, dict):
            raise ValueError(
                f"Settings file {file_path} must contain a top-level object/dict."
            )
        overrides.update(data)

    return set_settings(base.with_overrides(overrides))
