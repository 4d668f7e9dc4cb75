"""Command line interface for the levicool simulator."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from .config import get_settings, load_settings
from .errors import LevicoolError
from .logging_utils import configure_logging, get_logger
from .runner import build_scenario_config, parse_config_file, run_scenario
from .runner.schemas import ErrorRecord, OutputFormat, Scenario

__all__ = ["main"]

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_INTEGRATOR = 3
EXIT_IO = 4

_FLOAT_FLAGS = (
    ("mass_kg", "Particle mass in kg"),
    ("omega_hz", "Trap frequency in Hz (omega = 2 pi * omega_hz)"),
    ("temperature_k", "Initial temperature in K"),
    ("eta", "Quantum efficiency in [0, 1]"),
    ("k_tilde", "Normalised measurement strength kappa x0^2 / omega"),
    ("gamma_fb", "Feedback damping rate in units of omega"),
    ("dt", "Integrator step in units of 1/omega"),
    ("duration_periods", "Simulated time in trap periods"),
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levicool", description=__doc__)
    subcommands = parser.add_subparsers(dest="command", required=True)

    run = subcommands.add_parser("run", help="Run a preset or custom scenario")
    run.add_argument("--config", type=Path, help="Flat key = value run configuration file")
    run.add_argument(
        "--scenario",
        choices=[scenario.value for scenario in Scenario],
        help="Scenario preset",
    )
    for name, help_text in _FLOAT_FLAGS:
        run.add_argument(f"--{name}", type=float, help=help_text)
    run.add_argument("--seed", type=int, help="Base seed of the ensemble")
    run.add_argument("--seed_count", type=int, help="Number of consecutive seeds")
    run.add_argument("--format", choices=[fmt.value for fmt in OutputFormat])
    run.add_argument("--out", help="Output directory")
    run.add_argument("--jobs", type=int, help="Worker processes (0 = all hardware threads)")
    run.add_argument("--per-seed", action="store_true", default=None, help="Also write per-seed trajectories")
    run.add_argument("--dim", type=int, help="Fock truncation for oracle-check")
    run.add_argument("--log-level", help="Override the log level")
    run.add_argument(
        "--settings",
        action="append",
        type=Path,
        help="Optional JSON or TOML settings file",
    )
    return parser


def _collect_values(args: argparse.Namespace) -> dict[str, Any]:
    values: dict[str, Any] = {}
    if args.config is not None:
        values.update(parse_config_file(args.config))
    for key in ("scenario", *(name for name, _ in _FLOAT_FLAGS), "seed", "seed_count", "format", "out"):
        flag_value = getattr(args, key)
        if flag_value is not None:
            values[key] = flag_value
    return values


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, LevicoolError):
        return exc.exit_code
    if isinstance(exc, (ValidationError, ValueError)):
        return EXIT_PARAMETER
    if isinstance(exc, OSError):
        return EXIT_IO
    return 1


def _report(exc: BaseException) -> int:
    code = _exit_code(exc)
    context = dict(getattr(exc, "context", {}) or {})
    if isinstance(exc, OSError) and exc.filename:
        context.setdefault("path", str(exc.filename))
    record = ErrorRecord(
        error=type(exc).__name__,
        message=getattr(exc, "message", None) or str(exc),
        exit_code=code,
        context=context,
    )
    print(json.dumps(record.model_dump(), default=str), file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(override_files=args.settings) if args.settings else get_settings()
        if args.log_level:
            settings = settings.with_overrides({"log_level": args.log_level})
        if args.jobs is not None:
            settings = settings.with_overrides({"jobs": args.jobs})
        logger = configure_logging(settings)
        logger.info(
            "levicool started",
            extra={"environment": settings.environment, "log_level": settings.log_level},
        )

        config = build_scenario_config(
            _collect_values(args),
            settings=settings,
            per_seed=args.per_seed,
            dim=args.dim,
        )
        result = run_scenario(config)
    except (LevicoolError, ValidationError, ValueError, OSError) as exc:
        return _report(exc)

    get_logger("cli").info(
        "Run complete", extra={"scenario": result.scenario.value, "files": [str(f) for f in result.files]}
    )
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
