"""
OAM-Holo Simulator - Utility Functions
======================================

This module provides helpers for:
- Environment settings (.env via python-dotenv)
- Logging setup
- Loading and validating JSON run configurations with line/key diagnostics
- Parameter sweeps over dotted configuration keys
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from src.data_models import RunConfig
from src.exceptions import ConfigurationError

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


# =============================================================================
# ENVIRONMENT
# =============================================================================

def get_output_dir() -> Path:
    """Default output directory, from OAMHOLO_OUTPUT_DIR."""
    return Path(os.getenv("OAMHOLO_OUTPUT_DIR", "output"))


def get_log_level() -> str:
    return os.getenv("OAMHOLO_LOG_LEVEL", "INFO").upper()


def ledger_enabled() -> bool:
    return os.getenv("OAMHOLO_LEDGER", "0").strip().lower() in ("1", "true", "yes", "on")


def get_ledger_path() -> Path:
    default = Path(__file__).parent.parent / "data" / "run_ledger.db"
    return Path(os.getenv("OAMHOLO_LEDGER_PATH", str(default)))


def configure_logging(level: Optional[str] = None) -> None:
    """Apply the project log format once, at the level from the environment."""
    logging.basicConfig(level=level or get_log_level(), format=LOG_FORMAT)


# =============================================================================
# CONFIGURATION LOADING
# =============================================================================

def format_validation_error(error: ValidationError) -> str:
    """One line per problem: dotted key path and message."""
    lines = []
    for problem in error.errors():
        location = ".".join(str(part) for part in problem["loc"]) or "<root>"
        lines.append(f"  {location}: {problem['msg']}")
    return "invalid configuration:\n" + "\n".join(lines)


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    """
    Parse and validate a JSON run configuration.

    Raises:
        ConfigurationError: With line/column for syntax errors and dotted key
            paths for validation errors
    """
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source}: top level must be a JSON object")
    return validate_config(data, source)


def validate_config(data: dict, source: str = "<config>") -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"{source}: {format_validation_error(e)}") from e


def load_run_config(path: Optional[Path]) -> RunConfig:
    """Read a configuration file; no path means all defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ConfigurationError(f"configuration file not found: {path}") from e
    return parse_config_text(text, str(path))


# =============================================================================
# SWEEPS
# =============================================================================

def _parse_value(raw: str) -> Any:
    raw = raw.strip()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_sweep(text: str) -> tuple[str, list[Any]]:
    """
    Parse KEY=V1,V2,... into (dotted key, values).

    Values are read as JSON scalars where possible ("1.029" -> 1.029,
    "null" -> None) and kept as strings otherwise.
    """
    key, sep, values = text.partition("=")
    key = key.strip()
    if not sep or not key or not values.strip():
        raise ConfigurationError(f"sweep must look like KEY=V1,V2,...; got {text!r}")
    return key, [_parse_value(v) for v in values.split(",")]


def apply_override(config: RunConfig, key: str, value: Any) -> RunConfig:
    """Return a validated copy of config with the dotted key set to value."""
    data = config.model_dump()
    node = data
    parts = key.split(".")
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigurationError(f"unknown sweep key {key!r}")
        node = node[part]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise ConfigurationError(f"unknown sweep key {key!r}")
    node[parts[-1]] = value
    return validate_config(data, f"sweep {key}={value}")


def sweep_configs(config: RunConfig, sweep: Optional[str]) -> list[tuple[str, RunConfig]]:
    """(suffix, config) per sweep value; a single unsuffixed run without a sweep."""
    if not sweep:
        return [("", config)]
    key, values = parse_sweep(sweep)
    short = key.split(".")[-1]
    return [(f"_{short}-{value}", apply_override(config, key, value)) for value in values]
