"""
Configuration loading.

A run is configured by one JSON file validated against SweepConfig; unknown
keys and malformed values are hard errors reported as ConfigError. Process
settings (log level, output format, worker cap) come from the environment,
optionally through a local .env file.

Environment variables:
- LOG_LEVEL: structlog filtering level (default: INFO)
- XMONCOUPLER_ENV: "development" switches to console log rendering
- XMONCOUPLER_MAX_WORKERS: upper bound on sweep worker threads
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from xmoncoupler.errors import ConfigError
from xmoncoupler.logging_config import get_logger
from xmoncoupler.schemas import SweepConfig, parse_flux

logger = get_logger(__name__)

__all__ = ["load_config", "config_from_dict", "load_environment", "parse_flux", "parse_flux_arg"]


def load_environment() -> bool:
    """Load a .env file from the working directory if present."""
    return load_dotenv()


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def config_from_dict(data: Dict[str, Any], source: str = "<dict>") -> SweepConfig:
    """
    Validate a configuration mapping.

    Raises:
        ConfigError: unknown keys, missing circuit values, bad types
    """
    try:
        return SweepConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(
            f"invalid configuration: {_format_validation_error(e)}",
            context={"source": source},
            original_error=e,
        ) from e


def load_config(path: Union[str, Path]) -> SweepConfig:
    """
    Read and validate a JSON configuration file.

    Raises:
        ConfigError: unreadable file, invalid JSON or invalid content
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read configuration: {e}", context={"source": str(path)}, original_error=e) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"configuration is not valid JSON: {e}", context={"source": str(path)}, original_error=e) from e
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object", context={"source": str(path)})

    config = config_from_dict(data, source=str(path))
    logger.info(
        "config_loaded",
        source=str(path),
        n_flux=config.n_flux,
        paths=",".join(config.paths),
        n_points=config.grid.n_points,
    )
    return config


def parse_flux_arg(value: str) -> float:
    """Flux from a command-line argument; ConfigError on malformed input."""
    try:
        return parse_flux(value)
    except ValueError as e:
        raise ConfigError(str(e), context={"argument": value}) from e
