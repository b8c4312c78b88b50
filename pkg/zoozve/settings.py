import os
from typing import Dict, Optional
from dotenv import dotenv_values, load_dotenv
from pydantic import ValidationError

from .errors import InputError, UsageError
from .schemas import CliConfig

"""
Configuration loading.
Flags override the --config file, which overrides ZOOZVE_* environment
variables (a .env file is picked up by load_dotenv), which override the
CliConfig defaults."""

load_dotenv()

ENV_PREFIX = "ZOOZVE_"
CONFIG_KEYS = tuple(CliConfig.model_fields)
STRING_KEYS = ("outdir",)


def _coerce(key: str, value, source: str):
    if key in STRING_KEYS or not isinstance(value, str):
        return value
    try:
        return int(value, 0)
    except ValueError:
        raise UsageError(f"{source}: {key} must be an integer, got '{value}'")


def env_values() -> Dict[str, object]:
    values = {}
    for key in CONFIG_KEYS:
        raw = os.getenv(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw, ENV_PREFIX + key.upper())
    return values


def read_config_file(path: str) -> Dict[str, object]:
    """Read a flat key=value file; unknown keys are rejected."""
    if not os.path.isfile(path):
        raise InputError(f"config file not found: {path}")

    values = {}
    for key, raw in dotenv_values(path).items():
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}: unknown config key '{key}'")
        if raw is None:
            raise UsageError(f"{path}: config key '{key}' has no value")
        values[key] = _coerce(key, raw, path)
    return values


def load_config(config_path: Optional[str] = None, **flags) -> CliConfig:
    merged = env_values()
    if config_path:
        merged.update(read_config_file(config_path))
    # unset flags come through as None
    merged.update({k: v for k, v in flags.items() if v is not None})

    try:
        return CliConfig(**merged)
    except ValidationError as e:
        err = e.errors()[0]
        where = ".".join(str(p) for p in err["loc"]) or "config"
        raise UsageError(f"invalid configuration: {where}: {err['msg']}")
