"""Configuration and validation module."""
import logging
import os
from typing import Dict

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

logger = logging.getLogger(__name__)

ENV_VARS = {
    "max_width": "ATMET_MAX_WIDTH",
    "enum_cap": "ATMET_ENUM_CAP",
    "tolerance": "ATMET_TOLERANCE",
    "max_concurrent": "ATMET_MAX_CONCURRENT",
    "log_level": "ATMET_LOG_LEVEL",
}
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseModel):
    """Engine limits and logging; CLI flags override them per invocation."""

    model_config = ConfigDict(frozen=True)

    max_width: int = Field(default=20, ge=0)
    enum_cap: int = Field(default=20, ge=0)
    tolerance: float = Field(default=1e-9, gt=0)
    max_concurrent: int = Field(default=4, ge=1)
    log_level: str = "WARNING"


def _environment() -> Dict[str, str]:
    return {field: os.environ[var] for field, var in ENV_VARS.items() if os.getenv(var)}


def load_settings() -> Settings:
    """Read ``ATMET_*`` variables, from ``.env`` too, on top of the defaults."""
    load_dotenv()
    values = _environment()
    if "log_level" in values:
        values["log_level"] = values["log_level"].upper()
        if values["log_level"] not in LOG_LEVELS:
            raise ConfigError(f"{ENV_VARS['log_level']} must be one of {', '.join(LOG_LEVELS)}")
    try:
        return Settings(**values)
    except ValidationError as e:
        field = str(e.errors()[0]["loc"][0])
        raise ConfigError(f"invalid {ENV_VARS[field]}={values[field]!r}: {e.errors()[0]['msg']}") from None


def validate_environment() -> bool:
    """Log which settings come from the environment; False if any is invalid."""
    load_dotenv()
    for field, var in ENV_VARS.items():
        if os.getenv(var):
            logger.debug("%s set from environment", var)
        else:
            logger.debug("%s not set, using default %r", var, Settings.model_fields[field].default)
    try:
        load_settings()
    except ConfigError as e:
        logger.error("%s", e)
        return False
    return True
