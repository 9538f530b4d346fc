"""Environment variable utilities."""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

def load_env() -> None:
    """Load a `.env` file from the working directory if one exists."""
    load_dotenv()

def get_env_var(key: str, required: bool = True, default: Optional[str] = None) -> Optional[str]:
    """Get an environment variable value.

    Args:
        key: The environment variable name
        required: If True, raises RuntimeError if variable is not set
        default: Value returned when the variable is unset and not required

    Returns:
        The value of the environment variable

    Raises:
        RuntimeError: If required is True and the variable is not set
    """
    value = os.getenv(key)
    if required and not value:
        raise RuntimeError(f"Required environment variable '{key}' is not set")
    return value if value else default

def get_log_level() -> int:
    """Resolve LOG_LEVEL (name or number) to a logging level, INFO by default."""
    raw = get_env_var("LOG_LEVEL", required=False, default="INFO")
    if raw.isdigit():
        return int(raw)
    level = logging.getLevelName(raw.upper())
    return level if isinstance(level, int) else logging.INFO
