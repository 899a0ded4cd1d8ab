"""Configuration validation"""
import logging
from src.config.settings import settings

logger = logging.getLogger(__name__)

_LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}

def validate_config():
    """Validate configuration values before any command runs"""
    errors = []

    if settings.LOG_LEVEL.upper() not in _LOG_LEVELS:
        errors.append(f"LOG_LEVEL must be one of {sorted(_LOG_LEVELS)}, got {settings.LOG_LEVEL!r}")
    if not str(settings.SCHEMA_VERSION).isdigit():
        errors.append(f"SCHEMA_VERSION must be numeric, got {settings.SCHEMA_VERSION!r}")
    if settings.MAX_ENUM_STATES < 1:
        errors.append("MAX_ENUM_STATES must be at least 1")
    if settings.MAX_ENUM_GENERATORS < 0:
        errors.append("MAX_ENUM_GENERATORS must be nonnegative")
    if settings.MAX_PIVOTS < 1:
        errors.append("MAX_PIVOTS must be at least 1")
    if settings.DANIELL_WINDOW < 3:
        errors.append("DANIELL_WINDOW must be at least 3")
    if settings.MAX_WINDOW < settings.DANIELL_WINDOW:
        errors.append("MAX_WINDOW must be at least DANIELL_WINDOW")

    if errors:
        for error in errors:
            logger.error(f"❌ Config Error: {error}")
        raise ValueError(f"Configuration validation failed: {', '.join(errors)}")

    logger.debug("✅ Configuration validation passed")
