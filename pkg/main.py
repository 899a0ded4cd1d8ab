"""Main entry point for the exact coherence toolkit"""
import logging
import sys
from src.cli.handlers import main
from src.config.settings import settings
from src.config.validator import validate_config

# Logs go to stderr; stdout carries only the verdict document
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format=settings.LOG_FORMAT,
    stream=sys.stderr
)

if __name__ == "__main__":
    validate_config()
    sys.exit(main())
