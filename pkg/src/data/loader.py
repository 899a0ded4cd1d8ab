"""Instance document and schema loading"""
import json
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

from jsonschema import Draft202012Validator

from ..config.settings import settings
from ..core.errors import InputError, SchemaViolationError
from ..utils.helpers import format_location

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parents[2]

class DocumentLoader:
    def __init__(self, schemas_dir: Optional[str] = None):
        directory = Path(schemas_dir or settings.SCHEMAS_DIR)
        self._schemas_dir = directory if directory.is_absolute() else ROOT / directory
        self._schemas: dict[str, dict] = {}
        self._validators: dict[str, Draft202012Validator] = {}

    def load_instance(self, path: Optional[str] = None, stream: Optional[TextIO] = None) -> dict:
        """Read one JSON instance from a file, or from stdin when no path is given"""
        if path is None:
            text = (stream or sys.stdin).read()
            source = "stdin"
        else:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as e:
                raise InputError(f"cannot read {path}: {e.strerror}")
            source = path
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed JSON in {source}: {e.msg} at line {e.lineno}")
        if not isinstance(document, dict):
            raise InputError(f"instance in {source} must be a JSON object")
        logger.debug(f"Loaded instance from {source}")
        return document

    def load_schema(self, command: str) -> dict:
        """Shipped JSON schema for a command, cached after the first read"""
        if command not in self._schemas:
            path = self._schemas_dir / f"v{settings.SCHEMA_VERSION}" / f"{command}.json"
            try:
                self._schemas[command] = json.loads(path.read_text(encoding="utf-8"))
            except OSError:
                raise InputError(f"no schema for command {command!r} at {path}")
        return self._schemas[command]

    def validate_instance(self, command: str, document: dict) -> None:
        """Check a document against its command's schema; the first violation is reported"""
        if command not in self._validators:
            self._validators[command] = Draft202012Validator(self.load_schema(command))
        error = next(self._validators[command].iter_errors(document), None)
        if error is None:
            return
        location = format_location(error.absolute_path)
        rational = self.load_schema(command).get("$defs", {}).get("rational")
        if error.validator == "oneOf" and error.schema == rational:
            raise InputError(f"invalid rational at {location}")
        raise SchemaViolationError(f"schema violation at {location}: {error.message}")

# Global document loader instance
document_loader = DocumentLoader()
