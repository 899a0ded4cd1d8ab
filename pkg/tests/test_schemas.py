from pathlib import Path

import pytest

from src.cli.documents import DOCUMENTS
from src.config.settings import settings
from src.data.loader import DocumentLoader
from src.core.errors import InputError

ROOT = Path(__file__).parent.parent
loader = DocumentLoader(str(ROOT / settings.SCHEMAS_DIR))


@pytest.mark.parametrize("command", sorted(DOCUMENTS))
def test_schema_matches_document_model(command):
    schema = loader.load_schema(command)
    model = DOCUMENTS[command]
    assert schema["additionalProperties"] is False
    assert set(schema["properties"]) == set(model.model_fields)
    required = {name for name, field in model.model_fields.items() if field.is_required()}
    assert set(schema["required"]) == required


def test_missing_schema():
    with pytest.raises(InputError):
        loader.load_schema("no-such-command")
