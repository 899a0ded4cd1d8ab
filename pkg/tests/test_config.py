import pytest

from src.config import validator
from src.config.validator import validate_config


def test_default_configuration_is_valid():
    validate_config()


@pytest.mark.parametrize(
    "name, value",
    [
        ("LOG_LEVEL", "CHATTY"), ("SCHEMA_VERSION", "v1"), ("MAX_PIVOTS", 0), ("DANIELL_WINDOW", 2),
        ("MAX_WINDOW", 5),
    ],
)
def test_bad_values_are_rejected(monkeypatch, name, value):
    monkeypatch.setattr(validator.settings, name, value)
    with pytest.raises(ValueError, match=name):
        validate_config()
