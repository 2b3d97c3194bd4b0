import pytest

from src.infrastructure.settings import Settings


def test_defaults(monkeypatch):
    for name in ("NEARFACT_WORKERS", "NEARFACT_CATALOG", "NEARFACT_CHECKPOINT_DIR",
                 "NEARFACT_TIME_BUDGET", "NEARFACT_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings.from_env()
    assert settings.workers is None
    assert settings.catalog_path == "results/catalog.jsonl"
    assert settings.time_budget == 600.0
    assert settings.resolve_workers(None) == 1
    assert settings.resolve_workers(4) == 4


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("NEARFACT_WORKERS", "3")
    monkeypatch.setenv("NEARFACT_TIME_BUDGET", "12.5")
    monkeypatch.setenv("NEARFACT_LOG_LEVEL", "debug")
    settings = Settings.from_env()
    assert settings.resolve_workers(8) == 3
    assert settings.time_budget == 12.5
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("name, value", [
    ("NEARFACT_WORKERS", "many"),
    ("NEARFACT_WORKERS", "0"),
    ("NEARFACT_TIME_BUDGET", "soon"),
])
def test_invalid_environment(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        Settings.from_env()
