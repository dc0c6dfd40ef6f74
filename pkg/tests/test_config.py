import logging

import pytest

from classical_w.config import (
    ALGEBRA_KINDS,
    DEFAULT_TRUNCATION,
    DEFAULT_WORKERS,
    LOG_FORMAT,
    RunConfig,
    configure_logging,
    load_settings,
    resolve_log_level,
)


def test_defaults_are_sane():
    assert DEFAULT_TRUNCATION >= 1
    assert DEFAULT_WORKERS >= 1
    assert ALGEBRA_KINDS["so-even"] == "D"
    assert set(ALGEBRA_KINDS.values()) == {"A", "B", "C", "D", "G2"}


def test_run_config_defaults():
    cfg = RunConfig(kind="A", rank=2, subcommand="generate")
    assert cfg.fmt == "json"
    assert cfg.truncation == DEFAULT_TRUNCATION
    assert cfg.degree is None


@pytest.mark.parametrize(
    "overrides",
    [{"fmt": "xml"}, {"truncation": 0}, {"workers": 0}, {"degree": -1}],
)
def test_run_config_validation(overrides):
    with pytest.raises(ValueError):
        RunConfig(kind="A", rank=2, subcommand="generate", **overrides)


def test_load_settings(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("truncation: 6\nworkers: 2\nformat: text\ncolour: blue\n", encoding="utf-8")
    assert load_settings(str(path)) == {"truncation": 6, "workers": 2, "format": "text"}


def test_load_settings_missing_and_empty(tmp_path):
    assert load_settings(None) == {}
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_settings(str(empty)) == {}
    with pytest.raises(ValueError):
        load_settings(str(tmp_path / "nope.yaml"))


def test_load_settings_rejects_bad_yaml(tmp_path):
    listed = tmp_path / "list.yaml"
    listed.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_settings(str(listed))
    broken = tmp_path / "broken.yaml"
    broken.write_text("truncation: [1, 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_settings(str(broken))


def test_resolve_log_level():
    assert resolve_log_level(2) == logging.DEBUG
    assert resolve_log_level(1, "error") == logging.INFO
    assert resolve_log_level(0, "error") == logging.ERROR
    assert resolve_log_level(0, "bogus") == logging.WARNING


def test_configure_logging_replaces_handler():
    configure_logging(logging.INFO)
    configure_logging(logging.DEBUG)
    logger = logging.getLogger("classical_w")
    assert len(logger.handlers) == 1
    assert logger.handlers[0].formatter._fmt == LOG_FORMAT
    assert logger.level == logging.DEBUG
