import logging
import os
from dataclasses import dataclass

import yaml

logger = logging.getLogger(__name__)

ALGEBRA_KINDS = {
    "gl": "A",
    "so-odd": "B",
    "sp": "C",
    "so-even": "D",
    "g2": "G2",
}

OUTPUT_FORMATS = ("json", "text")

_truncation_env = os.getenv("CLASSICAL_W_TRUNCATION", "4")
try:
    _truncation_val = int(_truncation_env)
except Exception:
    _truncation_val = 4
DEFAULT_TRUNCATION = _truncation_val if _truncation_val >= 1 else 4

_workers_env = os.getenv("CLASSICAL_W_WORKERS", "1")
try:
    _workers_val = int(_workers_env)
except Exception:
    _workers_val = 1
DEFAULT_WORKERS = _workers_val if _workers_val >= 1 else 1

DEFAULT_LOG_LEVEL = os.getenv("CLASSICAL_W_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"

LOG_FORMAT = "[%(levelname)s] %(message)s"


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one CLI invocation needs.
    `kind` is the internal Lie type letter (A, B, C, D, G2), `rank` is n.
    """
    kind: str
    rank: int
    subcommand: str
    fmt: str = "json"
    truncation: int = DEFAULT_TRUNCATION
    verbosity: int = 0
    workers: int = DEFAULT_WORKERS
    degree: int | None = None
    input_path: str | None = None
    output_path: str | None = None
    log_level: str = DEFAULT_LOG_LEVEL

    def __post_init__(self):
        if self.fmt not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format: {self.fmt}")
        if self.truncation < 1:
            raise ValueError(f"Truncation depth must be at least 1, got {self.truncation}")
        if self.workers < 1:
            raise ValueError(f"Worker count must be at least 1, got {self.workers}")
        if self.degree is not None and self.degree < 0:
            raise ValueError(f"Degree must be nonnegative, got {self.degree}")


def load_settings(path: str | None) -> dict:
    """
    Read an optional YAML settings file.
    Missing path returns an empty mapping; unknown keys are ignored with a warning.
    """
    if not path:
        return {}
    if not os.path.exists(path):
        raise ValueError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Config file {path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a mapping at top level")
    known = {"truncation", "workers", "format", "log_level"}
    for key in sorted(set(data) - known):
        logger.warning("Ignoring unknown config key %r in %s", key, path)
    return {k: v for k, v in data.items() if k in known}


def resolve_log_level(verbosity: int, configured: str | None = None) -> int:
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    name = (configured or DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def configure_logging(level: int) -> None:
    root = logging.getLogger("classical_w")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
