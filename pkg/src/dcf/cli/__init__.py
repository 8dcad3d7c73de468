"""Manifest-driven command line for the two-stage search."""

from .config import (
    CONFIG_VERSION,
    PAPER_SCALE_SIDE,
    ConfigError,
    RunConfig,
    default_document,
    load_config,
    normalize_document,
    run_id,
)
from .main import PrerequisiteError, build_parser, main
from .rundir import (
    LOCK_NAME,
    LOG_NAME,
    MANIFEST_NAME,
    LockHeldError,
    read_manifest,
    update_manifest,
    writer_lock,
)

__all__ = [
    "CONFIG_VERSION",
    "ConfigError",
    "LOCK_NAME",
    "LOG_NAME",
    "LockHeldError",
    "MANIFEST_NAME",
    "PAPER_SCALE_SIDE",
    "PrerequisiteError",
    "RunConfig",
    "build_parser",
    "default_document",
    "load_config",
    "main",
    "normalize_document",
    "read_manifest",
    "run_id",
    "update_manifest",
    "writer_lock",
]
