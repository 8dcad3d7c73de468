"""Run-directory layout: manifest, writer lock, and file logging."""

from __future__ import annotations

import errno
import json
import logging
import os
from contextlib import contextmanager
from pathlib import Path

__all__ = [
    "LOCK_NAME",
    "LOG_NAME",
    "MANIFEST_NAME",
    "LockHeldError",
    "read_manifest",
    "run_logger",
    "update_manifest",
    "writer_lock",
]

MANIFEST_NAME = "run.json"
LOG_NAME = "run.log"
LOCK_NAME = ".lock"


class LockHeldError(RuntimeError):
    """Another process is already writing to this run directory."""


@contextmanager
def writer_lock(run_dir: Path):
    """Exclusive create of `.lock`; held for the duration of a command.

    A crash leaves the file behind on purpose: a stale lock means the last
    writer did not finish, which the operator should see and clear by hand.
    """
    run_dir.mkdir(parents=True, exist_ok=True)
    lock_path = run_dir / LOCK_NAME
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except OSError as exc:
        if exc.errno == errno.EEXIST:
            raise LockHeldError(
                f"lock file {lock_path} exists; another writer is active "
                "(or crashed; remove the file to proceed)"
            ) from exc
        raise
    try:
        os.write(fd, f"{os.getpid()}\n".encode("ascii"))
        os.close(fd)
        yield
    finally:
        lock_path.unlink(missing_ok=True)


def read_manifest(run_dir: Path) -> dict:
    path = Path(run_dir) / MANIFEST_NAME
    if not path.is_file():
        raise FileNotFoundError(f"no run manifest at {path}")
    with open(path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if not isinstance(manifest, dict):
        raise ValueError(f"run manifest {path} must be a JSON object")
    return manifest


def update_manifest(run_dir: Path, run_id: str, document: dict, **artifacts) -> dict:
    """Merge `artifacts` into the manifest, creating it on first write.

    The manifest is the root of the artifact tree: everything a run produced
    is either named here or named by a report that is.  It carries no
    timestamps so identical invocations rewrite identical bytes.
    """
    path = Path(run_dir) / MANIFEST_NAME
    if path.is_file():
        manifest = read_manifest(run_dir)
        if manifest.get("run_id") != run_id:
            raise ValueError(
                f"manifest at {path} belongs to run {manifest.get('run_id')!r}, "
                f"not {run_id!r}"
            )
    else:
        manifest = {
            "run_id": run_id,
            "config": document,
            "artifacts": {"log": LOG_NAME},
        }
    manifest["artifacts"].update(artifacts)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


def run_logger(run_dir: Path) -> logging.Logger:
    """Logger appending to `<run_dir>/run.log`; stdout stays summary-only."""
    logger = logging.getLogger(f"dcf.run.{Path(run_dir).resolve()}")
    logger.setLevel(logging.INFO)
    logger.propagate = False
    log_path = Path(run_dir) / LOG_NAME
    if not any(
        isinstance(h, logging.FileHandler)
        and Path(getattr(h, "baseFilename", "")) == log_path.resolve()
        for h in logger.handlers
    ):
        handler = logging.FileHandler(log_path, encoding="utf-8")
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(message)s")
        )
        logger.addHandler(handler)
    return logger
