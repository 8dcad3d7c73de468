"""Training-job fan-out: sequential by default, process pool on request."""

from __future__ import annotations

import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..nn import ModelSpec, ModelState, train_run
from ..nn.spec import TrainConfig

# children must not oversubscribe cores; set before spawn so BLAS loads capped
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else DCF_THREADS, else 1."""
    if workers is None:
        raw = os.environ.get("DCF_THREADS", "1")
        try:
            workers = int(raw)
        except ValueError as exc:
            raise ValueError(f"DCF_THREADS must be an integer, got {raw!r}") from exc
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


@dataclass(frozen=True)
class TrainJob:
    """One training run: from scratch (ModelSpec) or fine-tuning (ModelState)."""

    init: ModelSpec | ModelState
    train_items: tuple
    val_items: tuple
    cfg: TrainConfig
    scheme: str
    seed: int


def execute_job(job: TrainJob) -> ModelState:
    state, _ = train_run(
        job.init, list(job.train_items), list(job.val_items), job.cfg,
        job.scheme, seed=job.seed,
    )
    return state


def map_jobs(jobs, workers: int) -> list[ModelState]:
    """Run jobs, preserving order. workers > 1 uses spawned processes."""
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        return [execute_job(j) for j in jobs]
    saved = {k: os.environ.get(k) for k in _THREAD_VARS}
    for k in _THREAD_VARS:
        os.environ[k] = "1"
    try:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(
            max_workers=min(workers, len(jobs)), mp_context=ctx
        ) as pool:
            return list(pool.map(execute_job, jobs))
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v
