"""Padding scheme search: shared backbones scored under every candidate."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

from ..imaging import PADDING_SCHEMES
from ..nn import ModelSpec, evaluate, save_checkpoint
from ..nn.spec import TrainConfig
from . import reports
from .records import (
    OBJECTIVES,
    RUNS_PER_SETTING,
    RunRecord,
    SettingAggregate,
    aggregate,
    choose_best,
)
from .runner import TrainJob, map_jobs, resolve_workers

# backbones are trained once with this scheme unless train_per_scheme is set
SHARED_TRAIN_SCHEME = "zero"


@dataclass(frozen=True)
class PsaResult:
    schemes: tuple[str, ...]
    train_per_scheme: bool
    objective: str
    base_seed: int
    seeds: tuple[int, ...]
    records: tuple[RunRecord, ...]
    aggregates: dict[str, SettingAggregate]
    chosen_scheme: str
    chosen_run: int
    chosen_checkpoint: str
    model: ModelSpec
    train: TrainConfig

    def to_dict(self) -> dict:
        return {
            "config": {
                "search": "psa",
                "schemes": list(self.schemes),
                "train_per_scheme": self.train_per_scheme,
                "objective": self.objective,
                "base_seed": self.base_seed,
                "model": asdict(self.model),
                "train": asdict(self.train),
            },
            "seeds": list(self.seeds),
            "records": [r.to_dict() for r in self.records],
            "aggregates": {s: self.aggregates[s].to_dict() for s in self.schemes},
            "chosen": {
                "scheme": self.chosen_scheme,
                "run": self.chosen_run,
                "checkpoint": self.chosen_checkpoint,
            },
        }


def _validate_schemes(schemes) -> tuple[str, ...]:
    schemes = tuple(schemes)
    if not schemes:
        raise ValueError("at least one padding scheme is required")
    if len(set(schemes)) != len(schemes):
        raise ValueError(f"duplicate schemes in {schemes}")
    for s in schemes:
        if s not in PADDING_SCHEMES:
            raise ValueError(f"unknown padding scheme {s!r}; known: {PADDING_SCHEMES}")
    return schemes


def run_psa(
    model: ModelSpec,
    train: TrainConfig,
    splits_a: dict,
    splits_b: dict,
    out_dir,
    *,
    base_seed: int = 0,
    schemes=PADDING_SCHEMES,
    train_per_scheme: bool = False,
    objective: str = "sum",
    workers: int | None = None,
) -> PsaResult:
    """Train five backbones, score each candidate scheme on both testing sets.

    By default the backbones are trained with zero padding and the schemes
    differ only at evaluation time; ``train_per_scheme`` instead trains five
    dedicated backbones per scheme.  Writes ``psa_report.json`` and
    ``psa_runs.csv`` under ``out_dir``; a failed search leaves a partial
    report carrying a ``failed`` marker and re-raises.
    """
    model.validate()
    train.validate()
    schemes = _validate_schemes(schemes)
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    workers = resolve_workers(workers)
    out = Path(out_dir)
    (out / "psa").mkdir(parents=True, exist_ok=True)

    runs = range(1, RUNS_PER_SETTING + 1)
    seeds = tuple(base_seed + r for r in runs)
    train_a = tuple(splits_a["train"])
    val_a = tuple(splits_a["val"])
    test_a = list(splits_a["test"])
    test_b = list(splits_b["test"])

    records: list[RunRecord] = []
    aggregates: dict[str, SettingAggregate] = {}

    def _partial_payload(error: str) -> dict:
        return {
            "config": {
                "search": "psa",
                "schemes": list(schemes),
                "train_per_scheme": train_per_scheme,
                "objective": objective,
                "base_seed": base_seed,
                "model": asdict(model),
                "train": asdict(train),
            },
            "seeds": list(seeds),
            "records": [r.to_dict() for r in records],
            "aggregates": {s: a.to_dict() for s, a in aggregates.items()},
            "chosen": None,
            "failed": {"error": error},
        }

    try:
        if train_per_scheme:
            jobs = [
                TrainJob(model, train_a, val_a, train, scheme, base_seed + r)
                for scheme in schemes
                for r in runs
            ]
        else:
            jobs = [
                TrainJob(model, train_a, val_a, train, SHARED_TRAIN_SCHEME, base_seed + r)
                for r in runs
            ]
        states = map_jobs(jobs, workers)

        checkpoints: dict[tuple[str, int], str] = {}
        for job, state in zip(jobs, states):
            tag = job.scheme if train_per_scheme else "backbone"
            rel = f"psa/{tag}_run{job.seed - base_seed}.ckpt"
            save_checkpoint(state, out / rel)
            checkpoints[(job.scheme, job.seed - base_seed)] = rel

        by_key = {
            (job.scheme, job.seed - base_seed): state
            for job, state in zip(jobs, states)
        }
        for scheme in schemes:
            for r in runs:
                key = (scheme if train_per_scheme else SHARED_TRAIN_SCHEME, r)
                state = by_key[key]
                f1_a, f2_a, bal_a = evaluate(state, test_a, scheme)
                f1_b, f2_b, bal_b = evaluate(state, test_b, scheme)
                rec = RunRecord(
                    setting=scheme,
                    run=r,
                    seed=base_seed + r,
                    acc_f1_a=f1_a,
                    acc_f2_a=f2_a,
                    balanced_a=bal_a,
                    acc_f1_b=f1_b,
                    acc_f2_b=f2_b,
                    balanced_b=bal_b,
                    checkpoint=checkpoints[key],
                )
                rec.validate()
                records.append(rec)
            aggregates[scheme] = aggregate(records[-RUNS_PER_SETTING:])

        chosen_scheme = choose_best(
            (aggregates[s] for s in schemes), objective=objective
        )
        chosen_run = aggregates[chosen_scheme].peak_run
        chosen_key = (
            chosen_scheme if train_per_scheme else SHARED_TRAIN_SCHEME,
            chosen_run,
        )
        result = PsaResult(
            schemes=schemes,
            train_per_scheme=train_per_scheme,
            objective=objective,
            base_seed=base_seed,
            seeds=seeds,
            records=tuple(records),
            aggregates=aggregates,
            chosen_scheme=chosen_scheme,
            chosen_run=chosen_run,
            chosen_checkpoint=checkpoints[chosen_key],
            model=model,
            train=train,
        )
    except Exception as exc:
        reports.write_json(
            out / reports.PSA_REPORT,
            _partial_payload(f"{type(exc).__name__}: {exc}"),
        )
        raise

    reports.write_json(out / reports.PSA_REPORT, result.to_dict())
    reports.write_runs_csv(out / reports.PSA_CSV, result.records)
    return result
