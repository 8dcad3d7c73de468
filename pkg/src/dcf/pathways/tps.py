"""Training pathway search: five settings per architecture, both directions.

S1 trains on the first dataset, S4 on the second, S3 on their concatenation;
S2 fine-tunes S1's peak on the second dataset, S5 fine-tunes S4's peak on the
first.  Fine-tuning freezes all but the tail units and restarts the optimizer.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..imaging import PADDING_SCHEMES
from ..nn import ModelSpec, ModelState, evaluate, freeze, load_checkpoint, save_checkpoint
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

SETTINGS = ("S1", "S2", "S3", "S4", "S5")
DEFAULT_FREEZE_TAIL = 2

# fine-tune settings and the scratch setting whose peak they start from
_FINE_TUNE_SOURCE = {"S2": "S1", "S5": "S4"}

_ARCH_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")


@dataclass(frozen=True)
class ArchResult:
    architecture: str
    records: tuple[RunRecord, ...]
    aggregates: dict[str, SettingAggregate]
    # None when fewer than two settings ran: a pathway choice needs a comparison
    chosen_setting: str | None
    chosen_run: int | None
    chosen_checkpoint: str | None


@dataclass(frozen=True)
class TpsResult:
    scheme: str
    settings: tuple[str, ...]
    objective: str
    base_seed: int
    seeds: tuple[int, ...]
    freeze_tail: int
    scheme_overrides: dict[str, str]
    architectures: dict[str, ArchResult]
    models: dict[str, ModelSpec]
    train: TrainConfig

    def to_dict(self) -> dict:
        return {
            "config": {
                "search": "tps",
                "scheme": self.scheme,
                "settings": list(self.settings),
                "objective": self.objective,
                "base_seed": self.base_seed,
                "freeze_tail": self.freeze_tail,
                "scheme_overrides": dict(self.scheme_overrides),
                "models": {name: asdict(spec) for name, spec in self.models.items()},
                "train": asdict(self.train),
            },
            "seeds": list(self.seeds),
            "records": {
                name: [r.to_dict() for r in res.records]
                for name, res in self.architectures.items()
            },
            "aggregates": {
                name: {s: res.aggregates[s].to_dict() for s in self.settings}
                for name, res in self.architectures.items()
            },
            "chosen": {
                name: (
                    None
                    if res.chosen_setting is None
                    else {
                        "setting": res.chosen_setting,
                        "run": res.chosen_run,
                        "checkpoint": res.chosen_checkpoint,
                    }
                )
                for name, res in self.architectures.items()
            },
        }


def _fresh_optimizer(state: ModelState) -> ModelState:
    """Zero the moment estimates and step count before a fine-tune run."""
    for name in state.m:
        state.m[name] = np.zeros_like(state.m[name])
        state.v[name] = np.zeros_like(state.v[name])
    state.t = 0
    return state


def _normalize_settings(settings) -> tuple[str, ...]:
    settings = tuple(settings)
    if not settings:
        raise ValueError("at least one pathway setting is required")
    if len(set(settings)) != len(settings):
        raise ValueError(f"duplicate settings in {settings}")
    for s in settings:
        if s not in SETTINGS:
            raise ValueError(f"unknown setting {s!r}; known: {SETTINGS}")
    return tuple(s for s in SETTINGS if s in settings)


def _normalize_source(source, architectures, flag: str) -> dict[str, Path]:
    if source is None:
        return {}
    if isinstance(source, (str, Path)):
        if len(architectures) != 1:
            raise ValueError(
                f"{flag} as a single path needs exactly one architecture; "
                f"pass a mapping for {sorted(architectures)}"
            )
        return {next(iter(architectures)): Path(source)}
    return {name: Path(p) for name, p in dict(source).items()}


def run_tps(
    architectures: dict[str, ModelSpec],
    train: TrainConfig,
    splits_a: dict,
    splits_b: dict,
    scheme: str,
    out_dir,
    *,
    base_seed: int = 0,
    settings=SETTINGS,
    freeze_tail: int = DEFAULT_FREEZE_TAIL,
    objective: str = "sum",
    workers: int | None = None,
    s2_source=None,
    s5_source=None,
    scheme_overrides: dict[str, str] | None = None,
) -> TpsResult:
    """Five runs per setting and architecture, all padded with ``scheme``.

    ``scheme_overrides`` swaps the padding scheme of individual settings
    (training and evaluation alike).  ``s2_source``/``s5_source`` replace the
    in-run peak checkpoints that S2 and S5 fine-tune from (path, or mapping
    of architecture name to path); without them, S2 requires S1 in
    ``settings`` and S5 requires S4.  A single setting yields no chosen
    pathway: choosing needs at least two to compare.  Writes
    ``tps_report.json`` plus one ``tps_runs_<architecture>.csv`` per
    architecture under ``out_dir``; a failed search leaves a partial report
    carrying a ``failed`` marker and re-raises.
    """
    if not architectures:
        raise ValueError("at least one architecture is required")
    architectures = dict(architectures)
    for name, spec in architectures.items():
        if not _ARCH_NAME.match(name):
            raise ValueError(f"architecture name {name!r} is not filename-safe")
        spec.validate()
    if scheme not in PADDING_SCHEMES:
        raise ValueError(f"unknown padding scheme {scheme!r}; known: {PADDING_SCHEMES}")
    train.validate()
    settings = _normalize_settings(settings)
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    workers = resolve_workers(workers)

    scheme_overrides = dict(scheme_overrides or {})
    for setting, s in scheme_overrides.items():
        if setting not in SETTINGS:
            raise ValueError(f"scheme override names unknown setting {setting!r}")
        if s not in PADDING_SCHEMES:
            raise ValueError(f"unknown padding scheme {s!r}; known: {PADDING_SCHEMES}")
    scheme_of = {s: scheme_overrides.get(s, scheme) for s in SETTINGS}

    s2_source = _normalize_source(s2_source, architectures, "s2_source")
    s5_source = _normalize_source(s5_source, architectures, "s5_source")
    for setting, src, override in (
        ("S2", "S1", s2_source),
        ("S5", "S4", s5_source),
    ):
        if setting not in settings:
            continue
        for name in architectures:
            if src not in settings and name not in override:
                raise ValueError(
                    f"{setting} fine-tunes the {src} peak: include {src} in "
                    f"settings or pass a source checkpoint for {name!r}"
                )
    for override in (s2_source, s5_source):
        for name, path in override.items():
            if name not in architectures:
                raise ValueError(f"source override names unknown architecture {name!r}")
            if not Path(path).is_file():
                raise FileNotFoundError(f"source checkpoint not found: {path}")

    out = Path(out_dir)
    runs = range(1, RUNS_PER_SETTING + 1)
    seeds = tuple(base_seed + r for r in runs)
    train_a = tuple(splits_a["train"])
    val_a = tuple(splits_a["val"])
    train_ab = tuple(splits_a["train"]) + tuple(splits_b["train"])
    val_ab = tuple(splits_a["val"]) + tuple(splits_b["val"])
    train_b = tuple(splits_b["train"])
    val_b = tuple(splits_b["val"])
    test_a = list(splits_a["test"])
    test_b = list(splits_b["test"])

    scratch_data = {
        "S1": (train_a, val_a),
        "S3": (train_ab, val_ab),
        "S4": (train_b, val_b),
    }
    tune_data = {"S2": (train_b, val_b), "S5": (train_a, val_a)}

    records: dict[str, list[RunRecord]] = {name: [] for name in architectures}
    aggregates: dict[str, dict[str, SettingAggregate]] = {
        name: {} for name in architectures
    }

    def _partial_payload(error: str) -> dict:
        return {
            "config": {
                "search": "tps",
                "scheme": scheme,
                "settings": list(settings),
                "objective": objective,
                "base_seed": base_seed,
                "freeze_tail": freeze_tail,
                "scheme_overrides": dict(scheme_overrides),
                "models": {n: asdict(s) for n, s in architectures.items()},
                "train": asdict(train),
            },
            "seeds": list(seeds),
            "records": {n: [r.to_dict() for r in rs] for n, rs in records.items()},
            "aggregates": {
                n: {s: a.to_dict() for s, a in aggs.items()}
                for n, aggs in aggregates.items()
            },
            "chosen": None,
            "failed": {"error": error},
        }

    try:
        checkpoints: dict[tuple[str, str, int], str] = {}

        def _run_batch(batch_keys, jobs):
            states = map_jobs(jobs, workers)
            for (name, setting, r), state in zip(batch_keys, states):
                rel = f"tps/{name}/{setting}_run{r}.ckpt"
                save_checkpoint(state, out / rel)
                checkpoints[(name, setting, r)] = rel
                f1_a, f2_a, bal_a = evaluate(state, test_a, scheme_of[setting])
                f1_b, f2_b, bal_b = evaluate(state, test_b, scheme_of[setting])
                rec = RunRecord(
                    setting=setting,
                    run=r,
                    seed=base_seed + r,
                    acc_f1_a=f1_a,
                    acc_f2_a=f2_a,
                    balanced_a=bal_a,
                    acc_f1_b=f1_b,
                    acc_f2_b=f2_b,
                    balanced_b=bal_b,
                    checkpoint=rel,
                )
                rec.validate()
                records[name].append(rec)

        # scratch settings for every architecture in one pool batch
        batch_keys = [
            (name, setting, r)
            for name in architectures
            for setting in settings
            if setting in scratch_data
            for r in runs
        ]
        _run_batch(
            batch_keys,
            [
                TrainJob(
                    architectures[name],
                    scratch_data[setting][0],
                    scratch_data[setting][1],
                    train,
                    scheme_of[setting],
                    base_seed + r,
                )
                for name, setting, r in batch_keys
            ],
        )

        # fine-tune settings start from the peak of their source setting
        tune_keys = []
        tune_jobs = []
        for name in architectures:
            for setting in settings:
                if setting not in _FINE_TUNE_SOURCE:
                    continue
                src_setting = _FINE_TUNE_SOURCE[setting]
                override = (s2_source if setting == "S2" else s5_source).get(name)
                if override is not None:
                    src_path = override
                else:
                    src_records = [
                        rec for rec in records[name] if rec.setting == src_setting
                    ]
                    peak = aggregate(src_records).peak_run
                    src_path = out / checkpoints[(name, src_setting, peak)]
                base = load_checkpoint(src_path)
                if base.spec != architectures[name]:
                    raise ValueError(
                        f"source checkpoint {src_path} was built for a different "
                        f"architecture than {name!r}"
                    )
                _fresh_optimizer(freeze(base, freeze_tail))
                for r in runs:
                    tune_keys.append((name, setting, r))
                    tune_jobs.append(
                        TrainJob(
                            base,
                            tune_data[setting][0],
                            tune_data[setting][1],
                            train,
                            scheme_of[setting],
                            base_seed + r,
                        )
                    )
        _run_batch(tune_keys, tune_jobs)

        arch_results: dict[str, ArchResult] = {}
        for name in architectures:
            ordered = [
                rec
                for setting in settings
                for rec in records[name]
                if rec.setting == setting
            ]
            records[name] = ordered
            for setting in settings:
                aggregates[name][setting] = aggregate(
                    [rec for rec in ordered if rec.setting == setting]
                )
            if len(settings) >= 2:
                chosen_setting = choose_best(
                    (aggregates[name][s] for s in settings), objective=objective
                )
                chosen_run = aggregates[name][chosen_setting].peak_run
                chosen_ckpt = checkpoints[(name, chosen_setting, chosen_run)]
            else:
                chosen_setting = chosen_run = chosen_ckpt = None
            arch_results[name] = ArchResult(
                architecture=name,
                records=tuple(ordered),
                aggregates=aggregates[name],
                chosen_setting=chosen_setting,
                chosen_run=chosen_run,
                chosen_checkpoint=chosen_ckpt,
            )

        result = TpsResult(
            scheme=scheme,
            settings=settings,
            objective=objective,
            base_seed=base_seed,
            seeds=seeds,
            freeze_tail=freeze_tail,
            scheme_overrides=scheme_overrides,
            architectures=arch_results,
            models=architectures,
            train=train,
        )
    except Exception as exc:
        reports.write_json(
            out / reports.TPS_REPORT,
            _partial_payload(f"{type(exc).__name__}: {exc}"),
        )
        raise

    reports.write_json(out / reports.TPS_REPORT, result.to_dict())
    for name, res in result.architectures.items():
        reports.write_runs_csv(out / reports.tps_csv_name(name), res.records)
    return result
