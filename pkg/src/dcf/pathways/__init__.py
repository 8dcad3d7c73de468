"""Dual-direction search: padding scheme first, then training pathway."""

from .psa import SHARED_TRAIN_SCHEME, PsaResult, run_psa
from .records import (
    OBJECTIVES,
    RUNS_PER_SETTING,
    RunRecord,
    SettingAggregate,
    aggregate,
    choose_best,
    leveraged_score,
    select_peak,
)
from .reports import (
    CSV_COLUMNS,
    PSA_CSV,
    PSA_REPORT,
    TPS_REPORT,
    read_json,
    read_runs_csv,
    tps_csv_name,
    write_json,
    write_runs_csv,
)
from .runner import TrainJob, execute_job, map_jobs, resolve_workers
from .tps import DEFAULT_FREEZE_TAIL, SETTINGS, ArchResult, TpsResult, run_tps

__all__ = [
    "ArchResult",
    "CSV_COLUMNS",
    "DEFAULT_FREEZE_TAIL",
    "OBJECTIVES",
    "PSA_CSV",
    "PSA_REPORT",
    "PsaResult",
    "RUNS_PER_SETTING",
    "RunRecord",
    "SETTINGS",
    "SHARED_TRAIN_SCHEME",
    "SettingAggregate",
    "TPS_REPORT",
    "TpsResult",
    "TrainJob",
    "aggregate",
    "choose_best",
    "execute_job",
    "leveraged_score",
    "map_jobs",
    "read_json",
    "read_runs_csv",
    "resolve_workers",
    "run_psa",
    "run_tps",
    "select_peak",
    "tps_csv_name",
    "write_json",
    "write_runs_csv",
]
