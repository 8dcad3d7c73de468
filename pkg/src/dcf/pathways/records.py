"""Per-run result records, five-run aggregates and selection rules."""

from __future__ import annotations

import math
from dataclasses import dataclass

RUNS_PER_SETTING = 5
OBJECTIVES = ("sum", "min_sum")

# a balanced accuracy must equal the mean of its two per-label accuracies
_BALANCE_TOL = 1e-9


@dataclass(frozen=True)
class RunRecord:
    """Scores of one trained model on both testing sets.

    ``setting`` names the padding scheme (scheme search) or the training
    pathway ``S1``..``S5`` (pathway search).  Accuracies are percentages.
    ``checkpoint`` points at the saved model, relative to the report root.
    """

    setting: str
    run: int
    seed: int
    acc_f1_a: float
    acc_f2_a: float
    balanced_a: float
    acc_f1_b: float
    acc_f2_b: float
    balanced_b: float
    checkpoint: str | None = None

    def validate(self) -> None:
        if not self.setting:
            raise ValueError("record setting must be a non-empty string")
        if not 1 <= self.run <= RUNS_PER_SETTING:
            raise ValueError(f"run must be in 1..{RUNS_PER_SETTING}, got {self.run}")
        for name, acc, f1, f2 in (
            ("balanced_a", self.balanced_a, self.acc_f1_a, self.acc_f2_a),
            ("balanced_b", self.balanced_b, self.acc_f1_b, self.acc_f2_b),
        ):
            mean = (f1 + f2) / 2.0
            if abs(acc - mean) > _BALANCE_TOL:
                raise ValueError(
                    f"{name}={acc!r} is not the mean of its per-label "
                    f"accuracies ({mean!r})"
                )

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "run": self.run,
            "seed": self.seed,
            "accF1_A": self.acc_f1_a,
            "accF2_A": self.acc_f2_a,
            "balanced_A": self.balanced_a,
            "accF1_B": self.acc_f1_b,
            "accF2_B": self.acc_f2_b,
            "balanced_B": self.balanced_b,
            "checkpoint": self.checkpoint,
        }

    @staticmethod
    def from_dict(d: dict) -> "RunRecord":
        return RunRecord(
            setting=d["setting"],
            run=int(d["run"]),
            seed=int(d["seed"]),
            acc_f1_a=float(d["accF1_A"]),
            acc_f2_a=float(d["accF2_A"]),
            balanced_a=float(d["balanced_A"]),
            acc_f1_b=float(d["accF1_B"]),
            acc_f2_b=float(d["accF2_B"]),
            balanced_b=float(d["balanced_B"]),
            checkpoint=d.get("checkpoint"),
        )


@dataclass(frozen=True)
class SettingAggregate:
    """Mean and sample standard deviation over the five runs of one setting."""

    setting: str
    mean_a: float
    std_a: float
    mean_b: float
    std_b: float
    peak_run: int

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "mean_A": self.mean_a,
            "std_A": self.std_a,
            "mean_B": self.mean_b,
            "std_B": self.std_b,
            "peak_run": self.peak_run,
        }

    @staticmethod
    def from_dict(d: dict) -> "SettingAggregate":
        return SettingAggregate(
            setting=d["setting"],
            mean_a=float(d["mean_A"]),
            std_a=float(d["std_A"]),
            mean_b=float(d["mean_B"]),
            std_b=float(d["std_B"]),
            peak_run=int(d["peak_run"]),
        )


def select_peak(records) -> int:
    """Run index of the best record: largest balanced_A + balanced_B.

    Ties fall to the larger min(balanced_A, balanced_B); remaining ties to
    the smaller run index.
    """
    records = list(records)
    if not records:
        raise ValueError("select_peak needs at least one record")
    best = records[0]
    for rec in records[1:]:
        key = (rec.balanced_a + rec.balanced_b, min(rec.balanced_a, rec.balanced_b), -rec.run)
        best_key = (
            best.balanced_a + best.balanced_b,
            min(best.balanced_a, best.balanced_b),
            -best.run,
        )
        if key > best_key:
            best = rec
    return best.run


def aggregate(records) -> SettingAggregate:
    """Fold exactly five runs of one setting into mean +- sample std."""
    records = list(records)
    if len(records) != RUNS_PER_SETTING:
        raise ValueError(
            f"aggregate needs exactly {RUNS_PER_SETTING} records, got {len(records)}"
        )
    settings = {r.setting for r in records}
    if len(settings) != 1:
        raise ValueError(f"records mix settings: {sorted(settings)}")
    runs = sorted(r.run for r in records)
    if runs != list(range(1, RUNS_PER_SETTING + 1)):
        raise ValueError(f"expected runs 1..{RUNS_PER_SETTING}, got {runs}")

    def _mean_std(values):
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
        return mean, math.sqrt(var)

    mean_a, std_a = _mean_std([r.balanced_a for r in records])
    mean_b, std_b = _mean_std([r.balanced_b for r in records])
    return SettingAggregate(
        setting=records[0].setting,
        mean_a=mean_a,
        std_a=std_a,
        mean_b=mean_b,
        std_b=std_b,
        peak_run=select_peak(records),
    )


def leveraged_score(agg: SettingAggregate) -> float:
    """Joint score of one setting across both testing sets: mean_A + mean_B."""
    return agg.mean_a + agg.mean_b


def choose_best(aggregates, objective: str = "sum") -> str:
    """Setting with the best leveraged score.

    ``objective`` is ``sum`` (mean_A + mean_B) or ``min_sum`` (largest
    min(mean_A, mean_B), sum as tie-break).  Ties keep the earliest setting
    in iteration order.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    aggs = list(aggregates)
    if not aggs:
        raise ValueError("choose_best needs at least one aggregate")

    def key(agg: SettingAggregate):
        if objective == "sum":
            return (agg.mean_a + agg.mean_b,)
        return (min(agg.mean_a, agg.mean_b), agg.mean_a + agg.mean_b)

    best = aggs[0]
    for agg in aggs[1:]:
        if key(agg) > key(best):
            best = agg
    return best.setting
