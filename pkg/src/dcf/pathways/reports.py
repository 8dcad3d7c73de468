"""Report files: one JSON document per search plus flat per-run CSV tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path

CSV_COLUMNS = (
    "setting",
    "run",
    "accF1_A",
    "accF2_A",
    "balanced_A",
    "accF1_B",
    "accF2_B",
    "balanced_B",
)

PSA_REPORT = "psa_report.json"
PSA_CSV = "psa_runs.csv"
TPS_REPORT = "tps_report.json"


def tps_csv_name(architecture: str) -> str:
    return f"tps_runs_{architecture}.csv"


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return path


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return payload


def write_runs_csv(path, records) -> Path:
    """Flat per-run table; floats keep full round-trip precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.setting,
                    r.run,
                    r.acc_f1_a,
                    r.acc_f2_a,
                    r.balanced_a,
                    r.acc_f1_b,
                    r.acc_f2_b,
                    r.balanced_b,
                ]
            )
    return path


def read_runs_csv(path) -> list[dict]:
    """Rows back as dicts with numeric fields parsed."""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        rows = []
        for row in reader:
            parsed = {"setting": row["setting"], "run": int(row["run"])}
            for col in CSV_COLUMNS[2:]:
                parsed[col] = float(row[col])
            rows.append(parsed)
    return rows
