"""Frozen five-run score tables used to pin the selection rules.

Each run row is (accF1_A, accF2_A, balanced_A, accF1_B, accF2_B, balanced_B)
in percent; runs are numbered 1..5 in row order.  Each summary entry is
(mean_A, std_A, mean_B, std_B, marked_peak) where the marked peak is the run
flagged as best in the reference corpus.  The zero-padding scheme block is
the one case whose marked peak disagrees with the sum rule (run 5 marked,
run 2 computed); it is pinned separately in the tests.
"""

from dcf.pathways import RunRecord

SCHEME_RUNS = {
    "zero": (
        (93.16, 96.02, 94.59, 65.91, 80.73, 73.32),
        (92.58, 97.55, 95.06, 71.36, 76.74, 74.05),
        (95.25, 85.63, 90.44, 82.73, 50.17, 66.45),
        (94.17, 95.72, 94.94, 77.27, 65.61, 71.44),
        (95.03, 95.41, 95.22, 74.09, 73.26, 73.68),
    ),
    "rgb-mean": (
        (94.17, 96.02, 95.09, 73.18, 73.59, 73.39),
        (94.46, 93.88, 94.17, 75.00, 73.75, 74.38),
        (94.10, 96.64, 95.37, 77.73, 73.59, 75.66),
        (94.31, 96.02, 95.16, 76.82, 71.93, 74.38),
        (94.46, 96.64, 95.55, 74.55, 75.75, 75.15),
    ),
    "lab-mean": (
        (95.10, 96.02, 95.56, 75.00, 68.44, 71.72),
        (94.74, 96.02, 95.38, 70.91, 73.92, 72.41),
        (94.67, 97.86, 96.27, 75.00, 70.10, 72.55),
        (93.38, 98.17, 95.78, 75.00, 68.44, 71.72),
        (94.24, 95.72, 94.98, 72.73, 76.58, 74.66),
    ),
    "white": (
        (93.09, 96.94, 95.02, 75.00, 77.41, 76.20),
        (94.74, 95.41, 95.07, 75.00, 79.73, 77.37),
        (94.82, 95.11, 94.97, 73.18, 76.58, 74.88),
        (93.81, 95.72, 94.77, 75.00, 78.24, 76.62),
        (94.10, 95.11, 94.60, 70.45, 77.24, 73.84),
    ),
    "grey": (
        (94.67, 96.64, 95.66, 79.55, 74.42, 76.98),
        (93.74, 95.41, 94.57, 75.91, 78.90, 77.41),
        (93.81, 96.02, 94.91, 74.55, 81.89, 78.22),
        (94.74, 95.41, 95.07, 75.00, 75.75, 75.38),
        (94.60, 96.02, 95.31, 74.09, 80.90, 77.50),
    ),
    "reflection": (
        (95.10, 99.08, 97.09, 75.91, 83.72, 79.81),
        (95.18, 98.17, 96.68, 77.73, 80.23, 78.98),
        (95.03, 98.17, 96.60, 78.18, 85.55, 81.87),
        (94.82, 97.55, 96.19, 78.18, 79.90, 79.04),
        (95.10, 97.55, 96.32, 77.73, 81.40, 79.56),
    ),
}

SCHEME_SUMMARY = {
    "zero": (94.05, 2.03, 71.79, 3.15, 5),
    "rgb-mean": (95.07, 0.53, 74.59, 0.86, 3),
    "lab-mean": (95.59, 0.48, 72.61, 1.21, 5),
    "white": (94.89, 0.20, 75.78, 1.41, 2),
    "grey": (95.10, 0.41, 77.10, 1.06, 3),
    "reflection": (96.58, 0.35, 79.85, 1.18, 3),
}

BEST_SCHEME = "reflection"

PATHWAY_RUNS = {
    "resnet18": {
        "S1": (
            (94.60, 98.78, 96.69, 78.64, 86.21, 82.42),
            (94.53, 99.08, 96.81, 81.36, 83.06, 82.21),
            (94.67, 99.08, 96.88, 76.36, 86.88, 81.62),
            (94.53, 99.08, 96.81, 79.55, 82.56, 81.06),
            (93.95, 99.69, 96.82, 77.27, 86.21, 81.74),
        ),
        "S2": (
            (95.61, 96.33, 95.97, 84.09, 99.34, 91.72),
            (95.03, 97.25, 96.14, 87.27, 98.17, 92.72),
            (94.74, 98.47, 96.60, 84.55, 98.84, 91.69),
            (95.25, 98.17, 96.71, 85.00, 98.67, 91.84),
            (94.82, 98.17, 96.50, 90.91, 96.35, 93.63),
        ),
        "S3": (
            (91.79, 96.64, 94.22, 82.73, 99.00, 90.87),
            (91.79, 96.02, 93.91, 84.09, 99.17, 91.63),
            (92.01, 96.33, 94.17, 84.55, 98.84, 91.69),
            (91.79, 99.39, 95.59, 83.64, 98.84, 91.24),
            (91.29, 95.41, 93.35, 85.00, 99.00, 92.00),
        ),
        "S4": (
            (90.78, 86.54, 88.66, 80.91, 98.50, 89.70),
            (91.14, 88.69, 89.91, 84.55, 98.34, 91.44),
            (92.51, 85.02, 88.77, 80.91, 98.34, 89.62),
            (90.06, 80.12, 85.09, 82.27, 98.67, 90.47),
            (90.06, 85.32, 87.69, 81.82, 97.18, 89.50),
        ),
        "S5": (
            (95.10, 98.47, 96.78, 79.09, 91.03, 85.06),
            (94.17, 97.55, 95.86, 81.36, 91.36, 86.36),
            (95.10, 98.17, 96.63, 77.27, 93.69, 85.48),
            (92.73, 97.55, 95.14, 78.64, 95.51, 87.08),
            (94.74, 97.55, 96.14, 79.55, 92.86, 86.20),
        ),
    },
    "resnet34": {
        "S1": (
            (95.10, 99.08, 97.09, 75.91, 83.72, 79.81),
            (95.18, 98.17, 96.68, 77.73, 80.23, 78.98),
            (95.03, 98.17, 96.60, 78.18, 85.55, 81.87),
            (94.82, 97.55, 96.19, 78.18, 79.90, 79.04),
            (95.10, 97.55, 96.32, 77.73, 81.40, 79.56),
        ),
        "S2": (
            (95.25, 98.47, 96.86, 85.91, 99.17, 92.54),
            (95.46, 97.25, 96.35, 90.00, 95.85, 92.92),
            (95.46, 97.86, 96.66, 87.27, 97.84, 92.56),
            (95.46, 96.33, 95.89, 88.64, 97.18, 92.91),
            (95.46, 98.17, 96.81, 87.27, 98.84, 93.06),
        ),
        "S3": (
            (94.02, 96.64, 95.33, 85.00, 98.67, 91.84),
            (94.53, 96.64, 95.59, 84.09, 99.17, 91.63),
            (93.38, 93.88, 93.63, 83.64, 98.17, 90.91),
            (92.80, 97.86, 95.33, 84.09, 98.67, 91.38),
            (94.96, 91.74, 93.35, 86.36, 98.84, 92.60),
        ),
        "S4": (
            (87.90, 94.19, 91.05, 84.09, 98.17, 91.13),
            (89.27, 93.27, 91.27, 82.27, 98.67, 90.47),
            (92.30, 92.97, 92.63, 83.64, 98.67, 91.16),
            (89.63, 90.52, 90.07, 85.45, 97.67, 91.56),
            (90.42, 88.99, 89.70, 85.45, 97.51, 91.48),
        ),
        "S5": (
            (94.67, 99.08, 96.88, 80.00, 96.18, 88.09),
            (94.96, 98.78, 96.87, 80.00, 97.18, 88.59),
            (95.03, 98.47, 96.75, 81.36, 97.18, 89.27),
            (95.10, 98.47, 96.78, 79.09, 97.51, 88.30),
            (94.74, 98.78, 96.76, 80.45, 98.34, 89.40),
        ),
    },
    "inception_v3": {
        "S1": (
            (94.82, 97.86, 96.34, 77.27, 87.38, 82.32),
            (94.89, 99.69, 97.29, 80.00, 89.37, 84.69),
            (94.38, 97.55, 95.97, 77.73, 89.87, 83.80),
            (93.45, 96.02, 94.73, 79.09, 89.20, 84.15),
            (94.89, 97.86, 96.38, 76.36, 87.04, 81.70),
        ),
        "S2": (
            (95.82, 97.55, 96.69, 86.82, 98.67, 92.75),
            (95.03, 97.86, 96.44, 88.64, 97.67, 93.16),
            (95.54, 98.17, 96.86, 90.91, 95.85, 93.38),
            (95.32, 97.55, 96.44, 88.64, 98.84, 93.74),
            (95.75, 99.08, 97.41, 87.73, 97.34, 92.53),
        ),
        "S3": (
            (95.39, 94.80, 95.09, 84.55, 99.00, 91.78),
            (95.25, 96.94, 96.09, 86.36, 98.50, 92.43),
            (94.10, 98.78, 96.44, 85.45, 98.50, 91.97),
            (94.89, 96.02, 95.45, 84.55, 99.17, 91.86),
            (94.38, 99.08, 96.73, 84.55, 98.17, 91.36),
        ),
        "S4": (
            (93.81, 83.49, 88.65, 84.09, 98.17, 91.13),
            (85.17, 89.60, 87.38, 85.00, 97.18, 91.09),
            (92.01, 85.02, 88.52, 83.64, 98.67, 91.16),
            (90.64, 87.46, 89.05, 81.36, 98.01, 89.69),
            (87.69, 92.05, 89.87, 84.55, 98.34, 91.44),
        ),
        "S5": (
            (94.96, 99.08, 97.02, 84.09, 96.51, 90.30),
            (94.67, 99.69, 97.18, 78.64, 96.51, 87.58),
            (94.74, 98.47, 96.60, 82.27, 94.02, 88.14),
            (94.82, 99.69, 97.25, 81.82, 96.84, 89.33),
            (95.39, 98.17, 96.78, 83.64, 95.85, 89.75),
        ),
    },
}

PATHWAY_SUMMARY = {
    "resnet18": {
        "S1": (96.80, 0.07, 81.81, 0.53, 1),
        "S2": (96.38, 0.32, 92.32, 0.85, 5),
        "S3": (94.25, 0.83, 91.49, 0.44, 4),
        "S4": (88.02, 1.82, 90.15, 0.82, 2),
        "S5": (96.11, 0.66, 86.04, 0.79, 5),
    },
    "resnet34": {
        "S1": (96.58, 0.35, 79.85, 1.18, 3),
        "S2": (96.51, 0.40, 92.80, 0.23, 5),
        "S3": (94.65, 1.07, 91.67, 0.62, 2),
        "S4": (90.94, 1.15, 91.16, 0.43, 3),
        "S5": (96.81, 0.06, 88.73, 0.58, 5),
    },
    "inception_v3": {
        "S1": (96.14, 0.93, 83.33, 1.27, 2),
        "S2": (96.77, 0.40, 93.11, 0.48, 3),
        "S3": (95.96, 0.68, 91.88, 0.38, 2),
        "S4": (88.69, 0.90, 90.90, 0.69, 5),
        "S5": (96.97, 0.27, 89.02, 1.13, 1),
    },
}

BEST_PATHWAY = {"resnet18": "S2", "resnet34": "S2", "inception_v3": "S2"}

# leveraged scores implied by the rounded summary means
PATHWAY_SCORES = {
    "resnet18": {"S1": 178.61, "S2": 188.70, "S3": 185.74, "S4": 178.17, "S5": 182.15},
    "resnet34": {"S1": 176.43, "S2": 189.31, "S3": 186.32, "S4": 182.10, "S5": 185.54},
    "inception_v3": {"S1": 179.47, "S2": 189.88, "S3": 187.84, "S4": 179.59, "S5": 185.99},
}

SCHEME_SCORES = {
    "zero": 165.84,
    "rgb-mean": 169.66,
    "lab-mean": 168.20,
    "white": 170.67,
    "grey": 172.20,
    "reflection": 176.43,
}


def build_records(setting: str, rows) -> list[RunRecord]:
    """Rows to RunRecords; run and seed follow the 1..5 row order."""
    return [
        RunRecord(
            setting=setting,
            run=i + 1,
            seed=i + 1,
            acc_f1_a=row[0],
            acc_f2_a=row[1],
            balanced_a=row[2],
            acc_f1_b=row[3],
            acc_f2_b=row[4],
            balanced_b=row[5],
        )
        for i, row in enumerate(rows)
    ]
