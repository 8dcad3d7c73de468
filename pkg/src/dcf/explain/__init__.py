"""Quantitative tables, distribution profiles and heatmap exports."""

from .heatmaps import colorize, gradcam_report, overlay
from .profile import padding_profile, read_profile_csv, write_profile_csv
from .quant import QuantRow, quant_table, read_quant_csv, write_quant_csv

__all__ = [
    "QuantRow",
    "colorize",
    "gradcam_report",
    "overlay",
    "padding_profile",
    "quant_table",
    "read_profile_csv",
    "read_quant_csv",
    "write_profile_csv",
    "write_quant_csv",
]
