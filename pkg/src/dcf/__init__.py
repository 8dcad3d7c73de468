"""Dual-carriageway toolkit: padding selection and training-pathway selection."""

__version__ = "0.1.0"
