"""Utility functions and classes for UI."""

from .rich import epoch_progress, sweep_table

__all__ = [
    "epoch_progress",
    "sweep_table",
]
