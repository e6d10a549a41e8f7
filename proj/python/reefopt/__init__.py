"""Coral reef optimization with substrate layers."""

from ._core import (
    BuildingSpec,
    ConfigError,
    antenna_fitness,
    bsop_fitness,
    deterministic_schedule,
    evaluate,
    invoiced_power,
    natural_frequencies,
    run,
    schedule_value,
    tmd_fitness,
)

__all__ = [
    "BuildingSpec",
    "ConfigError",
    "antenna_fitness",
    "bsop_fitness",
    "deterministic_schedule",
    "evaluate",
    "invoiced_power",
    "natural_frequencies",
    "run",
    "schedule_value",
    "tmd_fitness",
]
