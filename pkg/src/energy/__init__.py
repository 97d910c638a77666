"""
Energy Consumption Module
"""

from .calculator import (
    consumption,
    dominant_term,
    friction_dissipation,
    load_power,
    load_power_exact,
    peak_power_bounds,
    power_terms,
    power_trace,
    total_power_exact,
    total_power_harmonic,
)
from .models import EnergyReport, PeakPowerBounds, PowerTrace

__all__ = [
    "PowerTrace",
    "EnergyReport",
    "PeakPowerBounds",
    "total_power_harmonic",
    "total_power_exact",
    "load_power",
    "load_power_exact",
    "power_trace",
    "power_terms",
    "dominant_term",
    "friction_dissipation",
    "consumption",
    "peak_power_bounds",
]
