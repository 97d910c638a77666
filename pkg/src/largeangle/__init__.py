"""
Large-Angle Excitation Module
"""

from .models import AngleOptimizationResult, ExcitationResult, OptimizerSettings
from .optimizer import (
    ExcitationEvaluator,
    excitation_scan,
    final_excitation,
    optimize_excitation,
    reference_kinetic_energy,
)

__all__ = [
    "ExcitationResult",
    "AngleOptimizationResult",
    "OptimizerSettings",
    "ExcitationEvaluator",
    "final_excitation",
    "excitation_scan",
    "optimize_excitation",
    "reference_kinetic_energy",
]
