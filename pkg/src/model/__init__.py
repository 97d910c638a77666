"""
Crane Dynamics Module
"""

from .dynamics import (
    exact_rhs,
    harmonic_rhs,
    invariant_I,
    load_energy,
    moving_frame_hamiltonian,
    required_force,
)
from .models import (
    CraneParams,
    DynamicsModel,
    LoadState,
    PolynomialPath,
    ProtocolKind,
    SimTrace,
    TransportTask,
    TrolleyProtocol,
)
from .simulator import DEFAULT_STEPS, MIN_STEPS, CraneSimulator

__all__ = [
    "CraneParams",
    "TransportTask",
    "LoadState",
    "TrolleyProtocol",
    "PolynomialPath",
    "ProtocolKind",
    "DynamicsModel",
    "SimTrace",
    "CraneSimulator",
    "DEFAULT_STEPS",
    "MIN_STEPS",
    "exact_rhs",
    "required_force",
    "harmonic_rhs",
    "load_energy",
    "invariant_I",
    "moving_frame_hamiltonian",
]
