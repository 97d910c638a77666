"""
Shortcut Design Module
"""

from .designer import design_alpha, design_protocol, trolley_from_alpha
from .models import CoefficientBasis, PolynomialAnsatz

__all__ = [
    "design_alpha",
    "trolley_from_alpha",
    "design_protocol",
    "PolynomialAnsatz",
    "CoefficientBasis",
]
