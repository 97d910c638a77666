"""
Crane Shortcut Toolkit

Shortcut-to-adiabaticity and minimal-consumption transport protocols for an
overhead crane, with power and energy-consumption analysis.
"""

__version__ = "0.1.0"
__author__ = "STA Crane Team"
