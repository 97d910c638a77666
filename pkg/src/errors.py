"""
Exception hierarchy for the crane shortcut toolkit

PhysicsError subclasses signal a configuration outside the supported physical
regime (CLI exit code 3); ConfigError signals an unreadable or invalid scenario
(CLI exit code 2).
"""


class StaCraneError(Exception):
    """Base class for all library errors"""
    pass


class PhysicsError(StaCraneError):
    """Physical or numerical regime error"""
    pass


class ModelValidityError(PhysicsError):
    """Swing angle reached the rope-taut limit |theta| >= pi/2"""
    pass


class IntegrationAccuracyError(PhysicsError):
    """Integrator step count below the accuracy contract"""
    pass


class DegenerateDurationError(PhysicsError):
    """Process duration at a zero of the optimal-protocol denominator"""
    pass


class DesignError(PhysicsError):
    """Auxiliary trajectory design failed (singular or inconsistent system)"""
    pass


class EtaDomainError(PhysicsError):
    """Braking parameter eta outside [-1, 1]"""
    pass


class ConfigError(StaCraneError):
    """Scenario file could not be parsed or validated"""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")
