"""Exception taxonomy shared across the package.

Plain ``ValueError`` is reserved for malformed call arguments (wrong shapes,
negative rates, out-of-range indices). The classes below mark conditions with
a defined meaning for callers, in particular the command line front end which
maps them to exit codes.
"""


class SimulatorError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SimulatorError):
    """Invalid or unsupported run configuration (CLI exit code 1)."""


class DomainError(SimulatorError):
    """Inputs leave the physical validity domain of a formula (exit code 2)."""


class IntegrationError(SimulatorError):
    """Time integration violated a state-sanity guard (exit code 3)."""

    def __init__(self, message, time_ns=None, phase=None):
        parts = [message]
        if phase is not None:
            parts.append(f"phase={phase}")
        if time_ns is not None:
            parts.append(f"t={time_ns:.6g} ns")
        super().__init__(" | ".join(parts))
        self.message = message
        self.time_ns = time_ns
        self.phase = phase
