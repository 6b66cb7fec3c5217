"""Exception hierarchy shared by all gkdvlab modules."""

from __future__ import annotations


class GkdvError(Exception):
    """Base class for all errors raised by gkdvlab."""


class ConfigurationError(GkdvError):
    """Invalid parameters, mismatched shapes, or out-of-range settings."""


class ConfigValidationError(ConfigurationError):
    """Config text failed validation; carries the full list of problems."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class IntegrityError(GkdvError):
    """Internal consistency violation, e.g. a field that lost Hermitian symmetry."""


class AnalyticityExceededError(GkdvError):
    """An exponential weight sigma exceeds what the field's Fourier decay supports.

    The weighted norm is effectively infinite; any value computed on the
    truncated grid would be resolution-dependent garbage.
    """


class ResourceLimitError(GkdvError):
    """A computation would exceed a configured memory/size cap."""


class InsufficientResolutionError(GkdvError):
    """Too few usable Fourier modes for the requested estimate."""


class ProbeInvalidError(GkdvError):
    """A probe ensemble degenerated (e.g. all ratios vanished)."""


class BlowUpError(GkdvError):
    """Solution left the representable range (NaN/Inf in coefficients).

    Carries the last finite state and whatever diagnostics were collected
    before the failure so callers can inspect the approach to blow-up.
    """

    def __init__(self, message: str, state=None, records=None, states=None, table=None):
        super().__init__(message)
        self.state = state
        self.records = list(records) if records is not None else []
        self.states = list(states) if states is not None else []
        self.table = table
