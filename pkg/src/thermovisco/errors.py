"""Exception types raised across the package."""

from __future__ import annotations


class ThermoviscoError(Exception):
    """Base class for all package errors."""


class DomainError(ThermoviscoError, ValueError):
    """Argument outside the admissible domain of a thermodynamic function."""


class NotSPD(ThermoviscoError, ValueError):
    """A matrix that must be symmetric positive-definite is not."""


class ExtensionExceeded(ThermoviscoError, ValueError):
    """FENE-P conformation trace reached the maximum extension."""


class SingularF(ThermoviscoError, ValueError):
    """Deformation gradient (or its cofactor) is numerically singular."""


class Inadmissible(ThermoviscoError, ValueError):
    """A conserved state lies outside the admissible set.

    ``reason`` is one of the codes in :class:`thermovisco.state.Reason`;
    ``index`` locates the first offending entry of a batch when known.
    """

    def __init__(self, reason, index=None, message=None):
        self.reason = reason
        self.index = index
        text = message or f"inadmissible state ({reason})"
        if index is not None:
            text += f" at index {index}"
        super().__init__(text)


class StepTooLarge(ThermoviscoError):
    """A finite-difference perturbation left the admissible set."""


class InadmissibleCell(Inadmissible):
    """A grid cell became inadmissible during time stepping."""


class CFLCollapse(ThermoviscoError):
    """The stable time step fell below the collapse threshold."""


class SamplingFailure(ThermoviscoError):
    """The admissible-state sampler rejected too many draws."""


class ParseError(ThermoviscoError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ValidationError(ThermoviscoError):
    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")
