"""Symmetric-hyperbolic viscoelastic (Maxwell) fluid simulator and convexity checks."""

from .eos import FENEP, NASG, Hookean, PolytropicGas
from .errors import (
    CFLCollapse, DomainError, ExtensionExceeded, Inadmissible, InadmissibleCell,
    NotSPD, ParseError, SamplingFailure, SingularF, StepTooLarge, ThermoviscoError,
    ValidationError,
)
from .params import MaterialParams

__version__ = "0.1.0"

__all__ = [
    "FENEP", "NASG", "Hookean", "PolytropicGas", "MaterialParams",
    "CFLCollapse", "DomainError", "ExtensionExceeded", "Inadmissible", "InadmissibleCell",
    "NotSPD", "ParseError", "SamplingFailure", "SingularF", "StepTooLarge",
    "ThermoviscoError", "ValidationError",
]
