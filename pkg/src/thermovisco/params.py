"""Material parameters shared by every constitutive evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .eos import FENEP, Hookean, PolytropicGas
from .errors import DomainError


@dataclass(frozen=True)
class MaterialParams:
    """Constitutive constants of the viscoelastic model.

    Parameters
    ----------
    eos : PolytropicGas or NASG
        Volumetric (solvent) equation of state.
    elastic : Hookean or FENEP
        Elastic law; carries the stiffness coefficients ``K0`` and ``K1``.
    alpha, k_B : float
        Polymer number density per unit mass and Boltzmann-like constant.
    zeta : float
        Drag coefficient of the dumbbells.
    tau0, kappa : float
        Heat-flux relaxation time and thermal conductivity.
    e_ref : float
        Reference energy weighting ``|Y|^2`` in the mathematical entropy.
    rho_R : float
        Reference-configuration density.
    body_force : array_like, shape (3,)
        Specific body force.
    zeta_fn : callable, optional
        Temperature-dependent drag ``zeta(theta)``; overrides ``zeta`` when set.
    """

    eos: PolytropicGas = field(default_factory=PolytropicGas)
    elastic: Hookean = field(default_factory=Hookean)
    alpha: float = 1.0
    k_B: float = 1.0
    zeta: float = 4.0
    tau0: float = 1.0
    kappa: float = 1.0
    e_ref: float = 1.0
    rho_R: float = 1.0
    body_force: tuple = (0.0, 0.0, 0.0)
    zeta_fn: Optional[Callable] = None

    def __post_init__(self):
        for name in ("alpha", "k_B", "zeta", "tau0", "kappa", "rho_R"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.e_ref < 0:
            raise DomainError("e_ref must be non-negative")
        if len(self.body_force) != 3:
            raise DomainError("body_force must have three components")
        object.__setattr__(self, "body_force", tuple(float(x) for x in self.body_force))

    @property
    def K0(self):
        return self.elastic.K0

    @property
    def K1(self):
        return self.elastic.K1

    @property
    def is_fenep(self):
        return isinstance(self.elastic, FENEP)

    def drag(self, theta):
        """Drag coefficient at temperature ``theta``."""
        if self.zeta_fn is None:
            return np.full(np.shape(theta), self.zeta)
        return np.asarray(self.zeta_fn(theta), dtype=float)

    def stiffness(self, theta):
        return self.elastic.stiffness(theta)
