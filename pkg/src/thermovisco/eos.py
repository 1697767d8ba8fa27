"""
Volumetric equations of state and elastic energy laws.

All derivatives are hand-coded closed forms; nothing here differentiates
numerically. Functions broadcast over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor
from .errors import DomainError, ExtensionExceeded, NotSPD


@dataclass(frozen=True)
class PolytropicGas:
    """Polytropic (perfect) gas, ``e = cv*theta_ref*(rho/rho_ref)**(gamma-1)*exp(eta/cv)``."""

    cv: float = 1.0
    gamma: float = 1.4
    theta_ref: float = 1.0
    rho_ref: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise DomainError("gamma must exceed 1")
        if not (self.cv > 0 and self.theta_ref > 0 and self.rho_ref > 0):
            raise DomainError("cv, theta_ref and rho_ref must be positive")

    # covolume and stiffening are zero for the perfect gas
    b = 0.0
    q = 0.0
    p_inf = 0.0

    def _check(self, rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(~(rho > 0)):
            raise DomainError("density must be positive")
        return rho

    def _log_volume_factor(self, rho):
        return (self.gamma - 1.0) * np.log(rho / self.rho_ref)

    def kinetic_energy(self, rho, eta):
        """The thermal part ``cv*theta`` of the energy (all of it here)."""
        rho = self._check(rho)
        return self.cv * self.theta_ref * np.exp(self._log_volume_factor(rho) + eta / self.cv)

    def energy(self, rho, eta):
        return self.kinetic_energy(rho, eta)

    def temperature(self, rho, eta):
        return self.kinetic_energy(rho, eta) / self.cv

    def pressure(self, rho, eta):
        rho = self._check(rho)
        return (self.gamma - 1.0) * rho * self.kinetic_energy(rho, eta)

    def sound_speed2(self, rho, eta):
        """Isentropic ``dp/drho``."""
        rho = self._check(rho)
        return self.gamma * self.pressure(rho, eta) / rho

    def entropy(self, rho, theta):
        """Specific entropy ``eta_s(rho, theta)``, the inverse of :meth:`temperature`."""
        rho = self._check(rho)
        return self.cv * (np.log(theta / self.theta_ref) - self._log_volume_factor(rho))

    def free_energy(self, rho, theta):
        """Helmholtz free energy ``psi_s(rho, theta) = e - theta*eta``."""
        return self.cv * theta - theta * self.entropy(rho, theta)

    def heat_capacity(self, rho, theta):
        """``-theta * d2psi/dtheta2``; constant for this family."""
        rho = self._check(rho)
        return np.full(np.broadcast(rho, theta).shape, self.cv)

    def dp_dtheta(self, rho, theta):
        """``dp/dtheta`` at fixed density."""
        rho = self._check(rho)
        return (self.gamma - 1.0) * rho * self.cv + 0.0 * theta


@dataclass(frozen=True)
class NASG(PolytropicGas):
    """Noble-Abel stiffened gas; reduces to :class:`PolytropicGas` at b = q = p_inf = 0."""

    b: float = 0.0
    q: float = 0.0
    p_inf: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if self.b < 0 or self.p_inf < 0:
            raise DomainError("NASG requires b >= 0 and p_inf >= 0")

    def _check(self, rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(~(rho > 0)):
            raise DomainError("density must be positive")
        if self.b > 0 and np.any(~(rho * self.b < 1.0)):
            raise DomainError("density must stay below the covolume limit 1/b")
        return rho

    def _log_volume_factor(self, rho):
        return (self.gamma - 1.0) * np.log(rho / (self.rho_ref * (1.0 - self.b * rho)))

    def energy(self, rho, eta):
        rho = self._check(rho)
        return self.kinetic_energy(rho, eta) + (1.0 / rho - self.b) * self.p_inf + self.q

    def pressure(self, rho, eta):
        rho = self._check(rho)
        ek = self.kinetic_energy(rho, eta)
        return (self.gamma - 1.0) * rho * ek / (1.0 - self.b * rho) - self.p_inf

    def sound_speed2(self, rho, eta):
        rho = self._check(rho)
        p = self.pressure(rho, eta)
        return self.gamma * (p + self.p_inf) / (rho * (1.0 - self.b * rho))

    def free_energy(self, rho, theta):
        rho = self._check(rho)
        return (self.cv * theta + (1.0 / rho - self.b) * self.p_inf + self.q
                - theta * self.entropy(rho, theta))

    def dp_dtheta(self, rho, theta):
        rho = self._check(rho)
        return (self.gamma - 1.0) * rho * self.cv / (1.0 - self.b * rho) + 0.0 * theta


@dataclass(frozen=True)
class Hookean:
    """Hookean dumbbell law with stiffness ``K(theta) = K0 + K1*theta``."""

    K0: float = 0.5
    K1: float = 0.5

    def __post_init__(self):
        if not (self.K0 > 0 and self.K1 > 0):
            raise DomainError("K0 and K1 must be positive")

    def stiffness(self, theta):
        return self.K0 + self.K1 * np.asarray(theta, dtype=float)

    def check_trace(self, trC):
        return None

    def strain_measure(self, trC):
        """Scalar strain term replacing ``tr C`` in the energy (identity here)."""
        return np.asarray(trC, dtype=float)

    def strain_slope(self, trC):
        """Derivative of :meth:`strain_measure`; multiplies K in stress and sources."""
        return np.ones_like(np.asarray(trC, dtype=float))

    def energy(self, C, theta, alpha, k_B):
        """Specific elastic free energy for full SPD ``C``."""
        trC = tensor.trace(C)
        self.check_trace(trC)
        logdet = tensor.spd_logdet(C)
        return 0.5 * alpha * (self.stiffness(theta) * self.strain_measure(trC)
                              - k_B * theta * logdet)


@dataclass(frozen=True)
class FENEP(Hookean):
    """FENE-P law; ``tr C`` is bounded above by ``b_ext**2``."""

    b_ext: float = 10.0

    def __post_init__(self):
        super().__post_init__()
        if not self.b_ext > 0:
            raise DomainError("b_ext must be positive")

    def check_trace(self, trC):
        if np.any(~(np.asarray(trC) < self.b_ext ** 2)):
            raise ExtensionExceeded("tr C reached b_ext**2")

    def strain_measure(self, trC):
        b2 = self.b_ext ** 2
        return -b2 * np.log1p(-np.asarray(trC, dtype=float) / b2)

    def strain_slope(self, trC):
        b2 = self.b_ext ** 2
        return b2 / (b2 - np.asarray(trC, dtype=float))


VolumetricEOS = PolytropicGas  # NASG is a subclass
ElasticLaw = Hookean  # FENEP is a subclass


def e_solvent(eos, rho, eta):
    return eos.energy(rho, eta)


def theta_solvent(eos, rho, eta):
    return eos.temperature(rho, eta)


def p_solvent(eos, rho, eta):
    return eos.pressure(rho, eta)


def cV_solvent(eos, rho, theta):
    return eos.heat_capacity(rho, theta)


def stiffness_K(law, theta):
    return law.stiffness(theta)


def elastic_energy(law, C, theta, alpha, k_B):
    """Specific elastic energy of ``law`` at conformation ``C`` (full 3x3)."""
    C = np.asarray(C, dtype=float)
    if not np.all(tensor.is_spd(C)):
        raise NotSPD("conformation tensor is not SPD")
    return law.energy(C, theta, alpha, k_B)
