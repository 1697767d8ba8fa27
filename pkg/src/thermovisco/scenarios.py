"""
Initial-condition presets.

Every preset uses the slab deformation ``F = diag(rho_R / rho, 1, 1)`` so
that ``rho det F = rho_R`` holds exactly and the first row of ``rho F`` is
spatially constant, which keeps the one-dimensional Piola involution
satisfied by the initial data. The conformation tensor starts at
``strain`` times its equilibrium value.

uniform
    Spatially constant state.
smooth-wave
    ``rho = rho0 (1 + A sin(2 pi k xi))`` at uniform temperature and
    background velocity; used for conservation and refinement studies.
riemann
    Piecewise-constant density and temperature split at ``xi = split``.
heat-pulse
    Uniform density with a compactly supported ``cos^2`` temperature bump;
    used for the finite-speed propagation check.
"""

from __future__ import annotations

import numpy as np

from . import state as st
from . import tensor, variants
from .solver import Grid1D, MaxwellModel


def build_model(config):
    """Solver model (Maxwell or K-BKZ adapter) described by ``config``."""
    mat = config.material()
    if config.model == "kbkz":
        return variants.KBKZModel(config.kbkz_params(), mat)
    return MaxwellModel(mat)


def equilibrium_scale(mat, K, theta):
    """Scalar ``c`` with ``C = c I`` at equilibrium for stiffness ``K``."""
    kt = mat.k_B * np.asarray(theta, dtype=float)
    if mat.is_fenep:
        # K b2 c / (b2 - 3 c) = k_B theta
        b2 = mat.elastic.b_ext ** 2
        return kt * b2 / (K * b2 + 3.0 * kt)
    return kt / K


def _metric_for(G, c):
    """``Y`` with ``G Y^{-1/2} G^T = c I``, i.e. ``Y = (G^T G)^2 / c^2``."""
    GtG = tensor.transpose(G) @ G
    return GtG @ GtG / (np.asarray(c)[..., None, None] ** 2)


def make_states(model, rho, theta, v=(0.0, 0.0, 0.0), q=(0.0, 0.0, 0.0), F=None, strain=1.0):
    """Conserved states at temperature ``theta`` with ``C = strain * C_eq``.

    Arguments broadcast over a leading cell axis.
    """
    rho = np.asarray(rho, dtype=float)
    theta = np.broadcast_to(np.asarray(theta, dtype=float), rho.shape)
    F = slab_F(rho, model.mat.rho_R) if F is None else np.broadcast_to(F, rho.shape + (3, 3))
    v = np.broadcast_to(np.asarray(v, dtype=float), rho.shape + (3,))
    q = np.broadcast_to(np.asarray(q, dtype=float), rho.shape + (3,))
    mat = model.mat
    if isinstance(model, variants.KBKZModel):
        K1, K2 = model.params.stiffness(theta)
        cof = tensor.cofactor(F)
        Y1 = _metric_for(F, strain * equilibrium_scale(mat, K1, theta))
        Y2 = _metric_for(cof, strain * equilibrium_scale(mat, K2, theta))
        return variants.from_primitive(rho, 0.0, q, v, F, Y1, Y2, cof=cof, theta=theta,
                                       params=model.params, mat=mat)
    c = strain * equilibrium_scale(mat, mat.stiffness(theta), theta)
    return st.from_primitive(rho, 0.0, q, v, F, _metric_for(F, c), theta=theta, mat=mat)


def slab_F(rho, rho_R):
    """``diag(rho_R / rho, 1, 1)``."""
    rho = np.asarray(rho, dtype=float)
    F = np.broadcast_to(np.eye(3), rho.shape + (3, 3)).copy()
    F[..., 0, 0] = rho_R / rho
    return F


def homogeneous_state(config, model):
    """Single state from the background keys of ``[initial]``."""
    return make_states(model, np.asarray(config.rho), config.theta, config.velocity,
                       config.heat_flux, strain=config.strain)


def profiles(config, xi, perturbed=True):
    """Density and temperature profiles of the configured preset at ``xi in [0, 1)``."""
    rho = np.full(xi.shape, config.rho)
    theta = np.full(xi.shape, config.theta)
    preset = config.preset
    if preset == "smooth-wave" and perturbed:
        rho = config.rho * (1.0 + config.amplitude * np.sin(2 * np.pi * config.wavenumber * xi))
    elif preset == "riemann" and perturbed:
        left = xi < config.split
        rho = np.where(left, config.rho_left, config.rho_right)
        theta = np.where(left, config.theta_left, config.theta_right)
    elif preset == "heat-pulse" and perturbed:
        d = (xi - config.pulse_center) / config.pulse_width
        bump = np.where(np.abs(d) < 1.0, np.cos(0.5 * np.pi * d) ** 2, 0.0)
        theta = config.theta + config.pulse_amplitude * bump
    return rho, theta


def initial_grid(config, model, perturbed=True):
    """Initial :class:`Grid1D`; ``perturbed=False`` gives the preset's background."""
    grid = Grid1D(np.zeros((config.N, model.ncomp)), config.x0, config.x1, config.boundary)
    xi = (grid.x - config.x0) / (config.x1 - config.x0)
    rho, theta = profiles(config, xi, perturbed)
    u = make_states(model, rho, theta, config.velocity, config.heat_flux, strain=config.strain)
    return grid.with_u(u)
