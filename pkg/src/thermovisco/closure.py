"""
Constitutive closure: Cauchy stress, entropy production and relaxation sources.

All functions take a :class:`~thermovisco.state.PrimitiveView` (batched or
not) and return arrays with matching leading axes. For the FENE-P law the
stiffness ``K(theta)`` is replaced everywhere by ``K_eff = K * phi'(tr C)``.
"""

from __future__ import annotations

import numpy as np

from . import state as st
from . import tensor
from .errors import SingularF
from .params import MaterialParams

SINGULAR_F_TOL = 1e-14


def _I_like(x):
    return np.broadcast_to(tensor.IDENTITY, np.shape(x) + (3, 3))


def cauchy_stress(pv: st.PrimitiveView, mat: MaterialParams):
    """``T = -p I + alpha rho (K_eff C - k_B theta I)`` as a full symmetric matrix."""
    I = _I_like(pv.rho)
    S = mat.alpha * pv.rho[..., None, None] * (
        pv.K_eff[..., None, None] * pv.C - (mat.k_B * pv.theta)[..., None, None] * I)
    return tensor.sym(S - pv.p[..., None, None] * I)


def extra_stress(pv: st.PrimitiveView, mat: MaterialParams):
    return cauchy_stress(pv, mat) + pv.p[..., None, None] * _I_like(pv.rho)


def entropy_production(pv: st.PrimitiveView, mat: MaterialParams):
    """Entropy production ``Sigma >= 0`` in its Frobenius-square form."""
    heat = np.sum(pv.q * pv.q, axis=-1) / (mat.kappa * pv.theta ** 2)
    lam, vec = tensor.sym_eigen(pv.C)
    lam = np.maximum(lam, np.finfo(float).tiny)
    s = np.sqrt(lam)
    # eigenvalues of K C^{1/2} - k_B theta C^{-1/2}
    mu = pv.K_eff[..., None] * s - (mat.k_B * pv.theta)[..., None] / s
    zeta = mat.drag(pv.theta)
    visco = 2.0 * mat.alpha * pv.rho / (zeta * pv.theta) * np.sum(mu * mu, axis=-1)
    return heat + visco


def _relax_parts(pv: st.PrimitiveView):
    detF = tensor.det(pv.F)
    if np.any(~(np.abs(detF) >= SINGULAR_F_TOL)):
        raise SingularF("|det F| below tolerance")
    Finv = tensor.inv(pv.F)
    M = Finv @ tensor.transpose(Finv)
    MB = M @ pv.B
    # MB + BM, symmetric since M and B are
    return MB + tensor.transpose(MB)


def relax_source_Y(pv: st.PrimitiveView, mat: MaterialParams):
    """Specific source ``f`` of ``Y`` (full symmetric matrix)."""
    P = _relax_parts(pv)
    zeta = mat.drag(pv.theta)[..., None, None]
    kt = (mat.k_B * pv.theta)[..., None, None]
    f = 8.0 * pv.K_eff[..., None, None] / zeta * pv.Y - 4.0 * kt / zeta * (pv.Y @ P @ pv.Y)
    return tensor.sym(f)


def relax_source_detY(pv: st.PrimitiveView, mat: MaterialParams):
    """Specific source ``h`` of the determinant variable ``y``."""
    P = _relax_parts(pv)
    zeta = mat.drag(pv.theta)
    tr = mat.k_B * pv.theta * tensor.trace(P @ pv.Y) - 6.0 * pv.K_eff
    return 4.0 / zeta * pv.y * tr


def relax_source_q(pv: st.PrimitiveView, mat: MaterialParams):
    """Specific source of the heat flux, ``-q / (tau0 theta)``."""
    return -pv.q / (mat.tau0 * pv.theta)[..., None]


def nonlinear_relax_time(G, Y_eigs, theta, zeta, k_B):
    """Time scale of the cubic ``Y (M B + B M) Y`` term of a strain family.

    Linearizing ``(8 k_B theta / zeta) M Y^{3/2}`` gives the rate
    ``12 k_B theta lambda_max(M) sqrt(lambda_max(Y)) / zeta`` with
    ``M = G^{-1} G^{-T}``. Far from equilibrium this is much shorter than
    ``zeta / (4 K)``; at equilibrium it is three times shorter.
    """
    lam_min_GtG = tensor.sym_eigvals(tensor.transpose(G) @ G)[..., -1]
    rate = 12.0 * k_B * theta * np.sqrt(Y_eigs[..., 0]) / (zeta * lam_min_GtG)
    return 1.0 / rate


def relaxation_time(pv: st.PrimitiveView, mat: MaterialParams):
    """Per-state relaxation time used to size RK4 sub-steps.

    The inverse of the summed rates of the linear elastic term, the heat-flux
    damping and the cubic term, i.e. a bound on the source's Lipschitz rate.
    """
    zeta = mat.drag(pv.theta)
    rate = (4.0 * pv.K_eff / zeta + 1.0 / (mat.tau0 * pv.theta)
            + 1.0 / nonlinear_relax_time(pv.F, pv.Y_eigs, pv.theta, zeta, mat.k_B))
    return 1.0 / rate


def full_source(u, mat: MaterialParams, pv: st.PrimitiveView = None):
    """Right-hand side of the pointwise relaxation ODE, same layout as ``u``."""
    if pv is None:
        pv = st.to_primitive(u, mat)
    rho = pv.rho
    out = np.zeros(np.shape(rho) + (st.NCOMP,))
    out[..., st.RHO_ETA] = entropy_production(pv, mat)
    out[..., st.RHO_Q] = relax_source_q(pv, mat)
    out[..., st.RHO_V] = rho[..., None] * np.asarray(mat.body_force)
    out[..., st.RHO_Y] = rho[..., None] * tensor.full_to_sym(relax_source_Y(pv, mat))
    out[..., st.RHO_DETY] = rho * relax_source_detY(pv, mat)
    return out


def temperature_rhs_diagnostic(pv: st.PrimitiveView, grad_theta, div_v, mat: MaterialParams,
                               vel_grad=None):
    """``rho c_V dtheta/dt + div q`` from the closure, as a cross-check.

    Parameters
    ----------
    pv : PrimitiveView
    grad_theta : array_like, shape (..., 3)
    div_v : array_like
        Velocity divergence.
    mat : MaterialParams
    vel_grad : array_like, shape (..., 3, 3), optional
        Velocity gradient ``L``. When given, the elastic stress-power term
        ``alpha rho theta K1 phi' C : D`` is included; it vanishes for
        homogeneous states.

    Notes
    -----
    Derived from the energy balance with the solvent energy depending on
    ``(rho, theta)`` only, so the elastic relaxation term carries ``K0 phi'``
    and the heat-flux term ``|q|^2 / (kappa theta)``.
    """
    theta = pv.theta
    dp_dtheta = mat.eos.dp_dtheta(pv.rho, theta)
    grad_theta = np.asarray(grad_theta, dtype=float)
    out = -theta * (dp_dtheta + mat.alpha * pv.rho * mat.k_B) * np.asarray(div_v, dtype=float)
    out = out + np.sum(pv.q * grad_theta, axis=-1) / theta
    out = out + np.sum(pv.q * pv.q, axis=-1) / (mat.kappa * theta)
    zeta = mat.drag(theta)
    out = out + (2.0 * mat.alpha * pv.rho / zeta * mat.K0 * pv.phi_slope
                 * (pv.K_eff * pv.trC - 3.0 * mat.k_B * theta))
    if vel_grad is not None:
        D = tensor.sym(np.asarray(vel_grad, dtype=float))
        out = out + (mat.alpha * pv.rho * theta * mat.K1 * pv.phi_slope
                     * np.sum(pv.C * D, axis=(-2, -1)))
    return out
