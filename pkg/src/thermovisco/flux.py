"""
Physical fluxes of the symmetric system, numerical Jacobians, wave speeds and
the Godunov-Mock symmetrizer check.

Directions ``j`` are 1-based (``j = 1`` is the x-direction).
"""

from __future__ import annotations

import numpy as np

from . import closure, fd, tensor
from . import state as st
from .errors import StepTooLarge
from .params import MaterialParams

FD_REL = 1e-6
POWER_ITERATIONS = 20
SAFETY = 1.2


def _axis(j):
    if j not in (1, 2, 3):
        raise ValueError("direction j must be 1, 2 or 3")
    return j - 1


def physical_flux(u, mat: MaterialParams, j=1, pv: st.PrimitiveView = None):
    """Flux ``f^j(u)`` with the same component layout as ``u``."""
    d = _axis(j)
    if pv is None:
        pv = st.to_primitive(u, mat)
    rho = pv.rho
    vj = pv.v[..., d]
    rvj = rho * vj
    T = closure.cauchy_stress(pv, mat)
    out = np.empty(np.shape(rho) + (st.NCOMP,))
    out[..., st.RHO] = rvj
    out[..., st.RHO_ETA] = rvj * pv.eta + pv.q[..., d] / pv.theta
    out[..., st.RHO_Q] = rvj[..., None] * pv.q
    out[..., st.RHO_Q.start + d] += mat.kappa / mat.tau0 * np.log(pv.theta)
    out[..., st.RHO_V] = rvj[..., None] * pv.v - T[..., :, d]
    # rho (F_ia v_j - v_i F_ja)
    FF = rvj[..., None, None] * pv.F - rho[..., None, None] * pv.v[..., :, None] * pv.F[..., None, d, :]
    out[..., st.RHO_F] = FF.reshape(np.shape(rho) + (9,))
    out[..., st.RHO_Y] = rvj[..., None] * tensor.full_to_sym(pv.Y)
    out[..., st.RHO_DETY] = rvj * pv.y
    return out


def entropy_flux(u, mat: MaterialParams, j=1, pv: st.PrimitiveView = None):
    """Flux of the mathematical entropy, ``rho E~ v_j - (T^T v)_j + q_j``."""
    d = _axis(j)
    if pv is None:
        pv = st.to_primitive(u, mat)
    T = closure.cauchy_stress(pv, mat)
    Tv = np.einsum("...ij,...i->...j", T, pv.v)
    return pv.rho * pv.E_tilde * pv.v[..., d] - Tv[..., d] + pv.q[..., d]


def numerical_jacobian(u, mat: MaterialParams, j=1, fd_rel=FD_REL, richardson=False):
    """Central-difference flux Jacobian ``A^j = df^j/du``, shape ``(..., 24, 24)``.

    Raises
    ------
    Inadmissible
        If ``u`` itself is inadmissible.
    StepTooLarge
        If a perturbed state is inadmissible.
    """
    st.to_primitive(u, mat)
    return fd.jacobian(lambda w: physical_flux(w, mat, j), u, rel=fd_rel, richardson=richardson)


def entropy_hessian(u, mat: MaterialParams, rel=1e-4, richardson=True):
    """FD Hessian of ``rho E~`` with respect to the conserved variables."""
    st.to_primitive(u, mat)
    return fd.hessian(lambda w: st.math_entropy(w, mat), u, rel=rel, richardson=richardson)


def zero_flux_components(j=1):
    """Indices of ``rho F_{j alpha}``, whose flux in direction ``j`` vanishes identically.

    These carry the Piola involution ``div(rho F^T) = 0``; the symmetric form
    of the system holds only modulo that constraint, so the reduced
    symmetrizer check leaves them out.
    """
    d = _axis(j)
    return [st.RHO_F.start + 3 * d + a for a in range(3)]


def symmetrizer_check(u, mat: MaterialParams, j=1, H=None, reduced=False):
    """Godunov-Mock check of the entropy Hessian against the flux Jacobian.

    Parameters
    ----------
    reduced : bool
        Restrict ``H A`` to the components outside :func:`zero_flux_components`.

    Returns
    -------
    min_eig_H : ndarray
        Smallest eigenvalue of the symmetrized FD Hessian.
    asym_rel : ndarray
        ``||H A - (H A)^T||_F / ||H A||_F``.
    """
    if H is None:
        H = entropy_hessian(u, mat)
    A = numerical_jacobian(u, mat, j, richardson=True)
    keep = None
    if reduced:
        keep = np.setdiff1d(np.arange(st.NCOMP), zero_flux_components(j))
    return _symmetry_measures(H, A, keep)


def _symmetry_measures(H, A, keep=None):
    """``(min eig of sym(H), ||HA - (HA)^T|| / ||HA||)``, optionally on the ``keep`` block."""
    Hs = 0.5 * (H + np.swapaxes(H, -1, -2))
    min_eig = np.linalg.eigvalsh(Hs)[..., 0]
    HA = H @ A
    if keep is not None:
        HA = HA[..., keep, :][..., :, keep]
    asym = np.linalg.norm(HA - np.swapaxes(HA, -1, -2), axis=(-2, -1))
    return min_eig, asym / np.linalg.norm(HA, axis=(-2, -1))


def spectral_radius(A, iterations=POWER_ITERATIONS, seed=0):
    """Power-iteration estimate of the spectral radius of a batch of matrices.

    Iterates on ``A @ A`` so that eigenvalue pairs ``+-lambda`` (common for
    hyperbolic systems) do not stall the iteration. Every matrix starts from
    the same seeded vector, so the estimate depends only on the matrix and not
    on its position in the batch.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    A2 = A @ A
    x0 = np.random.default_rng(seed).standard_normal(n)
    x = np.broadcast_to(x0 / np.linalg.norm(x0), A.shape[:-2] + (n,))
    est = np.zeros(A.shape[:-2])
    for _ in range(iterations):
        y = np.einsum("...ij,...j->...i", A2, x)
        est = np.linalg.norm(y, axis=-1)
        x = y / np.where(est > 0, est, 1.0)[..., None]
    return np.sqrt(est)


def analytic_speed_bound(u, mat: MaterialParams, j=1, pv=None):
    """Cheap fallback bound ``|v_j| + sqrt(c^2 + 3 alpha K tr C + kappa/(tau0 rho theta))``."""
    d = _axis(j)
    if pv is None:
        pv = st.to_primitive(u, mat)
    c2 = mat.eos.sound_speed2(pv.rho, pv.eta_tilde)
    elastic = 3.0 * mat.alpha * pv.K_eff * pv.trC
    thermal = mat.kappa / (mat.tau0 * pv.rho * np.min(pv.theta))
    return np.abs(pv.v[..., d]) + np.sqrt(c2 + elastic + thermal)


def power_wave_speed(flux_fn, u, fd_rel=FD_REL):
    """``SAFETY`` times the power-iteration spectral radius of the FD Jacobian of ``flux_fn``.

    The Jacobian uses forward differences; their ``O(fd_rel)`` error is far
    inside the safety margin.
    """
    A = fd.jacobian(flux_fn, u, rel=fd_rel, forward=True)
    return SAFETY * spectral_radius(A)


def cell_wave_speed(u, mat: MaterialParams, j=1):
    """Per-state upper bound of the spectral radius of ``A^j``.

    Falls back to :func:`analytic_speed_bound` when a perturbed state leaves
    the admissible set or the iteration does not produce a finite value.
    """
    pv = st.to_primitive(u, mat)
    try:
        s = power_wave_speed(lambda w: physical_flux(w, mat, j), u)
        if np.all(np.isfinite(s)):
            return s
    except StepTooLarge:
        pass
    return SAFETY * analytic_speed_bound(u, mat, j, pv=pv)


def max_wave_speed(uL, uR, mat: MaterialParams, j=1):
    """Interface wave-speed bound ``max(s(uL), s(uR))``."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    s = cell_wave_speed(np.stack([uL, uR]), mat, j)
    return np.maximum(s[0], s[1])
