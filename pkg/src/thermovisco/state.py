"""
Conserved state vector of the symmetric system and its derived quantities.

A conserved state is a float array whose last axis has length 24::

    0        rho
    1        rho * eta
    2:5      rho * q
    5:8      rho * v
    8:17     rho * F       (row-major, F[i, alpha])
    17:23    rho * Y       (packed 11, 12, 13, 22, 23, 33)
    23       rho * y       (y is the independent determinant variable)

Every function accepts a single state of shape ``(24,)`` or a batch of shape
``(..., 24)``. The temperature always comes from the shifted entropy argument
in which ``det C`` is replaced by ``(rho_R / rho)**2 * sqrt(y)``; the mismatch
with ``det(F Y^-1/2 F^T)`` is reported by :func:`constraint_residuals`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import tensor
from .errors import Inadmissible
from .params import MaterialParams

NCOMP = 24
RHO = 0
RHO_ETA = 1
RHO_Q = slice(2, 5)
RHO_V = slice(5, 8)
RHO_F = slice(8, 17)
RHO_Y = slice(17, 23)
RHO_DETY = 23

COMPONENT_NAMES = (
    ["rho", "rho_eta"]
    + [f"rho_q{i}" for i in range(1, 4)]
    + [f"rho_v{i}" for i in range(1, 4)]
    + [f"rho_F{i}{a}" for i in range(1, 4) for a in range(1, 4)]
    + [f"rho_Y{i}{j}" for i, j in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))]
    + ["rho_detY"]
)


class Reason(str, Enum):
    """Why a state failed the admissibility test."""

    OK = "OK"
    NON_FINITE = "NonFinite"
    NEGATIVE_DENSITY = "NegativeDensity"
    COVOLUME = "CovolumeExceeded"
    NOT_SPD = "NotSPD"
    NONPOSITIVE_DETY = "NonPositiveDetY"
    EXTENSION = "ExtensionExceeded"
    NONPOSITIVE_TEMPERATURE = "NonPositiveTemperature"


# evaluation order of the checks; the first failure is reported
_REASON_ORDER = (
    Reason.NON_FINITE,
    Reason.NEGATIVE_DENSITY,
    Reason.COVOLUME,
    Reason.NOT_SPD,
    Reason.NONPOSITIVE_DETY,
    Reason.EXTENSION,
    Reason.NONPOSITIVE_TEMPERATURE,
)


class Admissibility(NamedTuple):
    ok: bool
    reason: Reason
    index: Optional[tuple] = None


@dataclass
class ConservedState:
    """Named view of one (or a batch of) conserved state vectors."""

    rho: np.ndarray
    rho_eta: np.ndarray
    rho_q: np.ndarray
    rho_v: np.ndarray
    rho_F: np.ndarray
    rho_Y: np.ndarray
    rho_detY: np.ndarray

    @classmethod
    def from_vector(cls, u):
        u = np.asarray(u, dtype=float)
        return cls(
            rho=u[..., RHO],
            rho_eta=u[..., RHO_ETA],
            rho_q=u[..., RHO_Q],
            rho_v=u[..., RHO_V],
            rho_F=u[..., RHO_F].reshape(u.shape[:-1] + (3, 3)),
            rho_Y=u[..., RHO_Y],
            rho_detY=u[..., RHO_DETY],
        )

    def to_vector(self):
        rho = np.asarray(self.rho, dtype=float)
        u = np.empty(rho.shape + (NCOMP,))
        u[..., RHO] = rho
        u[..., RHO_ETA] = self.rho_eta
        u[..., RHO_Q] = self.rho_q
        u[..., RHO_V] = self.rho_v
        u[..., RHO_F] = np.reshape(self.rho_F, rho.shape + (9,))
        u[..., RHO_Y] = self.rho_Y
        u[..., RHO_DETY] = self.rho_detY
        return u


@dataclass
class PrimitiveView:
    """Primitive and derived quantities of a conserved state.

    Tensors are stored as full ``(..., 3, 3)`` arrays. ``B`` is ``Y^{-1/2}``,
    ``phi`` the strain measure of ``tr C`` (``tr C`` itself for the Hookean
    law) and ``K_eff = K(theta) * phi'(tr C)`` the effective stiffness.
    ``E`` and ``E_tilde`` are specific (per unit mass).
    """

    rho: np.ndarray
    eta: np.ndarray
    q: np.ndarray
    v: np.ndarray
    F: np.ndarray
    Y: np.ndarray
    y: np.ndarray
    B: np.ndarray
    Y_eigs: np.ndarray
    C: np.ndarray
    trC: np.ndarray
    phi: np.ndarray
    phi_slope: np.ndarray
    eta_tilde: np.ndarray
    theta: np.ndarray
    p: np.ndarray
    e_s: np.ndarray
    K: np.ndarray
    K_eff: np.ndarray
    E: np.ndarray
    E_tilde: np.ndarray


def _evaluate(u, mat: MaterialParams):
    """Primitive view plus per-state integer failure codes; never raises.

    Code 0 means admissible, code ``k > 0`` means ``_REASON_ORDER[k - 1]``.
    Entries of failing states are computed from placeholder values and must
    not be used.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != NCOMP:
        raise ValueError(f"state must have {NCOMP} components, got {u.shape[-1]}")
    shape = u.shape[:-1]
    codes = np.zeros(shape, dtype=np.int8)

    def flag(mask, reason):
        codes[np.asarray(mask) & (codes == 0)] = _REASON_ORDER.index(reason) + 1

    with np.errstate(all="ignore"):
        flag(~np.all(np.isfinite(u), axis=-1), Reason.NON_FINITE)
        rho = u[..., RHO]
        flag(~(rho > 0), Reason.NEGATIVE_DENSITY)
        eos = mat.eos
        if eos.b > 0:
            flag(~(rho * eos.b < 1.0), Reason.COVOLUME)
        any_bad = codes.any()
        if any_bad:
            bad = codes != 0
            rho = np.where(bad, 1.0, rho)
            u = np.where(bad[..., None], 0.0, u)
        inv_rho = 1.0 / rho

        Y = tensor.sym_to_full(u[..., RHO_Y] * inv_rho[..., None])
        if any_bad:
            Y = np.where(bad[..., None, None], tensor.IDENTITY, Y)
        lam, vec = tensor.sym_eigen(Y)
        flag(~(lam[..., -1] > tensor.spd_eps(Y)), Reason.NOT_SPD)
        if codes.any():
            bad = codes != 0
            any_bad = True
            Y = np.where(bad[..., None, None], tensor.IDENTITY, Y)
            lam = np.where(bad[..., None], 1.0, lam)
            vec = np.where(bad[..., None, None], tensor.IDENTITY, vec)
        B = tensor.from_eigen(lam, vec, lambda l: 1.0 / np.sqrt(l))

        y = u[..., RHO_DETY] * inv_rho
        flag(~(y > 0), Reason.NONPOSITIVE_DETY)

        F = u[..., RHO_F].reshape(shape + (3, 3)) * inv_rho[..., None, None]
        C = tensor.sym(F @ B @ tensor.transpose(F))
        trC = tensor.trace(C)
        law = mat.elastic
        if mat.is_fenep:
            flag(~(trC < law.b_ext ** 2), Reason.EXTENSION)
        if codes.any():
            bad = codes != 0
            y = np.where(bad, 1.0, y)
            trC = np.where(bad, 0.0, trC)
        phi = law.strain_measure(trC)
        slope = law.strain_slope(trC)

        eta = u[..., RHO_ETA] * inv_rho
        logdetC = 2.0 * np.log(mat.rho_R * inv_rho) + 0.5 * np.log(y)
        eta_t = eta + 0.5 * mat.alpha * (law.K1 * phi - mat.k_B * logdetC)
        ek = eos.cv * eos.theta_ref * np.exp(eos._log_volume_factor(rho) + eta_t / eos.cv)
        theta = ek / eos.cv
        flag(~(np.isfinite(theta) & (theta > 0)), Reason.NONPOSITIVE_TEMPERATURE)
        if codes.any():
            bad = codes != 0
            theta = np.where(bad, 1.0, theta)
            ek = np.where(bad, eos.cv, ek)
        e_s = ek + (inv_rho - eos.b) * eos.p_inf + eos.q
        p = (eos.gamma - 1.0) * rho * ek / (1.0 - eos.b * rho) - eos.p_inf

        q = u[..., RHO_Q] * inv_rho[..., None]
        v = u[..., RHO_V] * inv_rho[..., None]
        K = law.stiffness(theta)
        E = (0.5 * np.sum(v * v, axis=-1) + e_s
             + 0.5 * mat.tau0 / mat.kappa * np.sum(q * q, axis=-1)
             + 0.5 * mat.alpha * law.K0 * phi)
        E_tilde = E + 0.5 * mat.e_ref * tensor.frob2(Y)

    pv = PrimitiveView(
        rho=rho, eta=eta, q=q, v=v, F=F, Y=Y, y=y, B=B, Y_eigs=lam, C=C,
        trC=trC, phi=phi, phi_slope=slope, eta_tilde=eta_t, theta=theta, p=p,
        e_s=e_s, K=K, K_eff=K * slope, E=E, E_tilde=E_tilde,
    )
    return pv, codes


def _first_failure(codes):
    codes = np.asarray(codes)
    if not codes.any():
        return None
    flat = int(np.argmax(codes.ravel() != 0))
    reason = _REASON_ORDER[int(codes.ravel()[flat]) - 1]
    idx = tuple(int(i) for i in np.unravel_index(flat, codes.shape)) if codes.ndim else None
    return reason, idx


def admissibility_codes(u, mat: MaterialParams):
    """Per-state :class:`Reason` values (``Reason.OK`` where admissible)."""
    codes = _evaluate(u, mat)[1]
    table = np.array((Reason.OK,) + _REASON_ORDER, dtype=object)
    return np.asarray(table[codes], dtype=object)


def is_admissible(u, mat: MaterialParams) -> Admissibility:
    """Whether every state in ``u`` is admissible.

    Returns
    -------
    Admissibility
        ``(ok, reason, index)``; on failure ``reason`` and ``index`` describe the
        first offending state in C order.
    """
    fail = _first_failure(_evaluate(u, mat)[1])
    if fail is None:
        return Admissibility(True, Reason.OK, None)
    return Admissibility(False, fail[0], fail[1])


def to_primitive(u, mat: MaterialParams) -> PrimitiveView:
    """Primitive view of ``u``; raises :class:`Inadmissible` on any bad state."""
    pv, codes = _evaluate(u, mat)
    fail = _first_failure(codes)
    if fail is not None:
        raise Inadmissible(fail[0], fail[1])
    return pv


def eta_from_temperature(rho, theta, F, Y, y, mat: MaterialParams):
    """Specific entropy that yields temperature ``theta`` for the given state."""
    rho = np.asarray(rho, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if Y.shape[-1] == 6:
        Y = tensor.sym_to_full(Y)
    C = F @ tensor.spd_inv_sqrt(Y) @ tensor.transpose(F)
    phi = mat.elastic.strain_measure(tensor.trace(C))
    logdetC = 2.0 * np.log(mat.rho_R / rho) + 0.5 * np.log(y)
    return mat.eos.entropy(rho, theta) - 0.5 * mat.alpha * (mat.K1 * phi - mat.k_B * logdetC)


def from_primitive(rho, eta, q, v, F, Y, y=None, theta=None, mat=None):
    """Assemble conserved vectors from primitive fields.

    ``Y`` may be full ``(..., 3, 3)`` or packed ``(..., 6)``. When ``y`` is
    omitted it is set to the consistent value ``1/det Y``. When ``theta`` is
    given (together with ``mat``), ``eta`` is ignored and recomputed so that
    the state has that temperature.
    """
    rho = np.asarray(rho, dtype=float)
    shape = rho.shape
    F = np.broadcast_to(np.asarray(F, dtype=float), shape + (3, 3))
    Y = np.asarray(Y, dtype=float)
    Yfull = tensor.sym_to_full(Y) if Y.shape[-1] == 6 else Y
    Yfull = np.broadcast_to(Yfull, shape + (3, 3))
    if y is None:
        y = 1.0 / tensor.det(Yfull)
    if theta is not None:
        if mat is None:
            raise ValueError("mat is required when theta is given")
        eta = eta_from_temperature(rho, theta, F, Yfull, y, mat)
    u = np.empty(shape + (NCOMP,))
    u[..., RHO] = rho
    u[..., RHO_ETA] = rho * eta
    u[..., RHO_Q] = rho[..., None] * np.asarray(q, dtype=float)
    u[..., RHO_V] = rho[..., None] * np.asarray(v, dtype=float)
    u[..., RHO_F] = (rho[..., None, None] * F).reshape(shape + (9,))
    u[..., RHO_Y] = rho[..., None] * tensor.full_to_sym(Yfull)
    u[..., RHO_DETY] = rho * y
    return u


def equilibrium_state(mat: MaterialParams, rho=1.0, theta=1.0, v=(0.0, 0.0, 0.0), F=None):
    """Rest-relaxed state with ``q = 0`` and ``C = (k_B theta / K) I``."""
    F = tensor.IDENTITY if F is None else np.asarray(F, dtype=float)
    c = mat.k_B * theta / mat.stiffness(theta)
    if mat.is_fenep:
        # solve K b2 c / (b2 - 3c) = k_B theta for c
        b2 = mat.elastic.b_ext ** 2
        kt = mat.k_B * theta
        c = kt * b2 / (mat.stiffness(theta) * b2 + 3.0 * kt)
    FtF = tensor.transpose(F) @ F
    Y = FtF @ FtF / c ** 2
    return from_primitive(rho, 0.0, np.zeros(3), v, F, Y, theta=theta, mat=mat)


def total_energy(u, mat: MaterialParams):
    """Total energy density ``rho * E``."""
    pv = to_primitive(u, mat)
    return pv.rho * pv.E


def math_entropy(u, mat: MaterialParams):
    """Mathematical entropy density ``rho * E_tilde``."""
    pv = to_primitive(u, mat)
    return pv.rho * pv.E_tilde


def constraint_residuals(u, mat: MaterialParams):
    """Monitored constraint defects ``|y det Y - 1|`` and ``|rho det F - rho_R| / rho_R``."""
    u = np.asarray(u, dtype=float)
    rho = u[..., RHO]
    Y = tensor.sym_to_full(u[..., RHO_Y] / rho[..., None])
    y = u[..., RHO_DETY] / rho
    F = u[..., RHO_F].reshape(u.shape[:-1] + (3, 3)) / rho[..., None, None]
    r_det = np.abs(y * tensor.det(Y) - 1.0)
    r_rho = np.abs(rho * tensor.det(F) - mat.rho_R) / mat.rho_R
    return r_det, r_rho
