"""
K-BKZ-type variant with two strain measures and an evolved ``F^{-1}`` carrier.

The conserved state has 40 components::

    0        rho
    1        rho * eta
    2:5      rho * q
    5:8      rho * v
    8:17     rho * F              (row-major F[i, alpha])
    17:26    W = rho * (Cof F)^T  (row alpha, column i); W = rho_R F^{-1}
    26:32    rho * Y1             (packed)
    32:38    rho * Y2             (packed)
    38       rho * y1
    39       rho * y2

The first strain family uses ``C1 = F Y1^{-1/2} F^T`` and the second
``C2 = Cof F  Y2^{-1/2} (Cof F)^T`` with ``Cof F = (W / rho)^T``. The carrier
``W`` obeys ``d_t W[a, i] + d_i (W[a, j] v_j) = 0``, so in direction ``j`` its
flux feeds only the components with spatial index ``i = j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import closure, fd, flux, tensor
from . import state as st
from .errors import DomainError, Inadmissible, SingularF
from .params import MaterialParams

NCOMP = 40
RHO = 0
RHO_ETA = 1
RHO_Q = slice(2, 5)
RHO_V = slice(5, 8)
RHO_F = slice(8, 17)
W = slice(17, 26)
RHO_Y1 = slice(26, 32)
RHO_Y2 = slice(32, 38)
RHO_DETY1 = 38
RHO_DETY2 = 39

COMPONENT_NAMES = (
    st.COMPONENT_NAMES[:17]
    + [f"W{a}{i}" for a in range(1, 4) for i in range(1, 4)]
    + [f"rho_Y1_{i}{j}" for i, j in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))]
    + [f"rho_Y2_{i}{j}" for i, j in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))]
    + ["rho_detY1", "rho_detY2"]
)


@dataclass(frozen=True)
class KBKZParams:
    """Affine stiffness laws ``K_i(theta) = K0_i + K1_i theta`` of the two families."""

    K0_1: float = 0.5
    K1_1: float = 0.5
    K0_2: float = 0.5
    K1_2: float = 0.5

    def __post_init__(self):
        if not all(x > 0 for x in (self.K0_1, self.K1_1, self.K0_2, self.K1_2)):
            raise DomainError("all K-BKZ stiffness coefficients must be positive")

    def stiffness(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.K0_1 + self.K1_1 * theta, self.K0_2 + self.K1_2 * theta


@dataclass
class ConservedStateKBKZ:
    """Named view of one (or a batch of) 40-component K-BKZ states."""

    rho: np.ndarray
    rho_eta: np.ndarray
    rho_q: np.ndarray
    rho_v: np.ndarray
    rho_F: np.ndarray
    rho_cofFT: np.ndarray
    rho_Y1: np.ndarray
    rho_Y2: np.ndarray
    rho_detY1: np.ndarray
    rho_detY2: np.ndarray

    @classmethod
    def from_vector(cls, u):
        u = np.asarray(u, dtype=float)
        m = u.shape[:-1] + (3, 3)
        return cls(u[..., RHO], u[..., RHO_ETA], u[..., RHO_Q], u[..., RHO_V],
                   u[..., RHO_F].reshape(m), u[..., W].reshape(m), u[..., RHO_Y1],
                   u[..., RHO_Y2], u[..., RHO_DETY1], u[..., RHO_DETY2])

    def to_vector(self):
        rho = np.asarray(self.rho, dtype=float)
        u = np.empty(rho.shape + (NCOMP,))
        u[..., RHO] = rho
        u[..., RHO_ETA] = self.rho_eta
        u[..., RHO_Q] = self.rho_q
        u[..., RHO_V] = self.rho_v
        u[..., RHO_F] = np.reshape(self.rho_F, rho.shape + (9,))
        u[..., W] = np.reshape(self.rho_cofFT, rho.shape + (9,))
        u[..., RHO_Y1] = self.rho_Y1
        u[..., RHO_Y2] = self.rho_Y2
        u[..., RHO_DETY1] = self.rho_detY1
        u[..., RHO_DETY2] = self.rho_detY2
        return u


@dataclass
class PrimitiveKBKZ:
    rho: np.ndarray
    eta: np.ndarray
    q: np.ndarray
    v: np.ndarray
    F: np.ndarray
    Cof: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    Y1_eigs: np.ndarray
    Y2_eigs: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    trC1: np.ndarray
    trC2: np.ndarray
    eta_tilde: np.ndarray
    theta: np.ndarray
    p: np.ndarray
    e_s: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    E: np.ndarray
    E_tilde: np.ndarray


_REASONS = (
    st.Reason.NON_FINITE, st.Reason.NEGATIVE_DENSITY, st.Reason.COVOLUME,
    st.Reason.NOT_SPD, st.Reason.NONPOSITIVE_DETY, st.Reason.NONPOSITIVE_TEMPERATURE,
)


def _evaluate(u, params: KBKZParams, mat: MaterialParams):
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != NCOMP:
        raise ValueError(f"K-BKZ state must have {NCOMP} components, got {u.shape[-1]}")
    shape = u.shape[:-1]
    codes = np.zeros(shape, dtype=np.int8)

    def flag(mask, reason):
        codes[np.asarray(mask) & (codes == 0)] = _REASONS.index(reason) + 1

    eos = mat.eos
    with np.errstate(all="ignore"):
        flag(~np.all(np.isfinite(u), axis=-1), st.Reason.NON_FINITE)
        rho = u[..., RHO]
        flag(~(rho > 0), st.Reason.NEGATIVE_DENSITY)
        if eos.b > 0:
            flag(~(rho * eos.b < 1.0), st.Reason.COVOLUME)
        bad = codes != 0
        rho = np.where(bad, 1.0, rho)
        u = np.where(bad[..., None], 0.0, u)
        inv_rho = 1.0 / rho

        Ys, lams, vecs = [], [], []
        for sl in (RHO_Y1, RHO_Y2):
            Y = tensor.sym_to_full(u[..., sl] * inv_rho[..., None])
            Y = np.where(bad[..., None, None], tensor.IDENTITY, Y)
            lam, vec = tensor.sym_eigen(Y)
            flag(~(lam[..., -1] > tensor.spd_eps(Y)), st.Reason.NOT_SPD)
            Ys.append(Y)
            lams.append(lam)
            vecs.append(vec)
        bad = codes != 0
        Ys = [np.where(bad[..., None, None], tensor.IDENTITY, Y) for Y in Ys]
        lams = [np.where(bad[..., None], 1.0, lam) for lam in lams]
        vecs = [np.where(bad[..., None, None], tensor.IDENTITY, v) for v in vecs]
        Bs = [tensor.from_eigen(lam, v, lambda l: 1.0 / np.sqrt(l)) for lam, v in zip(lams, vecs)]

        y1 = u[..., RHO_DETY1] * inv_rho
        y2 = u[..., RHO_DETY2] * inv_rho
        flag(~((y1 > 0) & (y2 > 0)), st.Reason.NONPOSITIVE_DETY)
        bad = codes != 0
        y1 = np.where(bad, 1.0, y1)
        y2 = np.where(bad, 1.0, y2)

        F = u[..., RHO_F].reshape(shape + (3, 3)) * inv_rho[..., None, None]
        Cof = tensor.transpose(u[..., W].reshape(shape + (3, 3))) * inv_rho[..., None, None]
        C1 = tensor.sym(F @ Bs[0] @ tensor.transpose(F))
        C2 = tensor.sym(Cof @ Bs[1] @ tensor.transpose(Cof))
        trC1, trC2 = tensor.trace(C1), tensor.trace(C2)

        eta = u[..., RHO_ETA] * inv_rho
        logdet = 6.0 * np.log(mat.rho_R * inv_rho) + 0.5 * np.log(y1) + 0.5 * np.log(y2)
        eta_t = eta + 0.5 * mat.alpha * (params.K1_1 * trC1 + params.K1_2 * trC2
                                         - mat.k_B * logdet)
        ek = eos.cv * eos.theta_ref * np.exp(eos._log_volume_factor(rho) + eta_t / eos.cv)
        theta = ek / eos.cv
        flag(~(np.isfinite(theta) & (theta > 0)), st.Reason.NONPOSITIVE_TEMPERATURE)
        bad = codes != 0
        theta = np.where(bad, 1.0, theta)
        ek = np.where(bad, eos.cv, ek)
        e_s = ek + (inv_rho - eos.b) * eos.p_inf + eos.q
        p = (eos.gamma - 1.0) * rho * ek / (1.0 - eos.b * rho) - eos.p_inf

        q = u[..., RHO_Q] * inv_rho[..., None]
        v = u[..., RHO_V] * inv_rho[..., None]
        K1, K2 = params.stiffness(theta)
        E = (0.5 * np.sum(v * v, axis=-1) + e_s
             + 0.5 * mat.tau0 / mat.kappa * np.sum(q * q, axis=-1)
             + 0.5 * mat.alpha * (params.K0_1 * trC1 + params.K0_2 * trC2))
        E_tilde = E + 0.5 * mat.e_ref * (tensor.frob2(Ys[0]) + tensor.frob2(Ys[1]))

    pv = PrimitiveKBKZ(
        rho=rho, eta=eta, q=q, v=v, F=F, Cof=Cof, Y1=Ys[0], Y2=Ys[1], y1=y1, y2=y2,
        B1=Bs[0], B2=Bs[1], Y1_eigs=lams[0], Y2_eigs=lams[1], C1=C1, C2=C2,
        trC1=trC1, trC2=trC2, eta_tilde=eta_t, theta=theta, p=p, e_s=e_s,
        K1=K1, K2=K2, E=E, E_tilde=E_tilde,
    )
    return pv, codes


def admissibility_codes(u, params, mat):
    codes = _evaluate(u, params, mat)[1]
    table = np.array((st.Reason.OK,) + _REASONS, dtype=object)
    return np.asarray(table[codes], dtype=object)


def to_primitive(u, params: KBKZParams, mat: MaterialParams) -> PrimitiveKBKZ:
    pv, codes = _evaluate(u, params, mat)
    if codes.any():
        flat = int(np.argmax(codes.ravel() != 0))
        idx = tuple(int(i) for i in np.unravel_index(flat, codes.shape)) if codes.ndim else None
        raise Inadmissible(_REASONS[int(codes.ravel()[flat]) - 1], idx)
    return pv


def from_primitive(rho, eta, q, v, F, Y1, Y2, y1=None, y2=None, cof=None,
                   theta=None, params=None, mat=None):
    """Assemble K-BKZ conserved vectors.

    ``cof`` defaults to ``Cof F``; ``y1, y2`` default to ``1/det Y``. When
    ``theta`` is given the entropy is chosen to produce that temperature.
    """
    rho = np.asarray(rho, dtype=float)
    shape = rho.shape
    F = np.broadcast_to(np.asarray(F, dtype=float), shape + (3, 3))
    cof = tensor.cofactor(F) if cof is None else np.broadcast_to(np.asarray(cof, float), shape + (3, 3))
    Ys = []
    for Y in (Y1, Y2):
        Y = np.asarray(Y, dtype=float)
        Y = tensor.sym_to_full(Y) if Y.shape[-1] == 6 else Y
        Ys.append(np.broadcast_to(Y, shape + (3, 3)))
    y1 = 1.0 / tensor.det(Ys[0]) if y1 is None else np.asarray(y1, dtype=float)
    y2 = 1.0 / tensor.det(Ys[1]) if y2 is None else np.asarray(y2, dtype=float)
    if theta is not None:
        C1 = F @ tensor.spd_inv_sqrt(Ys[0]) @ tensor.transpose(F)
        C2 = cof @ tensor.spd_inv_sqrt(Ys[1]) @ tensor.transpose(cof)
        logdet = 6.0 * np.log(mat.rho_R / rho) + 0.5 * np.log(y1) + 0.5 * np.log(y2)
        shift = 0.5 * mat.alpha * (params.K1_1 * tensor.trace(C1) + params.K1_2 * tensor.trace(C2)
                                   - mat.k_B * logdet)
        eta = mat.eos.entropy(rho, theta) - shift
    u = np.empty(shape + (NCOMP,))
    u[..., RHO] = rho
    u[..., RHO_ETA] = rho * eta
    u[..., RHO_Q] = rho[..., None] * np.asarray(q, dtype=float)
    u[..., RHO_V] = rho[..., None] * np.asarray(v, dtype=float)
    u[..., RHO_F] = (rho[..., None, None] * F).reshape(shape + (9,))
    u[..., W] = (rho[..., None, None] * tensor.transpose(cof)).reshape(shape + (9,))
    u[..., RHO_Y1] = rho[..., None] * tensor.full_to_sym(Ys[0])
    u[..., RHO_Y2] = rho[..., None] * tensor.full_to_sym(Ys[1])
    u[..., RHO_DETY1] = rho * y1
    u[..., RHO_DETY2] = rho * y2
    return u


def equilibrium_state(params: KBKZParams, mat: MaterialParams, rho=1.0, theta=1.0,
                      v=(0.0, 0.0, 0.0), F=None):
    """Rest state with ``q = 0`` and ``C_i = (k_B theta / K_i) I`` for both families."""
    F = tensor.IDENTITY if F is None else np.asarray(F, dtype=float)
    cof = tensor.cofactor(F)
    K1, K2 = params.stiffness(theta)
    kt = mat.k_B * theta
    Ys = []
    for G, K in ((F, K1), (cof, K2)):
        GtG = tensor.transpose(G) @ G
        Ys.append(GtG @ GtG * (K / kt) ** 2)
    return from_primitive(rho, 0.0, np.zeros(3), v, F, Ys[0], Ys[1], cof=cof,
                          theta=theta, params=params, mat=mat)


def math_entropy(u, params, mat):
    pv = to_primitive(u, params, mat)
    return pv.rho * pv.E_tilde


def total_energy(u, params, mat):
    pv = to_primitive(u, params, mat)
    return pv.rho * pv.E


def kbkz_stress(pv: PrimitiveKBKZ, params: KBKZParams, mat: MaterialParams):
    """``T = -p I + alpha rho [K1 C1 - K2 C2 + (K2 tr C2 - 3 k_B theta) I]``.

    The sign of the isotropic bracket is the one that makes the mechanical
    part of the entropy production vanish identically.
    """
    I = np.broadcast_to(tensor.IDENTITY, np.shape(pv.rho) + (3, 3))
    iso = pv.K2 * pv.trC2 - 3.0 * mat.k_B * pv.theta
    S = mat.alpha * pv.rho[..., None, None] * (
        pv.K1[..., None, None] * pv.C1 - pv.K2[..., None, None] * pv.C2 + iso[..., None, None] * I)
    return tensor.sym(S - pv.p[..., None, None] * I)


def _family_source(G, Y, B, y, K, theta, zeta, k_B):
    detG = tensor.det(G)
    if np.any(~(np.abs(detG) >= 1e-14)):
        raise SingularF("strain carrier is singular")
    Ginv = tensor.inv(G)
    M = Ginv @ tensor.transpose(Ginv)
    MB = M @ B
    P = MB + tensor.transpose(MB)
    z = zeta[..., None, None]
    kt = (k_B * theta)[..., None, None]
    f = tensor.sym(8.0 * K[..., None, None] / z * Y - 4.0 * kt / z * (Y @ P @ Y))
    h = 4.0 / zeta * y * (k_B * theta * tensor.trace(P @ Y) - 6.0 * K)
    return f, h


def kbkz_sources(pv: PrimitiveKBKZ, params: KBKZParams, mat: MaterialParams):
    """Specific sources ``(f1, f2, h1, h2)`` of ``Y1, Y2, y1, y2``."""
    zeta = mat.drag(pv.theta)
    f1, h1 = _family_source(pv.F, pv.Y1, pv.B1, pv.y1, pv.K1, pv.theta, zeta, mat.k_B)
    f2, h2 = _family_source(pv.Cof, pv.Y2, pv.B2, pv.y2, pv.K2, pv.theta, zeta, mat.k_B)
    return f1, f2, h1, h2


def kbkz_entropy_production(pv: PrimitiveKBKZ, params: KBKZParams, mat: MaterialParams,
                            per_family=False):
    """Heat part plus one Frobenius-square term per strain family."""
    heat = np.sum(pv.q * pv.q, axis=-1) / (mat.kappa * pv.theta ** 2)
    zeta = mat.drag(pv.theta)
    kt = mat.k_B * pv.theta
    terms = []
    for C, K in ((pv.C1, pv.K1), (pv.C2, pv.K2)):
        s = np.sqrt(np.maximum(tensor.sym_eigvals(C), np.finfo(float).tiny))
        mu = K[..., None] * s - kt[..., None] / s
        terms.append(2.0 * mat.alpha * pv.rho / (zeta * pv.theta) * np.sum(mu * mu, axis=-1))
    if per_family:
        return heat, terms[0], terms[1]
    return heat + terms[0] + terms[1]


def kbkz_full_source(u, params, mat, pv=None):
    if pv is None:
        pv = to_primitive(u, params, mat)
    rho = pv.rho
    f1, f2, h1, h2 = kbkz_sources(pv, params, mat)
    out = np.zeros(np.shape(rho) + (NCOMP,))
    out[..., RHO_ETA] = kbkz_entropy_production(pv, params, mat)
    out[..., RHO_Q] = -pv.q / (mat.tau0 * pv.theta)[..., None]
    out[..., RHO_V] = rho[..., None] * np.asarray(mat.body_force)
    out[..., RHO_Y1] = rho[..., None] * tensor.full_to_sym(f1)
    out[..., RHO_Y2] = rho[..., None] * tensor.full_to_sym(f2)
    out[..., RHO_DETY1] = rho * h1
    out[..., RHO_DETY2] = rho * h2
    return out


def kbkz_flux(u, params: KBKZParams, mat: MaterialParams, j=1, pv=None):
    """Flux in direction ``j``; the ``W`` block uses the gradient form."""
    d = flux._axis(j)
    if pv is None:
        pv = to_primitive(u, params, mat)
    u = np.asarray(u, dtype=float)
    rho = pv.rho
    vj = pv.v[..., d]
    rvj = rho * vj
    T = kbkz_stress(pv, params, mat)
    shape = np.shape(rho)
    out = np.zeros(shape + (NCOMP,))
    out[..., RHO] = rvj
    out[..., RHO_ETA] = rvj * pv.eta + pv.q[..., d] / pv.theta
    out[..., RHO_Q] = rvj[..., None] * pv.q
    out[..., RHO_Q.start + d] += mat.kappa / mat.tau0 * np.log(pv.theta)
    out[..., RHO_V] = rvj[..., None] * pv.v - T[..., :, d]
    FF = rvj[..., None, None] * pv.F - rho[..., None, None] * pv.v[..., :, None] * pv.F[..., None, d, :]
    out[..., RHO_F] = FF.reshape(shape + (9,))
    Wm = u[..., W].reshape(shape + (3, 3))
    Wflux = np.zeros(shape + (3, 3))
    Wflux[..., :, d] = np.einsum("...aj,...j->...a", Wm, pv.v)
    out[..., W] = Wflux.reshape(shape + (9,))
    out[..., RHO_Y1] = rvj[..., None] * tensor.full_to_sym(pv.Y1)
    out[..., RHO_Y2] = rvj[..., None] * tensor.full_to_sym(pv.Y2)
    out[..., RHO_DETY1] = rvj * pv.y1
    out[..., RHO_DETY2] = rvj * pv.y2
    return out


def entropy_flux(u, params: KBKZParams, mat: MaterialParams, j=1, pv=None):
    """Flux of the mathematical entropy, ``rho E~ v_j - (T^T v)_j + q_j``."""
    d = flux._axis(j)
    if pv is None:
        pv = to_primitive(u, params, mat)
    Tv = np.einsum("...ij,...i->...j", kbkz_stress(pv, params, mat), pv.v)
    return pv.rho * pv.E_tilde * pv.v[..., d] - Tv[..., d] + pv.q[..., d]


def entropy_hessian(u, params, mat, rel=1e-4, richardson=True):
    to_primitive(u, params, mat)
    return fd.hessian(lambda w: math_entropy(w, params, mat), u, rel=rel, richardson=richardson)


def numerical_jacobian(u, params, mat, j=1, fd_rel=flux.FD_REL, richardson=False):
    to_primitive(u, params, mat)
    return fd.jacobian(lambda w: kbkz_flux(w, params, mat, j), u, rel=fd_rel,
                       richardson=richardson)


def zero_flux_components(j=1):
    """``rho F_{j alpha}`` and the carrier entries ``W[alpha, i]``, ``i != j``.

    Their fluxes in direction ``j`` vanish identically; they carry the two
    Piola involutions.
    """
    d = flux._axis(j)
    w = [W.start + 3 * a + i for a in range(3) for i in range(3) if i != d]
    return flux.zero_flux_components(j) + w


def symmetrizer_check(u, params, mat, j=1, H=None, reduced=False):
    """Same contract as :func:`thermovisco.flux.symmetrizer_check` for the 40-component system."""
    if H is None:
        H = entropy_hessian(u, params, mat)
    A = numerical_jacobian(u, params, mat, j, richardson=True)
    keep = np.setdiff1d(np.arange(NCOMP), zero_flux_components(j)) if reduced else None
    return flux._symmetry_measures(H, A, keep)


def piola_curl_residual(grid, mat: MaterialParams):
    """Max discrete curl of the rows of ``F^{-1} = W / rho_R`` over the grid.

    In 1D only ``d/dx1`` survives, so the curl of row ``a`` reduces to
    ``(0, -d1 G[a, 3], d1 G[a, 2])``; derivatives are central differences
    using the grid's ghost-cell policy.
    """
    G = grid.u[:, W].reshape(-1, 3, 3) / mat.rho_R
    Ge = grid.extend(G)
    d1 = (Ge[2:] - Ge[:-2]) / (2.0 * grid.dx)
    return float(np.max(np.abs(d1[:, :, 1:]))) if len(d1) else 0.0


def cofactor_kinematics_check(L, t_end, n_times=11, h=1e-3):
    """Max residual of ``d(Cof F)/dt = ((tr L) I - L^T) Cof F`` along ``F = exp(t L)``.

    The time derivative is a five-point central difference with step ``h``;
    the residual is taken at ``n_times`` points in ``[0, t_end]`` and scaled by
    ``max(1, |rhs|)``.
    """
    L = np.asarray(L, dtype=float)
    R = np.trace(L) * np.eye(3) - L.T

    def cof(t):
        return tensor.cofactor(scipy.linalg.expm(t * L))

    worst = 0.0
    for t in np.linspace(0.0, t_end, n_times):
        dcof = (-cof(t + 2 * h) + 8 * cof(t + h) - 8 * cof(t - h) + cof(t - 2 * h)) / (12 * h)
        rhs = R @ cof(t)
        worst = max(worst, float(np.max(np.abs(dcof - rhs)) / max(1.0, np.max(np.abs(rhs)))))
    return worst


class KBKZModel:
    """Solver adapter for the 40-component K-BKZ system."""

    ncomp = NCOMP
    det_pairs = ((RHO_Y1, RHO_DETY1), (RHO_Y2, RHO_DETY2))

    def __init__(self, params: KBKZParams, mat: MaterialParams):
        self.params = params
        self.mat = mat

    def primitive(self, u):
        return to_primitive(u, self.params, self.mat)

    def codes(self, u):
        return admissibility_codes(u, self.params, self.mat)

    def flux(self, u, j=1, pv=None):
        return kbkz_flux(u, self.params, self.mat, j, pv=pv)

    def source(self, u, pv=None):
        return kbkz_full_source(u, self.params, self.mat, pv=pv)

    def wave_speed(self, u, j=1):
        self.primitive(u)
        return flux.power_wave_speed(lambda w: kbkz_flux(w, self.params, self.mat, j), u)

    def relax_timescale(self, pv):
        zeta = self.mat.drag(pv.theta)
        k_B = self.mat.k_B
        rate = (4.0 * (pv.K1 + pv.K2) / zeta + 1.0 / (self.mat.tau0 * pv.theta)
                + 1.0 / closure.nonlinear_relax_time(pv.F, pv.Y1_eigs, pv.theta, zeta, k_B)
                + 1.0 / closure.nonlinear_relax_time(pv.Cof, pv.Y2_eigs, pv.theta, zeta, k_B))
        return float(1.0 / np.max(rate))

    def cell_diagnostics(self, u, pv=None):
        if pv is None:
            pv = self.primitive(u)
        r1 = np.abs(pv.y1 * tensor.det(pv.Y1) - 1.0)
        r2 = np.abs(pv.y2 * tensor.det(pv.Y2) - 1.0)
        r_rho = np.abs(pv.rho * tensor.det(pv.F) - self.mat.rho_R) / self.mat.rho_R
        return dict(
            energy=pv.rho * pv.E,
            math_entropy=pv.rho * pv.E_tilde,
            phys_entropy=u[..., RHO_ETA],
            res_det=np.maximum(r1, r2),
            res_rho=r_rho,
            theta=pv.theta,
            min_eig_Y=np.minimum(pv.Y1_eigs[..., -1], pv.Y2_eigs[..., -1]),
            sigma=kbkz_entropy_production(pv, self.params, self.mat),
        )

    def snapshot_columns(self, u, pv=None):
        if pv is None:
            pv = self.primitive(u)
        cols = {"rho": pv.rho, "eta": pv.eta}
        for i in range(3):
            cols[f"q{i + 1}"] = pv.q[..., i]
        for i in range(3):
            cols[f"v{i + 1}"] = pv.v[..., i]
        for i in range(3):
            for a in range(3):
                cols[f"F{i + 1}{a + 1}"] = pv.F[..., i, a]
        for (i, j) in tensor.SYM_INDEX:
            cols[f"Y{i + 1}{j + 1}"] = pv.Y1[..., i, j]
        cols["detY"] = pv.y1
        cols["theta"] = pv.theta
        cols["p"] = pv.p
        cols["sigma"] = kbkz_entropy_production(pv, self.params, self.mat)
        G = np.asarray(u)[..., W].reshape(np.shape(pv.rho) + (3, 3)) / self.mat.rho_R
        for a in range(3):
            for i in range(3):
                cols[f"Finv{a + 1}{i + 1}"] = G[..., a, i]
        for (i, j) in tensor.SYM_INDEX:
            cols[f"Y2_{i + 1}{j + 1}"] = pv.Y2[..., i, j]
        cols["detY2"] = pv.y2
        return cols
