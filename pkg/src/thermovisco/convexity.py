"""
Numerical certification of the convexity structure.

Three layers are checked:

* closed-form leading principal minors of the auxiliary functions
  ``f(x, y, z) = exp(q y) / (x^p z^r)`` (polytropic gas), its Noble-Abel
  stiffened-gas counterpart and the two-family K-BKZ function, against FD
  Hessians;
* the shifted solvent energy and the elastic trace terms, by FD Hessians and
  midpoint inequalities;
* the mathematical entropy ``rho E~`` in conserved variables, whose FD Hessian
  must be SPD at sampled admissible states.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from . import fd, tensor, variants
from . import state as st
from .eos import FENEP, NASG, Hookean, PolytropicGas
from .errors import DomainError, SamplingFailure
from .params import MaterialParams

MINOR_TOL = 1e-6
HESSIAN_REL = 1e-4
# minors amplify Hessian roundoff; with Richardson 1e-3 is the better balance
MINOR_REL = 1e-3
MIDPOINT_PAIRS = 100
MAX_REJECT_FRACTION = 0.99
DET_F_MIN = 0.2
# temperatures outside this window give Hessians whose eigenvalues span more
# than double precision can resolve by finite differences
THETA_WINDOW = (1e-2, 1e2)


# ---------------------------------------------------------------------------
# closed-form minors


def _positive(name, *vals):
    for v in vals:
        if np.any(~(np.asarray(v, dtype=float) > 0)):
            raise DomainError(f"{name} must be positive")


def pg_f(p, q, r, x, y, z):
    """Auxiliary function ``exp(q y) / (x^p z^r)`` on ``x, z > 0``."""
    return np.exp(q * y) / (x ** p * z ** r)


def pg_minors(p, q, r, x, y, z):
    """Leading principal minors of the Hessian of :func:`pg_f`."""
    _positive("p, q, r", p, q, r)
    _positive("x and z", x, z)
    e = np.exp(q * y)
    H1 = p * (p + 1) * e / (x ** (p + 2) * z ** r)
    H2 = q ** 2 * p * e ** 2 / (x ** (2 * p + 2) * z ** (2 * r))
    H3 = q ** 2 * p * r * e ** 3 / (x ** (3 * p + 2) * z ** (3 * r + 2))
    return H1, H2, H3


def nasg_f(p, q, r, b, x, y, z):
    """Auxiliary function ``exp(q y) / ((x - b)^p x^r z^r)`` on ``x > b``."""
    return np.exp(q * y) / ((x - b) ** p * x ** r * z ** r)


def nasg_quadratics(p, q, r, b):
    """Coefficients ``(a, b, c)`` of the quadratics in ``x`` inside ``H1`` and ``H2``.

    ``H3`` shares the quadratic of ``H2``.
    """
    s = p + r
    return ((s * (1 + s), -2 * b * r * (1 + s), b ** 2 * r * (1 + r)),
            (s, -2 * b * r, b ** 2 * r))


def nasg_minors(p, q, r, b, x, y, z):
    """Leading principal minors of the Hessian of :func:`nasg_f`.

    The linear coefficient of the ``H1`` quadratic is ``-2 b r (1 + p + r) x``.
    """
    _positive("p, q, r", p, q, r)
    if np.any(~(np.asarray(b) >= 0)):
        raise DomainError("b must be non-negative")
    if np.any(~(np.asarray(x) > b)):
        raise DomainError("x must exceed b")
    _positive("z", z)
    (a1, b1, c1), (a2, b2, c2) = nasg_quadratics(p, q, r, b)
    e = np.exp(q * y)
    w = x - b
    Q1 = a1 * x ** 2 + b1 * x + c1
    Q2 = a2 * x ** 2 + b2 * x + c2
    H1 = e / (w ** (p + 2) * x ** (r + 2) * z ** r) * Q1
    H2 = q ** 2 * e ** 2 / (w ** (2 * p + 2) * x ** (2 * r + 2) * z ** (2 * r)) * Q2
    H3 = q ** 2 * r * e ** 3 / (w ** (3 * p + 2) * x ** (3 * r + 2) * z ** (3 * r + 2)) * Q2
    return H1, H2, H3


def nasg_discriminants(p, q, r, b):
    """Closed-form discriminants ``(-4 b^2 p r (1 + p + r), -4 b^2 p r)``."""
    _positive("p, q, r", p, q, r)
    return -4 * b ** 2 * p * r * (1 + p + r), -4 * b ** 2 * p * r


def kbkz_f(p, q, r, x, y, z1, z2):
    """Auxiliary function ``exp(q y) / (x^p z1^r z2^r)``."""
    return np.exp(q * y) / (x ** p * z1 ** r * z2 ** r)


def kbkz_minors(p, q, r, x, y, z1, z2):
    """Leading principal minors of the Hessian of :func:`kbkz_f`."""
    _positive("p, q, r", p, q, r)
    _positive("x, z1 and z2", x, z1, z2)
    e = np.exp(q * y)
    H1 = p * (p + 1) * e / (x ** (p + 2) * z1 ** r * z2 ** r)
    H2 = q ** 2 * p * e ** 2 / (x ** (2 * p + 2) * z1 ** (2 * r) * z2 ** (2 * r))
    H3 = q ** 2 * p * r * e ** 3 / (x ** (3 * p + 2) * z1 ** (3 * r + 2) * z2 ** (3 * r))
    H4 = q ** 2 * p * r ** 2 * e ** 4 / (x ** (4 * p + 2) * z1 ** (4 * r + 2) * z2 ** (4 * r + 2))
    return H1, H2, H3, H4


def leading_minors(H):
    """Determinants of the leading ``k x k`` blocks, ``k = 1..n``."""
    H = np.asarray(H, dtype=float)
    return tuple(np.linalg.det(H[..., :k, :k]) for k in range(1, H.shape[-1] + 1))


def fd_minors(fun, point, rel=MINOR_REL):
    """Leading minors of the Richardson FD Hessian of ``fun`` at ``point``."""
    H = fd.hessian(fun, np.asarray(point, dtype=float), rel=rel, richardson=True)
    return leading_minors(H)


# ---------------------------------------------------------------------------
# reports


@dataclass
class MinorReport:
    """Closed-form versus FD minors at one sample point."""

    family: str
    params: tuple
    point: tuple
    closed: tuple
    fd: tuple
    rel_err: tuple
    tol: float = MINOR_TOL

    @property
    def passed(self):
        return bool(np.all(np.isfinite(self.rel_err)) and max(self.rel_err) < self.tol)


@dataclass
class VerificationReport:
    """Pass/fail records with measured residuals for one verification target."""

    name: str
    records: List[Dict[str, float]] = field(default_factory=list)

    @property
    def passed(self):
        return bool(self.records) and all(bool(r["passed"]) for r in self.records)

    @property
    def n_failed(self):
        return sum(not bool(r["passed"]) for r in self.records)

    def worst(self, key, largest=True):
        vals = [r[key] for r in self.records if key in r]
        if not vals:
            return float("nan")
        return float(max(vals) if largest else min(vals))

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {len(self.records) - self.n_failed}/{len(self.records)} records passed"

    def write_csv(self, path):
        keys: List[str] = []
        for r in self.records:
            keys += [k for k in r if k not in keys]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["target"] + keys)
            for r in self.records:
                w.writerow([self.name] + [_fmt(r.get(k, "")) for k in keys])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return v


def _rel_errors(closed, approx):
    return tuple(float(abs(a - c) / abs(c)) for c, a in zip(closed, approx))


def minor_check(family, n_points=100, seed=0, tol=MINOR_TOL) -> List[MinorReport]:
    """Compare closed-form minors with FD minors at seeded random points.

    Parameters are drawn log-uniformly in ``[0.2, 3]``; ``x`` (or ``x - b``)
    and ``z`` log-uniformly in ``[0.5, 2]``; ``y`` uniformly in ``[-1, 1]``.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_points):
        p, q, r = np.exp(rng.uniform(np.log(0.2), np.log(3.0), 3))
        y = rng.uniform(-1.0, 1.0)
        if family == "pg":
            x, z = np.exp(rng.uniform(np.log(0.5), np.log(2.0), 2))
            point, params = (x, y, z), (p, q, r)
            closed = pg_minors(p, q, r, x, y, z)
            approx = fd_minors(lambda w: pg_f(p, q, r, *np.moveaxis(w, -1, 0)), point)
        elif family == "nasg":
            b = rng.uniform(0.0, 1.0)
            w0, z = np.exp(rng.uniform(np.log(0.5), np.log(2.0), 2))
            point, params = (b + w0, y, z), (p, q, r, b)
            closed = nasg_minors(p, q, r, b, *point)
            approx = fd_minors(lambda w: nasg_f(p, q, r, b, *np.moveaxis(w, -1, 0)), point)
        elif family == "kbkz":
            x, z1, z2 = np.exp(rng.uniform(np.log(0.5), np.log(2.0), 3))
            point, params = (x, y, z1, z2), (p, q, r)
            closed = kbkz_minors(p, q, r, *point)
            approx = fd_minors(lambda w: kbkz_f(p, q, r, *np.moveaxis(w, -1, 0)), point)
        else:
            raise ValueError(f"unknown minor family {family!r}")
        closed = tuple(float(c) for c in closed)
        approx = tuple(float(a) for a in approx)
        out.append(MinorReport(family, tuple(map(float, params)), tuple(map(float, point)),
                               closed, approx, _rel_errors(closed, approx), tol))
    return out


def discriminant_check(n_tuples=20, seed=0, tol=1e-12):
    """Discriminants from the quadratic coefficients versus the closed forms.

    Returns a list of ``(params, computed, closed, rel_err)``.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_tuples):
        p, q, r = np.exp(rng.uniform(np.log(0.2), np.log(3.0), 3))
        b = rng.uniform(0.05, 1.0)
        computed = tuple(bb ** 2 - 4 * a * c for a, bb, c in nasg_quadratics(p, q, r, b))
        closed = nasg_discriminants(p, q, r, b)
        out.append(((p, q, r, b), computed, closed, _rel_errors(closed, computed)))
    return out


def minors_report(n_points=100, seed=0, tol=MINOR_TOL) -> VerificationReport:
    rep = VerificationReport("minors")
    for family in ("pg", "nasg", "kbkz"):
        for k, m in enumerate(minor_check(family, n_points, seed, tol)):
            rep.records.append(dict(family=family, sample=k, max_rel_err=max(m.rel_err),
                                    min_closed_minor=min(m.closed), passed=m.passed))
    for k, (_, _, _, err) in enumerate(discriminant_check(20, seed)):
        rep.records.append(dict(family="nasg_discriminant", sample=k, max_rel_err=max(err),
                                passed=max(err) < 1e-12))
    return rep


# ---------------------------------------------------------------------------
# sampling of admissible points


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_spd(rng, lo=0.1, hi=10.0):
    """``Q diag(lambda) Q^T`` with log-uniform ``lambda`` and ``Q`` from a Gaussian QR."""
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    lam = _log_uniform(rng, lo, hi, 3)
    return tensor.sym((Q * lam) @ Q.T)


def random_F(rng, scale=0.5, det_min=DET_F_MIN, max_tries=1000):
    """``I + scale * Gaussian`` rejected while ``|det F| < det_min``."""
    for _ in range(max_tries):
        F = np.eye(3) + scale * rng.standard_normal((3, 3))
        if abs(np.linalg.det(F)) >= det_min:
            return F
    raise SamplingFailure("could not draw F with |det F| above threshold")


def draw_primitive(rng, eta_scale=0.5):
    """One draw of the base-model variables ``(rho, eta, q, v, F, Y, y)``."""
    return dict(
        rho=_log_uniform(rng, 0.1, 10.0),
        eta=eta_scale * rng.standard_normal(),
        q=rng.standard_normal(3),
        v=rng.standard_normal(3),
        F=random_F(rng),
        Y=random_spd(rng),
        y=_log_uniform(rng, 0.1, 10.0),
    )


def _sample(n, draw, accept, rng):
    """Rejection sampling with the 99 % rejection guard."""
    out, tries = [], 0
    while len(out) < n:
        tries += 1
        x = draw(rng)
        if accept(x):
            out.append(x)
        if tries >= 100 and len(out) < (1.0 - MAX_REJECT_FRACTION) * tries:
            raise SamplingFailure(
                f"sampler rejected {tries - len(out)} of {tries} draws")
    return out


def _in_window(theta):
    return bool(THETA_WINDOW[0] <= theta <= THETA_WINDOW[1])


def sample_states(mat: MaterialParams, n, seed=0, model="maxwell", params=None):
    """Admissible conserved states drawn from the documented distribution.

    Draws whose temperature falls outside ``THETA_WINDOW`` are rejected.

    Returns an array of shape ``(n, 24)`` (``maxwell``) or ``(n, 40)`` (``kbkz``).
    """
    rng = np.random.default_rng(seed)
    if model == "maxwell":
        def draw(rng):
            d = draw_primitive(rng)
            try:
                return st.from_primitive(d["rho"], d["eta"], d["q"], d["v"], d["F"], d["Y"], d["y"])
            except ValueError:
                return None

        def accept(u):
            if u is None or not st.is_admissible(u, mat).ok:
                return False
            return _in_window(st.to_primitive(u, mat).theta)
    elif model == "kbkz":
        params = params if params is not None else variants.KBKZParams()

        def draw(rng):
            d = draw_primitive(rng)
            return variants.from_primitive(
                d["rho"], d["eta"], d["q"], d["v"], d["F"], d["Y"], random_spd(rng),
                d["y"], _log_uniform(rng, 0.1, 10.0), params=params, mat=mat)

        def accept(u):
            if np.asarray(variants.admissibility_codes(u, params, mat)).item() is not st.Reason.OK:
                return False
            return _in_window(variants.to_primitive(u, params, mat).theta)
    else:
        raise ValueError(f"unknown model {model!r}")
    return np.array(_sample(n, draw, accept, rng))


def fuzz_states(mat: MaterialParams, n, seed=0, batch=None):
    """Vectorized counterpart of :func:`sample_states` for the base model.

    Draws from the same distribution in batches and keeps admissible states
    inside ``THETA_WINDOW``; the stream differs from :func:`sample_states`.
    """
    rng = np.random.default_rng(seed)
    batch = batch or max(64, 2 * n)
    out, kept, drawn = [], 0, 0
    while kept < n:
        Q, _ = np.linalg.qr(rng.standard_normal((batch, 3, 3)))
        lam = _log_uniform(rng, 0.1, 10.0, (batch, 3))
        Y = tensor.sym((Q * lam[:, None, :]) @ np.swapaxes(Q, 1, 2))
        F = np.eye(3) + 0.5 * rng.standard_normal((batch, 3, 3))
        u = st.from_primitive(_log_uniform(rng, 0.1, 10.0, batch), 0.5 * rng.standard_normal(batch),
                              rng.standard_normal((batch, 3)), rng.standard_normal((batch, 3)),
                              F, Y, _log_uniform(rng, 0.1, 10.0, batch))
        ok = np.abs(np.linalg.det(F)) >= DET_F_MIN
        ok &= np.array([c is st.Reason.OK for c in st.admissibility_codes(u, mat)])
        u = u[ok]
        theta = st.to_primitive(u, mat).theta
        u = u[(theta >= THETA_WINDOW[0]) & (theta <= THETA_WINDOW[1])]
        drawn += batch
        out.append(u)
        kept += len(u)
        if kept < (1.0 - MAX_REJECT_FRACTION) * drawn:
            raise SamplingFailure(f"sampler rejected {drawn - kept} of {drawn} draws")
    return np.concatenate(out)[:n]


# ---------------------------------------------------------------------------
# strict convexity sampling


def shifted_solvent_energy(mat: MaterialParams, rho, eta, F, Y, y):
    """Shifted solvent energy ``e_s(rho, eta~)`` as a function of ``(rho, eta, F, Y, y)``."""
    C = F @ tensor.spd_inv_sqrt(Y, check=False) @ tensor.transpose(F)
    phi = mat.elastic.strain_measure(tensor.trace(C))
    eta_t = eta + 0.5 * mat.alpha * (
        mat.K1 * phi - mat.k_B * (2.0 * np.log(mat.rho_R / rho) + 0.5 * np.log(y)))
    return mat.eos.energy(rho, eta_t)


def _affine_nasg_terms(eos, x):
    """``(1/rho - b) p_inf + q`` as a function of ``x = 1/rho``."""
    return (x - eos.b) * eos.p_inf + eos.q


def _midpoint_records(g, draw, rng, n_pairs, strict):
    recs = []
    for k in range(n_pairs):
        a, b = draw(rng), draw(rng)
        ga, gb, gm = g(a), g(b), g(0.5 * (a + b))
        gap = 0.5 * (ga + gb) - gm
        scale = max(abs(ga), abs(gb), 1.0)
        ok = gap > 0 if strict else gap >= -1e-12 * scale
        recs.append(dict(kind="midpoint", sample=k, midpoint_gap=float(gap), passed=bool(ok)))
    return recs


def _hessian_records(g, points, rel=HESSIAN_REL):
    pts = np.asarray(points, dtype=float)
    H = fd.hessian(g, pts, rel=rel, richardson=True)
    lam = np.linalg.eigvalsh(0.5 * (H + np.swapaxes(H, -1, -2)))
    return [dict(kind="hessian", sample=k, min_eig=float(lam[k, 0]),
                 max_eig=float(lam[k, -1]), passed=bool(lam[k, 0] > 0))
            for k in range(len(pts))]


def _packF(F, Y):
    return np.concatenate([np.reshape(F, np.shape(F)[:-2] + (9,)), tensor.full_to_sym(Y)], axis=-1)


def _unpackF(w):
    return w[..., :9].reshape(w.shape[:-1] + (3, 3)), tensor.sym_to_full(w[..., 9:])


TARGETS = (
    "solvent", "kbkz_solvent", "nasg_affine", "hookean_trace", "fenep_term",
    "entropy", "kbkz_entropy",
)


def strict_convexity_sample(target, mat: MaterialParams, n_samples, rng_seed=0,
                            n_pairs=MIDPOINT_PAIRS, params=None) -> VerificationReport:
    """Sample admissible points of ``target`` and record FD-Hessian and midpoint checks.

    Targets
    -------
    solvent
        Shifted solvent energy in ``(1/rho, eta, y)`` at a fixed sampled
        ``(F, Y)``; the Hessian must be SPD.
    kbkz_solvent
        K-BKZ shifted solvent energy in ``(1/rho, eta, y1, y2)``.
    nasg_affine
        The affine terms ``(1/rho - b) p_inf + q``; Hessian entries must be zero.
    hookean_trace
        ``tr(F Y^{-1/2} F^T)`` in ``(F, Y)``; midpoint inequality non-strict.
    fenep_term
        ``-b^2 log(1 - tr(F Y^{-1/2} F^T) / b^2)``: midpoint inequality in
        ``(F, Y)`` and SPD Hessian in ``F``.
    entropy, kbkz_entropy
        ``rho E~`` in conserved variables; Hessian SPD and midpoint strict.

    Raises
    ------
    SamplingFailure
        If the admissible sampler rejects more than 99 % of draws.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(rng_seed)
    rep = VerificationReport(target)

    if target == "solvent":
        def draw(rng):
            d = draw_primitive(rng)
            return np.array([1.0 / d["rho"], d["eta"], d["y"]]), d

        base = [draw(rng) for _ in range(n_samples)]
        for k, (x0, d) in enumerate(base):
            def g(w, d=d):
                return shifted_solvent_energy(mat, 1.0 / w[..., 0], w[..., 1], d["F"], d["Y"], w[..., 2])
            rec = _hessian_records(g, [x0])[0]
            rec["sample"] = k
            rep.records.append(rec)
        F0, Y0 = base[0][1]["F"], base[0][1]["Y"]

        def g0(w):
            return shifted_solvent_energy(mat, 1.0 / w[..., 0], w[..., 1], F0, Y0, w[..., 2])
        rep.records += _midpoint_records(g0, lambda r: draw(r)[0], rng, n_pairs, strict=True)
        return rep

    if target == "kbkz_solvent":
        params = params if params is not None else variants.KBKZParams()

        def energy(w, F, Y1, Y2):
            rho = 1.0 / w[..., 0]
            Cof = tensor.cofactor(F)
            C1 = F @ tensor.spd_inv_sqrt(Y1, check=False) @ F.T
            C2 = Cof @ tensor.spd_inv_sqrt(Y2, check=False) @ Cof.T
            logdet = 6.0 * np.log(mat.rho_R / rho) + 0.5 * np.log(w[..., 2]) + 0.5 * np.log(w[..., 3])
            eta_t = w[..., 1] + 0.5 * mat.alpha * (
                params.K1_1 * np.trace(C1) + params.K1_2 * np.trace(C2) - mat.k_B * logdet)
            return mat.eos.energy(rho, eta_t)

        def draw(rng):
            d = draw_primitive(rng)
            return (np.array([1.0 / d["rho"], d["eta"], d["y"], _log_uniform(rng, 0.1, 10.0)]),
                    d["F"], d["Y"], random_spd(rng))

        base = [draw(rng) for _ in range(n_samples)]
        for k, (x0, F, Y1, Y2) in enumerate(base):
            rec = _hessian_records(lambda w: energy(w, F, Y1, Y2), [x0])[0]
            rec["sample"] = k
            rep.records.append(rec)
        _, F0, Y10, Y20 = base[0]
        rep.records += _midpoint_records(lambda w: energy(w, F0, Y10, Y20),
                                         lambda r: draw(r)[0], rng, n_pairs, strict=True)
        return rep

    if target == "nasg_affine":
        eos = mat.eos
        xs = [np.array([1.0 / draw_primitive(rng)["rho"]]) for _ in range(n_samples)]
        H = fd.hessian(lambda w: _affine_nasg_terms(eos, w[..., 0]), np.array(xs))
        for k in range(n_samples):
            val = float(abs(H[k, 0, 0]))
            rep.records.append(dict(kind="hessian", sample=k, max_abs_entry=val,
                                    passed=val <= 1e-6 * max(eos.p_inf, 1.0)))
        return rep

    if target in ("hookean_trace", "fenep_term"):
        b2 = mat.elastic.b_ext ** 2 if isinstance(mat.elastic, FENEP) else None

        def trace_term(w):
            F, Y = _unpackF(w)
            return tensor.trace(F @ tensor.spd_inv_sqrt(Y, check=False) @ tensor.transpose(F))

        if target == "hookean_trace":
            g = trace_term
        else:
            if b2 is None:
                raise ValueError("fenep_term requires a FENE-P elastic law")

            def g(w):
                return -b2 * np.log1p(-trace_term(w) / b2)

        def draw(rng):
            return _packF(random_F(rng), random_spd(rng))

        rep.records += _midpoint_records(g, draw, rng, n_pairs, strict=False)
        if target == "fenep_term":
            pts = [draw(rng) for _ in range(n_samples)]
            for k, w0 in enumerate(pts):
                Y = tensor.sym_to_full(w0[9:])

                def gF(wF, Y=Y):
                    return g(np.concatenate([wF, np.broadcast_to(tensor.full_to_sym(Y),
                                                                 wF.shape[:-1] + (6,))], axis=-1))
                rec = _hessian_records(gF, [w0[:9]])[0]
                rec["sample"] = k
                rep.records.append(rec)
        return rep

    if target == "entropy":
        u = sample_states(mat, n_samples, seed=rng_seed)
        rep.records += _hessian_records(lambda w: st.math_entropy(w, mat), u)
        others = sample_states(mat, n_pairs, seed=rng_seed + 1)
        partners = sample_states(mat, n_pairs, seed=rng_seed + 2)
        for k, (a, b) in enumerate(zip(others, partners)):
            ga, gb = st.math_entropy(a, mat), st.math_entropy(b, mat)
            gm = st.math_entropy(0.5 * (a + b), mat)
            rep.records.append(dict(kind="midpoint", sample=k,
                                    midpoint_gap=float(0.5 * (ga + gb) - gm),
                                    passed=bool(0.5 * (ga + gb) - gm > 0)))
        return rep

    if target == "kbkz_entropy":
        params = params if params is not None else variants.KBKZParams()
        u = sample_states(mat, n_samples, seed=rng_seed, model="kbkz", params=params)
        for k in range(n_samples):
            rec = _hessian_records(lambda w: variants.math_entropy(w, params, mat), u[k:k + 1])[0]
            rec["sample"] = k
            rep.records.append(rec)
        others = sample_states(mat, n_pairs, seed=rng_seed + 1, model="kbkz", params=params)
        partners = sample_states(mat, n_pairs, seed=rng_seed + 2, model="kbkz", params=params)
        for k, (a, b) in enumerate(zip(others, partners)):
            ga = variants.math_entropy(a, params, mat)
            gb = variants.math_entropy(b, params, mat)
            gm = variants.math_entropy(0.5 * (a + b), params, mat)
            rep.records.append(dict(kind="midpoint", sample=k,
                                    midpoint_gap=float(0.5 * (ga + gb) - gm),
                                    passed=bool(0.5 * (ga + gb) - gm > 0)))
        return rep

    raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")


def entropy_convexity_report(n_samples=100, seed=0) -> Dict[str, VerificationReport]:
    """``rho E~`` Hessian checks for the four model/EOS combinations."""
    base = dict(alpha=1.0, k_B=1.0, zeta=4.0, tau0=1.0, kappa=1.0, e_ref=1.0, rho_R=1.0)
    pg = PolytropicGas(1.0, 1.4, 1.0, 1.0)
    cases = {
        "maxwell+polytropic": (MaterialParams(eos=pg, elastic=Hookean(), **base), "entropy"),
        "maxwell+nasg": (MaterialParams(eos=NASG(1.0, 1.4, 1.0, 1.0, b=0.05, q=0.1, p_inf=2.0),
                                        elastic=Hookean(), **base), "entropy"),
        "maxwell+fenep": (MaterialParams(eos=pg, elastic=FENEP(b_ext=10.0), **base), "entropy"),
        "kbkz+polytropic": (MaterialParams(eos=pg, elastic=Hookean(), **base), "kbkz_entropy"),
    }
    out = {}
    for name, (mat, target) in cases.items():
        rep = strict_convexity_sample(target, mat, n_samples, seed)
        rep.name = name
        out[name] = rep
    return out
