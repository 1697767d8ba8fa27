"""
1D slab-symmetric finite-volume integrator.

The full 3D tensor state is carried in every cell while fields vary in
``x = x^1`` only. One step is the Strang splitting
``S(dt/2) H(dt) S(dt/2)`` where ``H`` advances the homogeneous conservation
law with SSP-RK2 and the Rusanov flux, and ``S`` integrates the pointwise
relaxation ODE with sub-cycled classical RK4.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import closure, flux, tensor
from . import state as st
from .errors import CFLCollapse, Inadmissible, InadmissibleCell
from .params import MaterialParams

SUBSTEP_WARN = 1000

PERIODIC = "periodic"
TRANSMISSIVE = "transmissive"
BOUNDARIES = (PERIODIC, TRANSMISSIVE)
DT_COLLAPSE = 1e-14
RELAX_FRACTION = 0.1
RELAX_RETRIES = 10


class MaxwellModel:
    """Maxwell-fluid system with Maxwell-Cattaneo heat conduction (24 components)."""

    ncomp = st.NCOMP
    det_pairs = ((st.RHO_Y, st.RHO_DETY),)

    def __init__(self, mat: MaterialParams):
        self.mat = mat

    def primitive(self, u):
        return st.to_primitive(u, self.mat)

    def codes(self, u):
        return st.admissibility_codes(u, self.mat)

    def flux(self, u, j=1, pv=None):
        return flux.physical_flux(u, self.mat, j, pv=pv)

    def source(self, u, pv=None):
        return closure.full_source(u, self.mat, pv=pv)

    def wave_speed(self, u, j=1):
        return flux.cell_wave_speed(u, self.mat, j)

    def relax_timescale(self, pv):
        """Shortest relaxation time over the batch."""
        return float(np.min(closure.relaxation_time(pv, self.mat)))

    def cell_diagnostics(self, u, pv=None):
        if pv is None:
            pv = self.primitive(u)
        r_det, r_rho = st.constraint_residuals(u, self.mat)
        return dict(
            energy=pv.rho * pv.E,
            math_entropy=pv.rho * pv.E_tilde,
            phys_entropy=u[..., st.RHO_ETA],
            res_det=r_det,
            res_rho=r_rho,
            theta=pv.theta,
            min_eig_Y=pv.Y_eigs[..., -1],
            sigma=closure.entropy_production(pv, self.mat),
        )

    def snapshot_columns(self, u, pv=None):
        """Named per-cell columns for snapshot output."""
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
            cols[f"Y{i + 1}{j + 1}"] = pv.Y[..., i, j]
        cols["detY"] = pv.y
        cols["theta"] = pv.theta
        cols["p"] = pv.p
        cols["sigma"] = closure.entropy_production(pv, self.mat)
        return cols


def as_model(mat):
    """Wrap :class:`MaterialParams` in the default model; pass models through."""
    if isinstance(mat, MaterialParams):
        return MaxwellModel(mat)
    return mat


@dataclass
class Grid1D:
    """Uniform cell-centred grid on ``[x0, x1]``.

    Parameters
    ----------
    u : ndarray, shape (N, ncomp)
        Conserved states, one row per cell.
    x0, x1 : float
    boundary : {"periodic", "transmissive"}
    """

    u: np.ndarray
    x0: float = 0.0
    x1: float = 1.0
    boundary: str = PERIODIC

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim != 2 or self.u.shape[0] < 4:
            raise ValueError("grid needs at least 4 cells")
        if not self.x1 > self.x0:
            raise ValueError("x1 must exceed x0")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")

    @property
    def n(self):
        return self.u.shape[0]

    @property
    def dx(self):
        return (self.x1 - self.x0) / self.n

    @property
    def x(self):
        return self.x0 + (np.arange(self.n) + 0.5) * self.dx

    def with_u(self, u):
        return dataclasses.replace(self, u=u)

    def extend(self, a):
        """Append one ghost cell on each side of the per-cell array ``a``."""
        if self.boundary == PERIODIC:
            return np.concatenate([a[-1:], a, a[:1]])
        return np.concatenate([a[:1], a, a[-1:]])


DIAGNOSTIC_COLUMNS = (
    "step", "time", "dt", "mass", "momentum1", "momentum2", "momentum3",
    "energy", "math_entropy", "phys_entropy", "max_res_detY", "max_res_rhoR",
    "min_theta", "min_eig_Y", "sigma_integral",
)


@dataclass
class RunDiagnostics:
    """Time series of grid totals and extrema, one row per recorded step."""

    rows: List[tuple] = field(default_factory=list)

    columns = DIAGNOSTIC_COLUMNS

    def append(self, row):
        if self.rows and row[1] < self.rows[-1][1]:
            raise ValueError("diagnostic time must be non-decreasing")
        self.rows.append(tuple(float(x) for x in row))

    def as_array(self):
        return np.array(self.rows, dtype=float).reshape(-1, len(self.columns))

    def column(self, name):
        return self.as_array()[:, self.columns.index(name)]

    def __len__(self):
        return len(self.rows)


def diagnostics_row(grid: Grid1D, model, step_index, time, dt):
    """One :class:`RunDiagnostics` row for the current grid."""
    u = grid.u
    d = model.cell_diagnostics(u)
    dx = grid.dx
    mom = np.sum(u[:, st.RHO_V], axis=0) * dx
    return (
        step_index, time, dt, np.sum(u[:, st.RHO]) * dx, mom[0], mom[1], mom[2],
        np.sum(d["energy"]) * dx, np.sum(d["math_entropy"]) * dx,
        np.sum(d["phys_entropy"]) * dx, np.max(d["res_det"]), np.max(d["res_rho"]),
        np.min(d["theta"]), np.min(d["min_eig_Y"]), np.sum(d["sigma"]) * dx,
    )


def check_cells(u, model):
    """Raise :class:`InadmissibleCell` at the first inadmissible cell."""
    codes = np.asarray(model.codes(u)).ravel()
    # elementwise: numpy mangles a str-enum scalar in array comparisons
    bad = np.flatnonzero([c is not st.Reason.OK for c in codes])
    if len(bad):
        i = int(bad[0])
        raise InadmissibleCell(codes[i], i)


def _project_det_invariants(u_new, u_old, model):
    """Restore ``y det Y`` of every strain family to its value in ``u_old``.

    ``y det Y = (rho y) det(rho Y) / rho^4`` and ``rho`` is a relaxation
    invariant, so only the ``rho y`` component is rescaled.
    """
    for ys, yi in model.det_pairs:
        d_old = tensor.det(tensor.sym_to_full(u_old[..., ys]))
        d_new = tensor.det(tensor.sym_to_full(u_new[..., ys]))
        u_new[..., yi] = u_old[..., yi] * d_old / d_new
    return u_new


def _rk4_relax(u, model, dt, n_sub):
    h = dt / n_sub
    for _ in range(n_sub):
        k1 = model.source(u)
        k2 = model.source(u + 0.5 * h * k1)
        k3 = model.source(u + 0.5 * h * k2)
        k4 = model.source(u + h * k3)
        u = _project_det_invariants(u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), u, model)
    model.primitive(u)
    return u


def relax_substeps(u, mat, dt):
    """Number of RK4 sub-steps used by :func:`relax_substep` for this batch."""
    model = as_model(mat)
    if dt <= 0:
        return 0
    tau = model.relax_timescale(model.primitive(u))
    return max(1, math.ceil(dt / (RELAX_FRACTION * tau)))


def relax_substep(u, mat, dt, n_sub=None):
    """Integrate ``du/dt = full_source(u)`` over ``dt`` with sub-cycled RK4.

    The sub-step count is ``ceil(dt / (0.1 tau))`` with ``tau`` the shortest
    relaxation time of the batch. After every sub-step the ``rho y``
    components are rescaled so that each first integral ``y det Y`` is kept
    exactly (a projection onto the invariant manifold). If a stage leaves the admissible set, the
    sub-step is halved and the integration restarted, at most 10 times.
    Components with zero source (``rho``, ``rho F`` and, without body force,
    ``rho v``) are returned bitwise unchanged.

    Parameters
    ----------
    u : ndarray, shape (..., ncomp)
    mat : MaterialParams or model
    dt : float
    n_sub : int, optional
        Override the automatic sub-step count.
    """
    model = as_model(mat)
    u = np.asarray(u, dtype=float)
    if dt == 0:
        return u.copy()
    if n_sub is None:
        n_sub = relax_substeps(u, model, dt)
    else:
        model.primitive(u)
    last = None
    for _ in range(RELAX_RETRIES + 1):
        try:
            return _rk4_relax(u, model, dt, n_sub)
        except Inadmissible as exc:
            last = exc
            n_sub *= 2
    raise Inadmissible(last.reason, last.index,
                       f"relaxation left the admissible set after {RELAX_RETRIES} retries")


def interface_speeds(grid: Grid1D, model, s_cell=None):
    """Rusanov speeds ``max(s_L, s_R)`` at the ``N + 1`` interfaces."""
    if s_cell is None:
        s_cell = model.wave_speed(grid.u)
    se = grid.extend(s_cell)
    return np.maximum(se[:-1], se[1:])


def flux_divergence(grid: Grid1D, u, model, s_face):
    """``-(F_{i+1/2} - F_{i-1/2}) / dx`` with the Rusanov flux."""
    ue = grid.extend(u)
    fe = model.flux(ue, 1)
    fhat = 0.5 * (fe[:-1] + fe[1:]) - 0.5 * s_face[:, None] * (ue[1:] - ue[:-1])
    return -(fhat[1:] - fhat[:-1]) / grid.dx


def hyperbolic_step(grid: Grid1D, u, model, dt, s_face):
    """SSP-RK2 for the homogeneous system."""
    u1 = u + dt * flux_divergence(grid, u, model, s_face)
    check_cells(u1, model)
    u2 = u1 + dt * flux_divergence(grid, u1, model, s_face)
    return 0.5 * u + 0.5 * u2


def stable_dt(grid: Grid1D, model, cfl):
    """CFL time step and the interface speeds it was computed from."""
    s_cell = model.wave_speed(grid.u)
    s_face = interface_speeds(grid, model, s_cell)
    smax = float(np.max(s_face))
    dt = cfl * grid.dx / smax if smax > 0 else np.inf
    return dt, s_face


def step(grid: Grid1D, mat, cfl=0.5, dt_max=np.inf, relax=True, step_index=0, time=0.0):
    """Advance one Strang-split step.

    Returns
    -------
    grid : Grid1D
    dt : float
    diagnostics : tuple
        One :class:`RunDiagnostics` row evaluated on the new grid.
    """
    if not 0 < cfl <= 0.9:
        raise ValueError("cfl must lie in (0, 0.9]")
    model = as_model(mat)
    check_cells(grid.u, model)
    dt, s_face = stable_dt(grid, model, cfl)
    dt = min(dt, dt_max)
    if not dt >= DT_COLLAPSE:
        raise CFLCollapse(f"time step {dt:.3e} below {DT_COLLAPSE}")
    u = grid.u

    def relax_half(u):
        if not relax:
            return u
        try:
            return relax_substep(u, model, 0.5 * dt)
        except Inadmissible:
            check_cells(u, model)
            raise

    u = relax_half(u)
    u = hyperbolic_step(grid, u, model, dt, s_face)
    check_cells(u, model)
    u = relax_half(u)
    check_cells(u, model)
    new = grid.with_u(u)
    return new, dt, diagnostics_row(new, model, step_index + 1, time + dt, dt)


@dataclass
class RunResult:
    grid: Grid1D
    diagnostics: RunDiagnostics
    files: list
    steps: int
    time: float


def integrate(grid: Grid1D, mat, cfl, t_end, max_steps, callback=None, relax=True):
    """Step ``grid`` until ``t_end`` or ``max_steps``.

    ``callback(step_index, time, grid)`` runs after each step (and once for
    the initial grid with ``step_index = 0``). Diagnostics recorded so far are
    attached to any exception as ``exc.diagnostics``.
    """
    model = as_model(mat)
    diags = RunDiagnostics()
    diags.append(diagnostics_row(grid, model, 0, 0.0, 0.0))
    if callback is not None:
        callback(0, 0.0, grid)
    t, k = 0.0, 0
    try:
        while k < max_steps and t < t_end * (1 - 1e-14):
            grid, dt, row = step(grid, model, cfl, dt_max=t_end - t, relax=relax,
                                 step_index=k, time=t)
            t += dt
            k += 1
            diags.append(row)
            if callback is not None:
                callback(k, t, grid)
    except Exception as exc:
        exc.diagnostics = diags
        raise
    return grid, diags, k, t


def run(config, out_dir=None):
    """Run the scenario described by a :class:`~thermovisco.config.RunConfig`.

    Snapshots ``snapshot_<step>.csv`` and ``diagnostics.csv`` are written to
    ``out_dir`` (default: the configured output directory). On an abort the
    diagnostics gathered so far are flushed before the exception propagates.
    A :class:`RuntimeWarning` is issued when the initial state needs more
    than ``SUBSTEP_WARN`` relaxation sub-steps per time step.
    """
    from . import output, scenarios

    model = scenarios.build_model(config)
    grid = scenarios.initial_grid(config, model)
    dt0, _ = stable_dt(grid, model, config.cfl)
    n_sub = relax_substeps(grid.u, model, dt0)
    if n_sub > SUBSTEP_WARN:
        warnings.warn(f"relaxation needs {n_sub} sub-steps per step; the source is stiff "
                      "at these parameters", RuntimeWarning, stacklevel=2)
    out = output.OutputWriter(out_dir if out_dir is not None else config.output_dir,
                              config.snapshot_every, model, precision=config.precision)
    try:
        grid, diags, k, t = integrate(grid, model, config.cfl, config.t_end,
                                      config.max_steps, callback=out.snapshot)
    except Exception as exc:
        diags = getattr(exc, "diagnostics", None)
        if diags is not None:
            out.write_diagnostics(diags)
        raise
    out.snapshot(k, t, grid, force=True)
    out.write_diagnostics(diags)
    return RunResult(grid, diags, out.files, k, t)
