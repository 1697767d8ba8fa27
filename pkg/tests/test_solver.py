import numpy as np
import pytest

from thermovisco import closure, config, eos, scenarios, solver, state as st
from thermovisco.errors import CFLCollapse, InadmissibleCell
from thermovisco.params import MaterialParams

from oracles import isotropic_relaxation

MAT = MaterialParams()
MODEL = solver.MaxwellModel(MAT)
I3 = np.eye(3)


def rk4_oracle(u, mat, T, n):
    """Plain fixed-step RK4 on the relaxation ODE, no projection."""
    h = T / n
    for _ in range(n):
        k1 = closure.full_source(u, mat)
        k2 = closure.full_source(u + 0.5 * h * k1, mat)
        k3 = closure.full_source(u + 0.5 * h * k2, mat)
        k4 = closure.full_source(u + h * k3, mat)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def test_grid_validation():
    with pytest.raises(ValueError):
        solver.Grid1D(np.zeros((3, 24)))
    with pytest.raises(ValueError):
        solver.Grid1D(np.zeros((4, 24)), 1.0, 0.0)
    with pytest.raises(ValueError):
        solver.Grid1D(np.zeros((4, 24)), boundary="reflective")
    g = solver.Grid1D(np.zeros((4, 24)), 0.0, 2.0)
    assert g.dx == 0.5
    np.testing.assert_allclose(g.x, [0.25, 0.75, 1.25, 1.75])


def test_ghost_cells():
    a = np.arange(5.0)
    np.testing.assert_array_equal(solver.Grid1D(np.zeros((5, 24))).extend(a), [4, 0, 1, 2, 3, 4, 0])
    g = solver.Grid1D(np.zeros((5, 24)), boundary="transmissive")
    np.testing.assert_array_equal(g.extend(a), [0, 0, 1, 2, 3, 4, 4])


@pytest.mark.parametrize("boundary", ["periodic", "transmissive"])
def test_uniform_equilibrium_is_fixed_point(boundary):
    u = np.tile(st.equilibrium_state(MAT, v=(0.3, 0, 0)), (8, 1))
    grid = solver.Grid1D(u, boundary=boundary)
    new, dt, _ = solver.step(grid, MAT, 0.5)
    assert dt > 0
    np.testing.assert_array_equal(new.u, u)


def test_riemann_mass_conserved_per_step():
    u = np.concatenate([np.tile(st.equilibrium_state(MAT, rho=2.0, F=np.diag([0.5, 1, 1])), (10, 1)),
                        np.tile(st.equilibrium_state(MAT), (10, 1))])
    grid = solver.Grid1D(u)
    m0 = u[:, st.RHO].sum()
    for k in range(20):
        grid, _, _ = solver.step(grid, MAT, 0.5, step_index=k)
        assert abs(grid.u[:, st.RHO].sum() - m0) <= 1e-13 * m0


def test_step_errors():
    grid = solver.Grid1D(np.tile(st.equilibrium_state(MAT), (6, 1)))
    with pytest.raises(ValueError):
        solver.step(grid, MAT, 0.0)
    with pytest.raises(ValueError):
        solver.step(grid, MAT, 0.95)
    with pytest.raises(CFLCollapse):
        solver.step(grid, MAT, 0.5, dt_max=1e-15)
    bad = grid.u.copy()
    bad[3, st.RHO_Y] = [1, 0, 0, 1, 0, -1]
    with pytest.raises(InadmissibleCell) as err:
        solver.step(grid.with_u(bad), MAT, 0.5)
    assert err.value.index == 3
    assert err.value.reason == st.Reason.NOT_SPD


def test_relax_equilibrium_unchanged():
    u = st.equilibrium_state(MAT, rho=1.3, theta=1.0)
    np.testing.assert_array_equal(solver.relax_substep(u, MAT, 5.0), u)


@pytest.mark.parametrize("s0", [4.0, 0.25])
def test_relax_matches_isotropic_oracle(s0):
    u0 = st.from_primitive(np.asarray(1.0), 0.0, 0.0, 0.0, I3, s0 * I3, theta=1.0, mat=MAT)
    pv0 = st.to_primitive(u0, MAT)
    _, theta, trC, _ = isotropic_relaxation(s0, float(pv0.eta), float(pv0.y), 1.0, 10_000)[-1]
    pv = st.to_primitive(solver.relax_substep(u0, MAT, 1.0), MAT)
    assert pv.theta == pytest.approx(theta, rel=1e-6)
    assert pv.trC == pytest.approx(trC, rel=1e-6)


def test_relax_matches_rk4_oracle_anisotropic():
    rng = np.random.default_rng(30)
    a = rng.standard_normal((3, 3))
    u0 = st.from_primitive(np.asarray(1.2), 0.0, (0.3, -0.1, 0.2), 0.0, I3 + 0.1 * a,
                           I3 + 0.3 * a @ a.T, theta=1.1, mat=MAT)
    u = solver.relax_substep(u0, MAT, 0.2)
    ref = rk4_oracle(u0, MAT, 0.2, 1000)
    np.testing.assert_allclose(u, ref, rtol=1e-6, atol=1e-9)


def test_relax_heat_flux_decay_at_frozen_temperature():
    # a huge heat capacity freezes theta
    mat = MaterialParams(eos=eos.PolytropicGas(cv=1e9))
    u0 = st.from_primitive(np.asarray(1.0), 0.0, (1, 0, 0), 0.0, I3, I3, theta=1.0, mat=mat)
    u = solver.relax_substep(u0, mat, 0.7)
    np.testing.assert_allclose(u[st.RHO_Q], [np.exp(-0.7), 0, 0], rtol=1e-6, atol=1e-12)


def test_relax_keeps_invariants_exactly():
    rng = np.random.default_rng(31)
    F = I3 + 0.2 * rng.standard_normal((20, 3, 3))
    a = rng.standard_normal((20, 3, 3))
    Y = a @ np.swapaxes(a, 1, 2) + I3
    u0 = st.from_primitive(rng.uniform(0.5, 2, 20), 0.0, rng.normal(size=(20, 3)),
                           rng.normal(size=(20, 3)), F, Y, theta=1.2, mat=MAT)
    u = solver.relax_substep(u0, MAT, 1.0)
    np.testing.assert_array_equal(u[:, st.RHO], u0[:, st.RHO])
    np.testing.assert_array_equal(u[:, st.RHO_F], u0[:, st.RHO_F])
    np.testing.assert_array_equal(u[:, st.RHO_V], u0[:, st.RHO_V])
    r_det, r_rho = st.constraint_residuals(u, MAT)
    assert r_det.max() < 1e-10
    assert np.all(u[:, st.RHO_ETA] >= u0[:, st.RHO_ETA])


def test_relax_constraint_residuals_after_unit_time():
    u0 = st.from_primitive(np.asarray(1.0), 0.0, 0.0, 0.0, I3, 0.25 * I3, theta=1.0, mat=MAT)
    r_det, r_rho = st.constraint_residuals(solver.relax_substep(u0, MAT, 1.0), MAT)
    assert r_det < 1e-6 and r_rho < 1e-6


def test_substep_count():
    u = st.equilibrium_state(MAT)
    # rates 4K/zeta + 1/(tau0 theta) + 12 k theta/zeta = 1 + 1 + 3 at the baseline
    assert solver.relax_substeps(u, MAT, 1.0) == 50
    assert solver.relax_substeps(u, MAT, 0.0) == 0


def test_temperature_matches_diagnostic_integration():
    """theta(t) - theta(0) equals the time integral of the temperature equation's right side."""
    u = st.from_primitive(np.asarray(1.0), 0.0, (0.5, 0, 0), 0.0, I3, 0.25 * I3, theta=1.0,
                          mat=MAT)
    h, n = 0.01, 400
    thetas, rates = [], []
    for k in range(n + 1):
        pv = st.to_primitive(u, MAT)
        thetas.append(float(pv.theta))
        rhs = closure.temperature_rhs_diagnostic(pv, np.zeros(3), 0.0, MAT)
        rates.append(float(rhs / (pv.rho * MAT.eos.cv)))
        if k < n:
            u = solver.relax_substep(u, MAT, h)
    thetas, rates = np.array(thetas), np.array(rates)
    # composite Simpson over pairs of intervals
    simpson = np.cumsum(h / 3 * (rates[0:-2:2] + 4 * rates[1:-1:2] + rates[2::2]))
    np.testing.assert_allclose(thetas[2::2] - thetas[0], simpson, rtol=1e-6, atol=1e-9)


def _config(text):
    return config.parse_config(text)


def test_run_equilibrium_constant(tmp_path):
    cfg = _config("[grid]\nN = 16\n[initial]\npreset = uniform\n[run]\nt_end = 1.0\n"
                  "[output]\nsnapshot_every = 0\n")
    res = solver.run(cfg, out_dir=str(tmp_path))
    a = res.diagnostics.as_array()
    assert res.time == pytest.approx(1.0)
    for name in ("mass", "momentum1", "energy", "math_entropy", "phys_entropy", "min_theta"):
        col = res.diagnostics.column(name)
        np.testing.assert_array_equal(col, col[0])
    assert np.all(np.diff(a[:, 1]) > 0)
    assert (tmp_path / "diagnostics.csv").exists()
    assert (tmp_path / "snapshot_0.csv").exists()
    assert (tmp_path / f"snapshot_{res.steps}.csv").exists()


def test_run_is_deterministic(tmp_path):
    text = ("[grid]\nN = 32\n[initial]\npreset = riemann\n[run]\nmax_steps = 10\nt_end = 10\n")
    a = solver.run(_config(text), out_dir=str(tmp_path / "a"))
    b = solver.run(_config(text), out_dir=str(tmp_path / "b"))
    np.testing.assert_array_equal(a.grid.u, b.grid.u)
    assert (tmp_path / "a" / "diagnostics.csv").read_text() == \
        (tmp_path / "b" / "diagnostics.csv").read_text()


def test_riemann_run_conserves_mass_and_keeps_spd(tmp_path):
    text = "[grid]\nN = 64\n[initial]\npreset = riemann\n[run]\nmax_steps = 100\nt_end = 10\n"
    res = solver.run(_config(text), out_dir=str(tmp_path))
    mass = res.diagnostics.column("mass")
    assert np.max(np.abs(mass - mass[0])) <= 1e-12 * mass[0]
    assert res.diagnostics.column("min_eig_Y").min() > 0
    S = res.diagnostics.column("phys_entropy")
    assert np.all(np.diff(S) >= -1e-10 * abs(S[0]))


def test_abort_flushes_diagnostics(tmp_path):
    cfg = _config("[grid]\nN = 8\n[initial]\npreset = uniform\n[run]\nt_end = 1.0\n")
    grid = scenarios.initial_grid(cfg, MODEL)

    def explode(k, t, g):
        if k == 2:
            raise RuntimeError("stop")

    with pytest.raises(RuntimeError) as err:
        solver.integrate(grid, MODEL, 0.5, 1.0, 10, callback=explode)
    assert len(err.value.diagnostics) == 3


def test_diagnostics_time_monotone():
    d = solver.RunDiagnostics()
    d.append((0, 0.0) + (0.0,) * 13)
    with pytest.raises(ValueError):
        d.append((1, -1.0) + (0.0,) * 13)


def test_wave_speed_reused_inside_step():
    grid = scenarios.initial_grid(_config("[grid]\nN = 16\n[initial]\npreset = smooth-wave\n"),
                                  MODEL)
    dt, s_face = solver.stable_dt(grid, MODEL, 0.5)
    assert s_face.shape == (17,)
    assert dt == pytest.approx(0.5 * grid.dx / s_face.max())
    assert np.all(s_face > 0)
