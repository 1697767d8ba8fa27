import numpy as np
import pytest

from thermovisco import convexity, eos, state as st, tensor
from thermovisco.errors import Inadmissible
from thermovisco.params import MaterialParams

MAT = MaterialParams()
I3 = np.eye(3)


def baseline(eta=-0.75, v=(0, 0, 0), q=(0, 0, 0), Y=I3, y=1.0, rho=1.0, F=I3, mat=MAT):
    return st.from_primitive(np.asarray(rho), eta, q, v, F, Y, y)


def test_layout_has_24_components():
    assert st.NCOMP == 24
    assert baseline().shape == (24,)
    assert len(st.COMPONENT_NAMES) == 24


def test_baseline_primitives():
    pv = st.to_primitive(baseline(), MAT)
    assert pv.theta == pytest.approx(1.0, rel=1e-14)
    assert pv.p == pytest.approx(0.4, rel=1e-14)
    np.testing.assert_allclose(pv.C, I3, atol=1e-15)
    assert pv.E_tilde == pytest.approx(3.25, rel=1e-14)


def test_conformation_from_metric():
    pv = st.to_primitive(baseline(Y=4 * I3, y=1 / 64), MAT)
    np.testing.assert_allclose(pv.C, 0.5 * I3, atol=1e-15)


def test_temperature_uses_shifted_entropy():
    u = convexity.sample_states(MAT, 50, seed=4)
    pv = st.to_primitive(u, MAT)
    # shifted argument with det C replaced by (rho_R/rho)^2 y^(1/2)
    log_det = np.log((MAT.rho_R / pv.rho) ** 2 * np.sqrt(pv.y))
    eta_t = pv.eta + 0.5 * MAT.alpha * (MAT.K1 * pv.trC - MAT.k_B * log_det)
    np.testing.assert_allclose(pv.theta, MAT.eos.temperature(pv.rho, eta_t), rtol=1e-12)
    np.testing.assert_allclose(pv.p, MAT.eos.pressure(pv.rho, eta_t), rtol=1e-12)
    C = pv.F @ tensor.spd_inv_sqrt(pv.Y) @ np.swapaxes(pv.F, 1, 2)
    np.testing.assert_allclose(pv.C, C, rtol=1e-10, atol=1e-12)


def test_admissibility_examples():
    assert st.is_admissible(baseline(), MAT).ok
    bad = baseline()
    bad[st.RHO] = -1.0
    res = st.is_admissible(bad, MAT)
    assert not res.ok and res.reason == st.Reason.NEGATIVE_DENSITY
    res = st.is_admissible(baseline(Y=np.diag([1.0, 1.0, -0.1]), y=1.0), MAT)
    assert not res.ok and res.reason == st.Reason.NOT_SPD
    res = st.is_admissible(baseline(y=-1.0), MAT)
    assert res.reason == st.Reason.NONPOSITIVE_DETY
    bad = baseline()
    bad[st.RHO_ETA] = np.nan
    assert st.is_admissible(bad, MAT).reason == st.Reason.NON_FINITE


def test_admissibility_fenep_and_nasg():
    fenep = MaterialParams(elastic=eos.FENEP(b_ext=1.5))
    # C = I gives tr C = 3 >= b^2 = 2.25
    assert st.is_admissible(baseline(), fenep).reason == st.Reason.EXTENSION
    nasg = MaterialParams(eos=eos.NASG(b=0.5))
    assert st.is_admissible(baseline(rho=2.0, F=np.diag([0.5, 1, 1])), nasg).reason \
        == st.Reason.COVOLUME


def test_batch_reports_first_offender():
    u = np.stack([baseline()] * 4)
    u[2, st.RHO] = -1.0
    res = st.is_admissible(u, MAT)
    assert res.index == (2,)
    codes = st.admissibility_codes(u, MAT)
    assert [c is st.Reason.OK for c in codes] == [True, True, False, True]
    with pytest.raises(Inadmissible):
        st.to_primitive(u, MAT)


def test_total_energy_examples():
    assert st.total_energy(baseline(), MAT) == pytest.approx(1.75, rel=1e-14)
    assert st.total_energy(baseline(v=(1, 0, 0)), MAT) == pytest.approx(2.25, rel=1e-14)
    assert st.total_energy(baseline(v=(1, 0, 0), q=(1, 0, 0)), MAT) == pytest.approx(2.75)


def test_math_entropy_examples():
    assert st.math_entropy(baseline(), MAT) == pytest.approx(3.25, rel=1e-14)
    u = baseline(Y=2 * I3, y=1 / 8)
    assert st.math_entropy(u, MAT) == pytest.approx(st.total_energy(u, MAT) + 6.0, rel=1e-14)
    mat0 = MaterialParams(e_ref=0.0)
    assert st.math_entropy(u, mat0) == st.total_energy(u, mat0)


def test_constraint_residuals():
    r = st.constraint_residuals(baseline(), MAT)
    assert r == (0.0, 0.0) or np.allclose(r, 0.0, atol=1e-15)
    r_det, _ = st.constraint_residuals(baseline(y=2.0), MAT)
    assert r_det == pytest.approx(1.0)
    _, r_rho = st.constraint_residuals(baseline(F=np.diag([2.0, 1, 1])), MAT)
    assert r_rho == pytest.approx(1.0)


def test_primitive_round_trip():
    u = convexity.sample_states(MAT, 200, seed=5)
    pv = st.to_primitive(u, MAT)
    back = st.from_primitive(pv.rho, pv.eta, pv.q, pv.v, pv.F, pv.Y, pv.y)
    np.testing.assert_allclose(back, u, rtol=1e-14, atol=1e-14 * np.abs(u).max())


def test_from_primitive_with_temperature():
    u = st.from_primitive(np.array([0.7, 1.3]), 0.0, 0.0, 0.0, I3, 2 * I3, theta=1.7, mat=MAT)
    np.testing.assert_allclose(st.to_primitive(u, MAT).theta, 1.7, rtol=1e-13)


def test_equilibrium_state_is_baseline():
    u = st.equilibrium_state(MAT)
    np.testing.assert_allclose(u, baseline(), atol=1e-15)


def test_admissible_set_is_convex():
    a = convexity.sample_states(MAT, 100, seed=6)
    b = convexity.sample_states(MAT, 100, seed=7)
    assert st.is_admissible(0.5 * (a + b), MAT).ok
