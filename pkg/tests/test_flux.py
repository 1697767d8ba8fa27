import numpy as np
import pytest

from thermovisco import convexity, fd, flux, state as st
from thermovisco.errors import Inadmissible
from thermovisco.params import MaterialParams

MAT = MaterialParams()
I3 = np.eye(3)


def state(v=(0, 0, 0), q=(0, 0, 0), F=I3, Y=I3, rho=1.0, theta=1.0):
    return st.from_primitive(np.asarray(rho), 0.0, q, v, F, Y, theta=theta, mat=MAT)


def test_rest_state_flux():
    f = flux.physical_flux(state(), MAT, 1)
    expected = np.zeros(st.NCOMP)
    expected[st.RHO_V.start] = 0.4  # -T_11 = p
    np.testing.assert_allclose(f, expected, atol=1e-15)


def test_mass_and_deformation_blocks():
    f = flux.physical_flux(state(v=(1, 0, 0), rho=1.0), MAT, 1)
    assert f[st.RHO] == pytest.approx(1.0)
    Fb = f[st.RHO_F].reshape(3, 3)
    assert Fb[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert Fb[1, 1] == pytest.approx(1.0)
    np.testing.assert_allclose(Fb[0], 0.0, atol=1e-15)


def test_direction_argument():
    u = state(v=(0.1, 0.2, 0.3))
    for j in (1, 2, 3):
        assert flux.physical_flux(u, MAT, j)[st.RHO] == pytest.approx(0.1 * j)
    with pytest.raises(ValueError):
        flux.physical_flux(u, MAT, 4)


def test_heat_flux_block_uses_log_temperature():
    f = flux.physical_flux(state(theta=2.0), MAT, 1)
    assert f[st.RHO_Q.start] == pytest.approx(np.log(2.0))
    np.testing.assert_allclose(f[st.RHO_Q.start + 1:st.RHO_Q.stop], 0.0)


def test_slab_state_has_no_transverse_coupling():
    u = state(v=(0.4, 0, 0), q=(0.2, 0, 0), F=np.diag([0.8, 1.1, 0.9]), Y=np.diag([1.2, 0.7, 2.0]))
    f = flux.physical_flux(u, MAT, 1)
    np.testing.assert_array_equal(f[[3, 4, 6, 7]], 0.0)


def test_jacobian_linear_rows():
    u = convexity.sample_states(MAT, 20, seed=21)
    A = flux.numerical_jacobian(u, MAT, 1)
    e = np.zeros(st.NCOMP)
    e[st.RHO_V.start] = 1.0
    np.testing.assert_allclose(A[:, st.RHO, :], np.broadcast_to(e, (20, st.NCOMP)), atol=1e-9)


def test_jacobian_det_block_against_hand_derivative():
    u = convexity.sample_states(MAT, 20, seed=22)
    rho, ry, rv = u[:, st.RHO], u[:, st.RHO_DETY], u[:, st.RHO_V.start]
    ref = np.zeros((20, st.NCOMP))
    ref[:, st.RHO] = -ry * rv / rho ** 2
    ref[:, st.RHO_DETY] = rv / rho
    ref[:, st.RHO_V.start] = ry / rho
    A = flux.numerical_jacobian(u, MAT, 1)
    scale = np.abs(ref).max(axis=1, keepdims=True)
    np.testing.assert_allclose(A[:, st.RHO_DETY, :] / scale, ref / scale, atol=1e-7)
    A_rich = flux.numerical_jacobian(u, MAT, 1, richardson=True)
    np.testing.assert_allclose(A_rich[:, st.RHO_DETY, :] / scale, ref / scale, atol=1e-9)


@pytest.mark.parametrize("u", [state(), state(v=(0.3, 0, 0), Y=2 * I3)], ids=["rest", "stretched"])
def test_symmetrizer_reduced_passes(u):
    min_eig, asym = flux.symmetrizer_check(u, MAT, reduced=True)
    assert min_eig > 0
    assert asym < 1e-4


def test_symmetrizer_full_detects_involution_terms():
    # the Piola constraint rows make H A nonsymmetric without the involution
    _, asym = flux.symmetrizer_check(state(), MAT)
    assert asym > 1e-2


def test_symmetrizer_rejects_inadmissible():
    u = state()
    u[st.RHO] = -1.0
    with pytest.raises(Inadmissible):
        flux.symmetrizer_check(u, MAT)


def test_zero_flux_components_are_constant_flux():
    u = convexity.sample_states(MAT, 10, seed=23)
    for j in (1, 2, 3):
        idx = flux.zero_flux_components(j)
        np.testing.assert_allclose(flux.physical_flux(u, MAT, j)[:, idx], 0.0, atol=1e-13)


def test_entropy_flux_pairing():
    """``dQ/du = (d rho E~/du) A`` off the involution columns; only those columns differ."""
    u = convexity.sample_states(MAT, 10, seed=24)
    g = fd.jacobian(lambda w: st.math_entropy(w, MAT)[..., None], u, richardson=True)[:, 0, :]
    dQ = fd.jacobian(lambda w: flux.entropy_flux(w, MAT, 1)[..., None], u,
                     richardson=True)[:, 0, :]
    lhs = np.einsum("ni,nij->nj", g, flux.numerical_jacobian(u, MAT, 1, richardson=True))
    zero = flux.zero_flux_components(1)
    keep = [k for k in range(st.NCOMP) if k not in zero]
    rel = np.linalg.norm((lhs - dQ)[:, keep], axis=1) / np.linalg.norm(dQ[:, keep], axis=1)
    assert rel.max() < 1e-3
    assert np.abs(lhs - dQ)[:, zero].max() > 1e-2


def test_wave_speed_bounds():
    u = state()
    s = flux.max_wave_speed(u, u, MAT)
    assert s >= np.sqrt(0.56)
    assert s <= flux.SAFETY * flux.analytic_speed_bound(u, MAT) + 1e-12
    uR = state(v=(0.5, 0, 0), Y=2 * I3, theta=1.5)
    assert flux.max_wave_speed(u, uR, MAT) == flux.max_wave_speed(uR, u, MAT)
    assert flux.max_wave_speed(u, uR, MAT) >= flux.max_wave_speed(u, u, MAT)


def test_wave_speed_bounds_true_spectral_radius():
    u = convexity.sample_states(MAT, 20, seed=25)
    A = flux.numerical_jacobian(u, MAT, 1, richardson=True)
    radius = np.abs(np.linalg.eigvals(A)).max(axis=1)
    s = flux.cell_wave_speed(u, MAT, 1)
    assert np.all(s >= radius)
    assert np.all(s <= 1.5 * radius)
