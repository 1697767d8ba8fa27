import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs
from hypothesis.extra import numpy as hnp

from thermovisco import tensor
from thermovisco.errors import NotSPD

finite = hs.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)
mat3 = hnp.arrays(np.float64, (3, 3), elements=finite)


def leibniz_det(m):
    """Permutation-sum determinant."""
    total = 0.0
    for perm in itertools.permutations(range(3)):
        inversions = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
        total += (-1) ** inversions * m[0, perm[0]] * m[1, perm[1]] * m[2, perm[2]]
    return total


def random_spd(rng, n=None):
    shape = (3, 3) if n is None else (n, 3, 3)
    a = rng.standard_normal(shape)
    return a @ np.swapaxes(a, -1, -2) + 0.1 * np.eye(3)


def test_det_examples():
    assert tensor.det(np.eye(3)) == 1.0
    assert tensor.det(np.diag([2.0, 3.0, 4.0])) == 24.0


@given(mat3)
def test_det_matches_leibniz(m):
    ref = leibniz_det(m)
    assert abs(tensor.det(m) - ref) <= 1e-12 * max(1.0, np.abs(m).max() ** 3)


def test_cofactor_examples():
    np.testing.assert_array_equal(tensor.cofactor(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(tensor.cofactor(np.diag([2.0, 3.0, 4.0])),
                                  np.diag([12.0, 8.0, 6.0]))


@given(mat3)
def test_cofactor_defining_identity(m):
    lhs = m @ tensor.cofactor(m).T
    scale = max(1.0, np.abs(m).max() ** 3)
    np.testing.assert_allclose(lhs, tensor.det(m) * np.eye(3), atol=1e-12 * scale)


@given(mat3)
def test_det_of_cofactor_is_det_squared(m):
    scale = max(1.0, np.abs(m).max() ** 6)
    assert abs(tensor.det(tensor.cofactor(m)) - tensor.det(m) ** 2) <= 1e-12 * scale


def test_spd_inv_sqrt_examples():
    np.testing.assert_allclose(tensor.spd_inv_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(tensor.spd_inv_sqrt(np.diag([4.0, 9.0, 16.0])),
                               np.diag([0.5, 1 / 3, 0.25]), rtol=1e-14, atol=1e-15)


def test_spd_inv_sqrt_random_batch():
    s = random_spd(np.random.default_rng(1), 200)
    r = tensor.spd_inv_sqrt(s)
    np.testing.assert_allclose(r @ r @ s, np.broadcast_to(np.eye(3), s.shape), atol=1e-10)
    assert np.all(tensor.is_spd(r))
    # r^{-2} reconstructs s
    back = tensor.inv(r @ r)
    rel = np.linalg.norm(back - s, axis=(1, 2)) / np.linalg.norm(s, axis=(1, 2))
    assert rel.max() < 1e-10


def test_spd_inv_sqrt_repeated_eigenvalues():
    s = np.diag([2.0, 2.0, 5.0])
    np.testing.assert_allclose(tensor.spd_inv_sqrt(s), np.diag(1 / np.sqrt([2.0, 2.0, 5.0])),
                               rtol=1e-14)


@pytest.mark.parametrize("s", [np.diag([1.0, 1.0, -0.1]), np.zeros((3, 3)),
                               np.diag([1.0, 1.0, 1e-14])])
def test_spd_inv_sqrt_rejects_non_spd(s):
    with pytest.raises(NotSPD):
        tensor.spd_inv_sqrt(s)


def test_sym_eigen_examples():
    lam, _ = tensor.sym_eigen(np.eye(3))
    np.testing.assert_allclose(lam, [1, 1, 1])
    lam, vec = tensor.sym_eigen(np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_allclose(lam, [3, 2, 1])
    np.testing.assert_allclose(np.abs(vec), np.eye(3)[:, [1, 2, 0]], atol=1e-15)


def test_sym_eigen_reconstruction():
    a = np.random.default_rng(2).standard_normal((100, 3, 3))
    s = a + np.swapaxes(a, 1, 2)
    lam, V = tensor.sym_eigen(s)
    assert np.all(np.diff(lam, axis=-1) <= 0)
    np.testing.assert_allclose(V @ np.swapaxes(V, 1, 2),
                               np.broadcast_to(np.eye(3), s.shape), atol=1e-12)
    np.testing.assert_allclose((V * lam[:, None, :]) @ np.swapaxes(V, 1, 2), s, atol=1e-12)


def test_sym_eigvals_consistent_with_sym_eigen():
    a = np.random.default_rng(3).standard_normal((500, 3, 3))
    s = a + np.swapaxes(a, 1, 2)
    np.testing.assert_allclose(tensor.sym_eigvals(s), tensor.sym_eigen(s)[0], atol=1e-12)
    np.testing.assert_allclose(np.sum(tensor.sym_eigvals(s), axis=-1), tensor.trace(s), atol=1e-12)


@settings(max_examples=50)
@given(hnp.arrays(np.float64, (6,), elements=finite))
def test_packed_round_trip(s6):
    full = tensor.sym_to_full(s6)
    np.testing.assert_array_equal(full, full.T)
    np.testing.assert_array_equal(tensor.full_to_sym(full), s6)
    assert np.isclose(tensor.sym_frob2(s6), tensor.frob2(full))


def test_spd_threshold_is_scale_aware():
    assert tensor.spd_eps(np.eye(3)) == pytest.approx(4e-12)
    assert tensor.is_spd(1e6 * np.eye(3))
    assert not tensor.is_spd(np.diag([1e6, 1e6, 1e-7]))
    assert not tensor.is_spd(np.full((3, 3), np.nan))


@pytest.mark.parametrize("cond", [1e4, 1e8, 1e10])
def test_spd_inv_sqrt_ill_conditioned(cond):
    rng = np.random.default_rng(4)
    Q, _ = np.linalg.qr(rng.standard_normal((100, 3, 3)))
    lam = np.stack([np.ones(100), np.exp(rng.uniform(0, np.log(cond), 100)),
                    np.full(100, cond)], axis=-1)
    s = (Q * lam[:, None, :]) @ np.swapaxes(Q, 1, 2)
    ref = (Q * lam[:, None, :] ** -0.5) @ np.swapaxes(Q, 1, 2)
    err = (np.linalg.norm(tensor.spd_inv_sqrt(s) - ref, axis=(1, 2))
           / np.linalg.norm(ref, axis=(1, 2)))
    assert err.max() < 1e3 * np.finfo(float).eps * cond
