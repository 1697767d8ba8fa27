"""
Small dense 3x3 tensor algebra.

Every function broadcasts over leading axes: a ``Mat3`` is an array of shape
``(..., 3, 3)`` and a packed ``SymMat3`` is an array of shape ``(..., 6)``
holding the upper triangle in the order (11, 12, 13, 22, 23, 33).
Matrix functions of SPD matrices (square root, inverse square root,
log-determinant) are spectral, built from a batched LAPACK symmetric
eigen-decomposition and never from truncated series. Their relative error
grows like ``eps * cond(s)``.
"""

from __future__ import annotations

import numpy as np

from .errors import NotSPD

#: (row, col) of each packed symmetric component
SYM_INDEX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_SYM_ROWS = np.array([i for i, _ in SYM_INDEX])
_SYM_COLS = np.array([j for _, j in SYM_INDEX])
# full (i, j) -> packed slot
_FULL_TO_PACKED = np.array([[0, 1, 2], [1, 3, 4], [2, 4, 5]])

IDENTITY = np.eye(3)
SYM_IDENTITY = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 1.0])


def sym_to_full(s):
    """Unpack ``(..., 6)`` symmetric storage into ``(..., 3, 3)``."""
    s = np.asarray(s, dtype=float)
    return s[..., _FULL_TO_PACKED]


def full_to_sym(m):
    """Pack the upper triangle of ``(..., 3, 3)`` into ``(..., 6)``.

    The input is symmetrized first, so slight roundoff asymmetry is averaged
    rather than discarded.
    """
    m = np.asarray(m, dtype=float)
    ms = 0.5 * (m + np.swapaxes(m, -1, -2))
    return ms[..., _SYM_ROWS, _SYM_COLS]


def sym(m):
    """Symmetric part of ``m``."""
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def transpose(m):
    return np.swapaxes(m, -1, -2)


def trace(m):
    return np.trace(m, axis1=-2, axis2=-1)


def frob2(m):
    """Squared Frobenius norm of a full matrix."""
    return np.sum(m * m, axis=(-2, -1))


def det(m):
    """Determinant by cofactor expansion along the first row."""
    m = np.asarray(m, dtype=float)
    a, b, c = m[..., 0, 0], m[..., 0, 1], m[..., 0, 2]
    d, e, f = m[..., 1, 0], m[..., 1, 1], m[..., 1, 2]
    g, h, i = m[..., 2, 0], m[..., 2, 1], m[..., 2, 2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def cofactor(m):
    """Cofactor matrix, so that ``m @ cofactor(m).T == det(m) * I``."""
    m = np.asarray(m, dtype=float)
    a, b, c = m[..., 0, 0], m[..., 0, 1], m[..., 0, 2]
    d, e, f = m[..., 1, 0], m[..., 1, 1], m[..., 1, 2]
    g, h, i = m[..., 2, 0], m[..., 2, 1], m[..., 2, 2]
    out = np.empty(m.shape)
    out[..., 0, 0] = e * i - f * h
    out[..., 0, 1] = -(d * i - f * g)
    out[..., 0, 2] = d * h - e * g
    out[..., 1, 0] = -(b * i - c * h)
    out[..., 1, 1] = a * i - c * g
    out[..., 1, 2] = -(a * h - b * g)
    out[..., 2, 0] = b * f - c * e
    out[..., 2, 1] = -(a * f - c * d)
    out[..., 2, 2] = a * e - b * d
    return out


def inv(m):
    """Inverse via the adjugate; caller is responsible for singularity checks."""
    return transpose(cofactor(m)) / det(m)[..., None, None]


def sym_eigen(s):
    """Eigenvalues (descending) and orthonormal eigenvectors (as columns).

    ``s`` is a full symmetric ``(..., 3, 3)`` array. Satisfies
    ``s == V @ diag(lam) @ V.T``.
    """
    s = sym(np.asarray(s, dtype=float))
    lam, vec = np.linalg.eigh(s)
    return lam[..., ::-1], vec[..., ::-1]


def sym_eigvals(s):
    """Eigenvalues (descending) of full symmetric ``(..., 3, 3)``."""
    return np.linalg.eigvalsh(sym(np.asarray(s, dtype=float)))[..., ::-1]


def from_eigen(lam, vec, fn):
    """``V diag(fn(lam)) V^T`` for an eigen-decomposition from :func:`sym_eigen`."""
    return sym((vec * fn(lam)[..., None, :]) @ transpose(vec))


def spd_eps(s):
    """Scale-aware SPD threshold ``1e-12 * (1 + |tr s|)``."""
    return 1e-12 * (1.0 + np.abs(trace(s)))


def is_spd(s):
    """Elementwise SPD test on full symmetric matrices."""
    s = np.asarray(s, dtype=float)
    finite = np.all(np.isfinite(s), axis=(-2, -1))
    safe = np.where(finite[..., None, None], s, IDENTITY)
    lam = sym_eigvals(safe)
    return finite & (lam[..., -1] > spd_eps(safe))


def _checked_eigen(s, check):
    lam, vec = sym_eigen(s)
    if check and np.any(~(lam[..., -1] > spd_eps(s))):
        raise NotSPD("matrix is not symmetric positive-definite")
    return lam, vec


def spd_function(s, fn, check=True):
    """Apply the scalar function ``fn`` to the eigenvalues of SPD ``s``."""
    return from_eigen(*_checked_eigen(s, check), fn)


def spd_inv_sqrt(s, check=True):
    """``s**(-1/2)`` for SPD ``s``; raises :class:`NotSPD` otherwise."""
    return spd_function(s, lambda lam: 1.0 / np.sqrt(lam), check)


def spd_sqrt(s, check=True):
    return spd_function(s, np.sqrt, check)


def spd_logdet(s):
    lam, _ = _checked_eigen(s, True)
    return np.sum(np.log(lam), axis=-1)


def sym_frob2(s6):
    """Squared Frobenius norm of a packed symmetric matrix."""
    s6 = np.asarray(s6, dtype=float)
    diag = s6[..., 0] ** 2 + s6[..., 3] ** 2 + s6[..., 5] ** 2
    off = s6[..., 1] ** 2 + s6[..., 2] ** 2 + s6[..., 4] ** 2
    return diag + 2.0 * off
