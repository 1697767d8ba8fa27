"""
Batched central finite differences.

All perturbed points of one derivative are stacked and passed to the target
function in a single call, so vectorized targets pay the Python overhead
once. A target that raises :class:`~thermovisco.errors.Inadmissible` on a
perturbed point turns into :class:`~thermovisco.errors.StepTooLarge`.
"""

from __future__ import annotations

import numpy as np

from .errors import Inadmissible, StepTooLarge


def steps(u, rel):
    """Per-coordinate step ``rel * (1 + |u_i|)``."""
    return rel * (1.0 + np.abs(u))


def _call(fun, pts):
    try:
        return np.asarray(fun(pts), dtype=float)
    except Inadmissible as exc:
        raise StepTooLarge(f"finite-difference point left the admissible set ({exc})") from exc


def jacobian(fun, u, rel=1e-6, richardson=False, forward=False):
    """Central (or forward) difference Jacobian of a vector function.

    Parameters
    ----------
    fun : callable
        Maps ``(..., n)`` to ``(..., m)``.
    u : ndarray, shape (..., n)
    rel : float
        Relative step.
    richardson : bool
        Combine steps ``h`` and ``h/2`` to cancel the ``O(h^2)`` error.
    forward : bool
        First-order forward differences; ``n + 1`` evaluations instead of
        ``2 n``. Ignores ``richardson``.

    Returns
    -------
    ndarray, shape (..., m, n)
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    h = steps(u, rel)
    if forward:
        E = np.eye(n) * h[..., None, :]
        pts = np.concatenate([u[..., None, :], u[..., None, :] + E], axis=-2)
        vals = _call(fun, pts)
        d = (vals[..., 1:, :] - vals[..., :1, :]) / h[..., :, None]
        return np.swapaxes(d, -1, -2)

    def central(h):
        E = np.eye(n) * h[..., None, :]  # (..., n, n), row k perturbs coordinate k
        pts = np.concatenate([u[..., None, :] + E, u[..., None, :] - E], axis=-2)
        vals = _call(fun, pts)  # (..., 2n, m)
        d = (vals[..., :n, :] - vals[..., n:, :]) / (2.0 * h[..., :, None])
        return np.swapaxes(d, -1, -2)

    J = central(h)
    if richardson:
        J = (4.0 * central(0.5 * h) - J) / 3.0
    return J


def hessian(fun, u, rel=1e-4, richardson=True):
    """Central-difference Hessian of a scalar function.

    Uses the four-point stencil ``f(u +- h_i e_i +- h_j e_j)`` for every pair
    ``i <= j`` (the diagonal uses steps ``+-2 h_i`` and the centre value).

    Parameters
    ----------
    fun : callable
        Maps ``(..., n)`` to ``(...)``.
    u : ndarray, shape (..., n)
    rel : float
        Relative step.
    richardson : bool
        One Richardson refinement with step ``h/2``.

    Returns
    -------
    ndarray, shape (..., n, n), symmetric.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    iu, ju = np.triu_indices(n)
    h0 = steps(u, rel)

    def central(h):
        Hi = np.zeros(u.shape[:-1] + (len(iu), n))
        Hj = np.zeros_like(Hi)
        rows = np.arange(len(iu))
        Hi[..., rows, iu] = h[..., iu]
        Hj[..., rows, ju] += h[..., ju]
        base = u[..., None, :]
        pts = np.concatenate([
            base + Hi + Hj, base + Hi - Hj, base - Hi + Hj, base - Hi - Hj,
        ], axis=-2)
        vals = _call(fun, pts)
        k = len(iu)
        fpp, fpm, fmp, fmm = (vals[..., s * k:(s + 1) * k] for s in range(4))
        d = (fpp - fpm - fmp + fmm) / (4.0 * h[..., iu] * h[..., ju])
        H = np.zeros(u.shape[:-1] + (n, n))
        H[..., iu, ju] = d
        H[..., ju, iu] = d
        return H

    H = central(h0)
    if richardson:
        H = (4.0 * central(0.5 * h0) - H) / 3.0
    return H
