"""Continuous Lyapunov equation solver by Kronecker vectorization.

Solves Y S + S Y^T = -2 D for the stationary covariance S of a linear
diffusion with Hurwitz drift Y.  At the 2x2 and 4x4 sizes used here a
dense solve of the vectorized n^2 x n^2 system is exact to machine
precision and needs no factorization tricks.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError

__all__ = ["steady_covariance", "residual"]


def steady_covariance(Y: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Stationary covariance of dS/dt = Y S + S Y^T + 2 D.

    Parameters
    ----------
    Y:
        (n, n) drift matrix, all eigenvalues in the open left half-plane.
    D:
        (n, n) symmetric diffusion matrix.

    Returns
    -------
    (n, n) symmetric solution of Y S + S Y^T = -2 D.

    Raises
    ------
    SingularSystemError
        If the vectorized linear system is singular (cannot happen for a
        Hurwitz drift; guards against malformed input).
    """
    Y = np.asarray(Y, dtype=float)
    D = np.asarray(D, dtype=float)
    n = Y.shape[0]
    eye = np.eye(n)
    K = np.kron(eye, Y) + np.kron(Y, eye)
    rhs = -2.0 * D.flatten(order="F")
    try:
        vec = np.linalg.solve(K, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("vectorized Lyapunov system is singular") from exc
    if not np.all(np.isfinite(vec)):
        raise SingularSystemError("Lyapunov solution is not finite")
    S = vec.reshape((n, n), order="F")
    return 0.5 * (S + S.T)


def residual(Y: np.ndarray, S: np.ndarray, D: np.ndarray) -> float:
    """Max-norm residual of Y S + S Y^T + 2 D."""
    R = np.asarray(Y) @ S + S @ np.asarray(Y).T + 2.0 * np.asarray(D)
    return float(np.abs(R).max())
