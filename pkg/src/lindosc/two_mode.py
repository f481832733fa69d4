"""Covariance dynamics of two independent oscillators in a common bath.

The two oscillators are identical, uncoupled, and share one environment;
the cross-diffusion coefficients are the only channel correlating them.
All second moments are collected in a 4x4 covariance matrix in the
canonical ordering (x, p_x, y, p_y), which evolves as

    dS/dt = Y S + S Y^T + 2 D,

with a block-diagonal drift Y (two copies of [[-lam, 1/m],
[-m*omega**2, -lam]]; the single-mode friction asymmetry mu has no place
in this model) and the symmetric diffusion matrix D of the environment
coefficients.  The exact solution is

    S(t) = M(t) (S(0) - S_inf) M(t)^T + S_inf,   M(t) = exp(t*Y),

where S_inf solves the Lyapunov equation Y S + S Y^T = -2 D.  For
mirror-symmetric environments every entry of S_inf also has a closed
form, which doubles as an independent cross-check of the Lyapunov route.

This module requires hbar = 1 (the separability analysis built on top of
it is normalized that way).
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np

from . import lyapunov
from .core import OscillatorParams, TwoModeEnvironment
from .errors import InvalidEnvironmentError, ParameterError, ShapeError

__all__ = [
    "drift_matrix",
    "diffusion_matrix",
    "propagator",
    "steady_covariance",
    "steady_covariance_closed_form",
    "propagate_covariance",
    "det_cross_block",
    "physicality_min_eigenvalue",
    "require_covariance4",
    "require_matching_lam",
]

SYMMETRY_ATOL = 1e-12


def _require_hbar_one(params: OscillatorParams):
    if params.hbar != 1.0:
        raise ParameterError(
            f"two-mode operations are normalized to hbar = 1, got hbar={params.hbar!r}"
        )


def require_covariance4(sigma: np.ndarray) -> np.ndarray:
    """Check shape and symmetry of a 4x4 covariance matrix, return as float array."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got shape {sigma.shape}")
    scale = max(1.0, float(np.abs(sigma).max()))
    asym = float(np.abs(sigma - sigma.T).max())
    if asym > SYMMETRY_ATOL * scale:
        raise ShapeError(f"covariance matrix is not symmetric (max asymmetry {asym:.3e})")
    return sigma


def _warn_mu_ignored(params: OscillatorParams):
    if params.mu != 0.0:
        warnings.warn(
            "the two-mode model has no friction asymmetry; params.mu is ignored",
            stacklevel=3,
        )


def drift_matrix(params: OscillatorParams) -> np.ndarray:
    """Block-diagonal 4x4 drift; eigenvalues -lam +/- i*omega, twice."""
    _warn_mu_ignored(params)
    _require_hbar_one(params)
    block = np.array([
        [-params.lam, 1.0 / params.m],
        [-params.m * params.omega**2, -params.lam],
    ])
    Y = np.zeros((4, 4))
    Y[:2, :2] = block
    Y[2:, 2:] = block
    return Y


def diffusion_matrix(env: TwoModeEnvironment) -> np.ndarray:
    """Symmetric 4x4 diffusion matrix in (x, p_x, y, p_y) ordering.

    Gram-positivity of the environment is reported by
    ``core.validate_two_mode`` and deliberately not enforced here: the
    cross-diffusion regimes that entangle the asymptotic state generally
    violate it, and evaluating them is the point of the analysis.
    """
    return np.array([
        [env.Dxx, env.Dxpx, env.Dxy, env.Dxpy],
        [env.Dxpx, env.Dpxpx, env.Dypx, env.Dpxpy],
        [env.Dxy, env.Dypx, env.Dyy, env.Dypy],
        [env.Dxpy, env.Dpxpy, env.Dypy, env.Dpypy],
    ])


def propagator(params: OscillatorParams, t: float) -> np.ndarray:
    """Closed-form M(t) = exp(t*Y), per 2x2 block
    exp(-lam*t) * (cos(omega*t)*I + sin(omega*t)/omega * [[0, 1/m], [-m*omega**2, 0]])."""
    _require_hbar_one(params)
    _warn_mu_ignored(params)
    if not (math.isfinite(t) and t >= 0.0):
        raise ParameterError(f"t must be finite and >= 0, got {t!r}")
    m, omega = params.m, params.omega
    rot = np.array([[0.0, 1.0 / m], [-m * omega**2, 0.0]])
    block = math.exp(-params.lam * t) * (
        math.cos(omega * t) * np.eye(2) + (math.sin(omega * t) / omega) * rot
    )
    M = np.zeros((4, 4))
    M[:2, :2] = block
    M[2:, 2:] = block
    return M


def steady_covariance(Y: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Asymptotic covariance from the Lyapunov equation Y S + S Y^T = -2 D."""
    return lyapunov.steady_covariance(Y, D)


def _require_symmetric_env(env: TwoModeEnvironment):
    if not env.symmetric:
        raise InvalidEnvironmentError(
            "closed-form asymptotics need a mirror-symmetric environment "
            "(build one with TwoModeEnvironment.symmetric_env)"
        )


def require_matching_lam(env: TwoModeEnvironment, params: OscillatorParams):
    if env.lam != params.lam:
        raise ParameterError(
            f"environment and oscillator disagree on lam: {env.lam!r} vs {params.lam!r}"
        )


def steady_covariance_closed_form(env: TwoModeEnvironment,
                                  params: OscillatorParams) -> np.ndarray:
    """Asymptotic covariance of a mirror-symmetric environment, entry by entry.

    Both one-mode blocks are equal and the cross block is symmetric; the
    six independent entries are rational in the diffusion coefficients:

        s_xy   = (m^2 (2 lam^2 + w^2) Dxy + 2 m lam Dxpy + Dpxpy) / (2 m^2 lam q)
        s_xpy  = (-m^2 w^2 Dxy + 2 m lam Dxpy + Dpxpy) / (2 m q)
        s_pxpy = (m^2 w^4 Dxy - 2 m w^2 lam Dxpy + (2 lam^2 + w^2) Dpxpy) / (2 lam q)

    with q = lam^2 + w^2, and the same three forms with (Dxx, Dxpx, Dpxpx)
    for the one-mode entries.
    """
    _require_hbar_one(params)
    _require_symmetric_env(env)
    require_matching_lam(env, params)
    m, w, lam = params.m, params.omega, params.lam
    q = lam * lam + w * w

    def triple(d_qq, d_qp, d_pp):
        s_qq = (m * m * (2.0 * lam * lam + w * w) * d_qq + 2.0 * m * lam * d_qp + d_pp) \
            / (2.0 * m * m * lam * q)
        s_qp = (-m * m * w * w * d_qq + 2.0 * m * lam * d_qp + d_pp) / (2.0 * m * q)
        s_pp = (m * m * w**4 * d_qq - 2.0 * m * w * w * lam * d_qp
                + (2.0 * lam * lam + w * w) * d_pp) / (2.0 * lam * q)
        return s_qq, s_qp, s_pp

    sxx, sxpx, spxpx = triple(env.Dxx, env.Dxpx, env.Dpxpx)
    sxy, sxpy, spxpy = triple(env.Dxy, env.Dxpy, env.Dpxpy)
    return np.array([
        [sxx, sxpx, sxy, sxpy],
        [sxpx, spxpx, sxpy, spxpy],
        [sxy, sxpy, sxx, sxpx],
        [sxpy, spxpy, sxpx, spxpx],
    ])


@lru_cache(maxsize=128)
def _steady_covariance_cached(env: TwoModeEnvironment,
                              params: OscillatorParams) -> np.ndarray:
    block = np.array([
        [-params.lam, 1.0 / params.m],
        [-params.m * params.omega**2, -params.lam],
    ])
    Y = np.zeros((4, 4))
    Y[:2, :2] = block
    Y[2:, 2:] = block
    S = steady_covariance(Y, diffusion_matrix(env))
    S.setflags(write=False)
    return S


def propagate_covariance(sigma0: np.ndarray, env: TwoModeEnvironment,
                         params: OscillatorParams, t: float) -> np.ndarray:
    """Exact covariance at time t >= 0 from the initial covariance sigma0.

    The stationary covariance is computed once per (env, params) pair and
    cached by value equality; concurrent repeated computation is harmless
    because the cached value is deterministic.
    """
    sigma0 = require_covariance4(sigma0)
    require_matching_lam(env, params)
    s_inf = _steady_covariance_cached(env, params)
    M = propagator(params, t)
    s = M @ (sigma0 - s_inf) @ M.T + s_inf
    return 0.5 * (s + s.T)


def det_cross_block(env: TwoModeEnvironment, params: OscillatorParams) -> float:
    """Determinant of the asymptotic cross-covariance block.

    det C = ((m w^2 Dxy + Dpxpy/m)^2 + 4 lam^2 (Dxy Dpxpy - Dxpy^2))
            / (4 lam^2 (lam^2 + w^2)).

    Negative values are the precondition for asymptotic entanglement.
    """
    _require_hbar_one(params)
    _require_symmetric_env(env)
    require_matching_lam(env, params)
    m, w, lam = params.m, params.omega, params.lam
    q = lam * lam + w * w
    lead = m * w * w * env.Dxy + env.Dpxpy / m
    return (lead * lead + 4.0 * lam * lam * (env.Dxy * env.Dpxpy - env.Dxpy**2)) \
        / (4.0 * lam * lam * q)


def physicality_min_eigenvalue(sigma: np.ndarray) -> float:
    """Optional diagnostic: minimum eigenvalue of sigma + (i/2) Omega.

    Omega is the symplectic form of the (x, p_x, y, p_y) ordering; a
    nonnegative result (up to rounding) means sigma is a bona fide
    two-mode quantum covariance matrix.  Nothing in this package enforces
    it; callers concerned about complete positivity of their inputs can.
    """
    sigma = require_covariance4(sigma)
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    Omega = np.zeros((4, 4))
    Omega[:2, :2] = J
    Omega[2:, 2:] = J
    return float(np.linalg.eigvalsh(sigma + 0.5j * Omega)[0])
