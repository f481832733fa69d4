"""Separability analysis of two-mode Gaussian states (Simon criterion).

A two-mode Gaussian state with covariance blocks A, B (one-mode) and C
(cross correlations) is separable if and only if

    S = det A * det B + (1/4 - |det C|)^2
        - Tr[A J C J B J C^T J] - (det A + det B)/4  >=  0,

with J the 2x2 symplectic matrix [[0, 1], [-1, 0]] and hbar = 1.  States
with det C >= 0 are always separable; det C < 0 is necessary for
entanglement.

For the mirror-symmetric environment family with
m^2 w^2 Dxx = Dpxpx, Dxpx = 0 and m^2 w^2 Dxy = Dpxpy, the score of the
*asymptotic* state collapses to a closed form in the diffusion
coefficients, and with Dxy = 0 the entangled region is an explicit open
window of the cross coefficient Dxpy.  The closed form agrees with the
full criterion wherever det C <= 0 (the regime the family is built to
probe); for det C > 0 the two differ by exactly det C because of the
absolute value above, and the state is separable regardless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import OscillatorParams, TwoModeEnvironment, validate_two_mode
from .errors import InvalidEnvironmentError, ParameterError
from .two_mode import (
    require_covariance4,
    require_matching_lam,
    steady_covariance_closed_form,
)

__all__ = [
    "BlockDecomposition",
    "SeparabilityResult",
    "ScanRecord",
    "block_decompose",
    "simon_score",
    "is_separable",
    "simon_score_closed_form",
    "entanglement_window",
    "scan_separability",
]

#: |S| below this value is reported as sitting on the separability boundary.
BOUNDARY_ATOL = 1e-12

#: Scan points closer than this (relative to the window scale) to a window
#: endpoint are reported as boundary-indeterminate.
ENDPOINT_MARGIN = 1e-9

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class BlockDecomposition:
    """2x2 blocks of a 4x4 covariance matrix: one-mode A and B, cross C."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def reassemble(self) -> np.ndarray:
        top = np.hstack([self.A, self.C])
        bottom = np.hstack([self.C.T, self.B])
        return np.vstack([top, bottom])


@dataclass(frozen=True)
class SeparabilityResult:
    separable: bool
    score: float
    boundary: bool

    @property
    def verdict(self) -> str:
        if self.boundary:
            return "separable-boundary"
        return "separable" if self.separable else "entangled"


@dataclass(frozen=True)
class ScanRecord:
    """One node of a separability scan over (Dxx, Dxpy)."""

    Dxx: float
    Dxpy: float
    score: float
    separable: bool
    boundary: bool
    in_window: bool | None
    status: str


def block_decompose(sigma: np.ndarray) -> BlockDecomposition:
    """Split a symmetric 4x4 covariance into its (A, B, C) blocks."""
    sigma = require_covariance4(sigma)
    return BlockDecomposition(A=sigma[:2, :2].copy(),
                              B=sigma[2:, 2:].copy(),
                              C=sigma[:2, 2:].copy())


def simon_score(sigma: np.ndarray) -> float:
    """Separability score S of a two-mode covariance matrix (hbar = 1).

    S >= 0 is necessary and sufficient for separability of the Gaussian
    state with this covariance.
    """
    blocks = block_decompose(sigma)
    A, B, C = blocks.A, blocks.B, blocks.C
    det_a = float(np.linalg.det(A))
    det_b = float(np.linalg.det(B))
    det_c = float(np.linalg.det(C))
    cross = float(np.trace(A @ _J @ C @ _J @ B @ _J @ C.T @ _J))
    return det_a * det_b + (0.25 - abs(det_c)) ** 2 - cross - 0.25 * (det_a + det_b)


def is_separable(sigma: np.ndarray) -> SeparabilityResult:
    """Separability verdict and score; |S| < 1e-12 is flagged as boundary."""
    score = simon_score(sigma)
    return SeparabilityResult(separable=score >= 0.0,
                              score=score,
                              boundary=abs(score) < BOUNDARY_ATOL)


def _require_special_family(env: TwoModeEnvironment, params: OscillatorParams):
    if not env.symmetric:
        raise InvalidEnvironmentError("closed-form score needs a mirror-symmetric environment")
    mw2 = (params.m * params.omega) ** 2
    scale = max(1.0, abs(env.Dxx), abs(env.Dpxpx), abs(env.Dxy), abs(env.Dpxpy)) * max(1.0, mw2)
    problems = []
    if abs(mw2 * env.Dxx - env.Dpxpx) > 1e-12 * scale:
        problems.append("m^2 w^2 Dxx != Dpxpx")
    if abs(env.Dxpx) > 1e-12 * scale:
        problems.append("Dxpx != 0")
    if abs(mw2 * env.Dxy - env.Dpxpy) > 1e-12 * scale:
        problems.append("m^2 w^2 Dxy != Dpxpy")
    if problems:
        raise InvalidEnvironmentError(
            "environment violates the closed-form score constraints: " + "; ".join(problems)
        )


def simon_score_closed_form(env: TwoModeEnvironment, params: OscillatorParams) -> float:
    """Separability score of the asymptotic state, in closed form.

    Valid for mirror-symmetric environments with m^2 w^2 Dxx = Dpxpx,
    Dxpx = 0, and m^2 w^2 Dxy = Dpxpy:

        S = (m^2 w^2 (Dxx^2 - Dxy^2)/lam^2 + Dxpy^2/q - 1/4)^2
            - 4 m^2 w^2 Dxx^2 Dxpy^2 / (lam^2 q),    q = lam^2 + w^2.

    Matches :func:`simon_score` of the asymptotic covariance whenever the
    cross-block determinant is <= 0 (always the case for Dxy = 0).
    """
    if params.hbar != 1.0:
        raise ParameterError(f"separability analysis requires hbar = 1, got {params.hbar!r}")
    require_matching_lam(env, params)
    _require_special_family(env, params)
    m, w, lam = params.m, params.omega, params.lam
    q = lam * lam + w * w
    mw2 = (m * w) ** 2
    head = mw2 * (env.Dxx**2 - env.Dxy**2) / lam**2 + env.Dxpy**2 / q - 0.25
    return head * head - 4.0 * mw2 * env.Dxx**2 * env.Dxpy**2 / (lam * lam * q)


def entanglement_window(Dxx: float, params: OscillatorParams) -> tuple[float, float]:
    """Open interval of Dxpy producing an entangled asymptotic state.

    Applies to the Dxy = 0 closed-form family.  The window is

        (sqrt(lam^2 + w^2) * (m w Dxx/lam - 1/2),
         sqrt(lam^2 + w^2) * (m w Dxx/lam + 1/2)),

    defined only when m w Dxx / lam >= 1/2 (the one-mode uncertainty
    bound on the asymptotic state).
    """
    if params.hbar != 1.0:
        raise ParameterError(f"separability analysis requires hbar = 1, got {params.hbar!r}")
    ratio = params.m * params.omega * Dxx / params.lam
    if ratio < 0.5:
        raise ParameterError(
            f"need m*omega*Dxx/lam >= 1/2 (one-mode uncertainty), got {ratio!r}"
        )
    root = math.sqrt(params.lam**2 + params.omega**2)
    return (root * (ratio - 0.5), root * (ratio + 0.5))


def scan_separability(env_template: TwoModeEnvironment, params: OscillatorParams,
                      dxx_values, dxpy_values) -> list[ScanRecord]:
    """Evaluate the asymptotic separability score over a (Dxx, Dxpy) grid.

    Each node rebuilds the template environment in the closed-form family
    (Dpxpx := m^2 w^2 Dxx, Dxpx := 0, Dpxpy := m^2 w^2 Dxy) with the
    node's Dxx and Dxpy, and scores the full asymptotic covariance.

    Records are emitted in row-major order, Dxx slowest.  ``in_window``
    is reported only for Dxy = 0 templates; the status column marks
    Gram-positivity violations ("invalid"), nodes whose Dxx is below the
    one-mode uncertainty bound ("invalid-window"), and nodes within
    1e-9 of a window endpoint ("boundary-indeterminate").  A node status
    never aborts the scan.
    """
    if params.hbar != 1.0:
        raise ParameterError(f"separability analysis requires hbar = 1, got {params.hbar!r}")
    require_matching_lam(env_template, params)
    mw2 = (params.m * params.omega) ** 2
    window_applies = env_template.Dxy == 0.0
    records = []
    for dxx in dxx_values:
        dxx = float(dxx)
        ratio = params.m * params.omega * dxx / params.lam
        window = None
        if window_applies and ratio >= 0.5:
            window = entanglement_window(dxx, params)
        for dxpy in dxpy_values:
            dxpy = float(dxpy)
            env = TwoModeEnvironment.symmetric_env(
                Dxx=dxx, Dxpx=0.0, Dpxpx=mw2 * dxx,
                Dxy=env_template.Dxy, Dxpy=dxpy, Dpxpy=mw2 * env_template.Dxy,
                lam=env_template.lam,
            )
            score = simon_score(steady_covariance_closed_form(env, params))
            separable = score >= 0.0
            boundary = abs(score) < BOUNDARY_ATOL
            in_window = None
            status = "ok"
            if window_applies:
                if window is None:
                    in_window = False
                    status = "invalid-window"
                else:
                    lo, hi = window
                    in_window = lo < dxpy < hi
                    margin = ENDPOINT_MARGIN * max(1.0, hi)
                    if min(abs(dxpy - lo), abs(dxpy - hi)) <= margin:
                        status = "boundary-indeterminate"
            if status == "ok" and not validate_two_mode(env).passed:
                status = "invalid"
            records.append(ScanRecord(Dxx=dxx, Dxpy=dxpy, score=score,
                                      separable=separable, boundary=boundary,
                                      in_window=in_window, status=status))
    return records
