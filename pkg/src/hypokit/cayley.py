"""Scaled Cayley transform: implicit-midpoint discretization and its inverse.

The midpoint rule with step tau applied to x' = -Bx propagates by
B_d = (I + (tau/2)B)^(-1) (I - (tau/2)B), the scaled Cayley transform of
-B.  The transform maps the open left half-plane onto the open unit disk,
preserves exponential stability both ways, and preserves the
hypocoercivity/hypocontractivity index.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coercivity import ContinuousSystem, certify_semidissipative, hypocoercivity_index
from .contractivity import DiscreteSystem, certify_semicontractive, hypocontractivity_index
from .errors import PoleOnSpectrum
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, hermitianize, spectral_norm


@dataclass(frozen=True)
class CayleyPair:
    """A continuous system together with its midpoint propagator at step tau."""

    tau: float
    continuous: ContinuousSystem
    discrete: DiscreteSystem


@dataclass(frozen=True)
class PreservationReport:
    tau: float
    index_continuous: int | None
    index_discrete: int | None
    passed: bool
    hermitian_identity_residual: float
    inverse_identity_residual: float
    roundtrip_residual: float


def cayley_transform_matrix(b, tau: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Raw map B -> (I + (tau/2)B)^(-1)(I - (tau/2)B) via one LU solve.

    The pole of the scalar map sits at 2/tau; it must stay clear of the
    spectrum of -B.  Near-pole inputs (within 1e3 cluster radii) trigger a
    conditioning warning rather than an error.
    """
    b = as_matrix(b, square=True)
    if not (tau > 0.0 and np.isfinite(tau)):
        raise ValueError(f"tau must be positive and finite, got {tau}")
    lam = np.linalg.eigvals(b)
    scale = max(spectral_norm(b), 2.0 / tau)
    # spectrum of -B is {-lambda}; distance of the pole 2/tau to it
    distance = float(np.min(np.abs(2.0 / tau + lam)))
    if distance <= tol.cluster_tol * scale:
        raise PoleOnSpectrum(f"2/tau = {2.0 / tau:.6g} is an eigenvalue of -B (distance {distance:.3g})")
    if distance <= 1e3 * tol.cluster_tol * scale:
        warnings.warn(
            f"Cayley pole 2/tau within {distance:.3g} of the spectrum of -B; "
            "the transform is ill-conditioned",
            RuntimeWarning,
            stacklevel=2,
        )
    n = b.shape[0]
    eye = np.eye(n, dtype=complex)
    return np.linalg.solve(eye + (tau / 2.0) * b, eye - (tau / 2.0) * b)


def inverse_cayley_matrix(bd, tau: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Recover B from B_d: -B = (2/tau)(B_d - I)(B_d + I)^(-1)."""
    bd = as_matrix(bd, square=True)
    if not (tau > 0.0 and np.isfinite(tau)):
        raise ValueError(f"tau must be positive and finite, got {tau}")
    lam = np.linalg.eigvals(bd)
    scale = max(spectral_norm(bd), 1.0)
    distance = float(np.min(np.abs(lam + 1.0)))
    if distance <= tol.cluster_tol * scale:
        raise PoleOnSpectrum(f"-1 is an eigenvalue of B_d (distance {distance:.3g})")
    if distance <= 1e3 * tol.cluster_tol * scale:
        warnings.warn(
            f"-1 within {distance:.3g} of the spectrum of B_d; the inverse transform "
            "is ill-conditioned",
            RuntimeWarning,
            stacklevel=2,
        )
    n = bd.shape[0]
    eye = np.eye(n, dtype=complex)
    minus_b = (2.0 / tau) * np.linalg.solve((bd + eye).conj().T, (bd - eye).conj().T).conj().T
    return -minus_b


def cayley_forward(sys: ContinuousSystem, tau: float) -> CayleyPair:
    """Discretize a certified system; the result is certified semi-contractive."""
    bd = cayley_transform_matrix(sys.B, tau, sys.tol)
    return CayleyPair(tau=tau, continuous=sys, discrete=certify_semicontractive(bd, sys.tol))


def cayley_inverse(sys: DiscreteSystem, tau: float) -> ContinuousSystem:
    """Invert the discretization; the result is certified semi-dissipative."""
    b = inverse_cayley_matrix(sys.B, tau, sys.tol)
    return certify_semidissipative(b, sys.tol)


def hermitian_part_identity_residual(sys: ContinuousSystem, bd: np.ndarray, tau: float) -> float:
    """Residual of I - B_d* B_d = 2 tau (I + (tau/2)B)^-* B_H (I + (tau/2)B)^-1.

    This is the structural identity behind index preservation (with
    A = -(tau/2)B the right side is 4 (I - A*)^-1 (-A_H) (I - A)^-1).
    """
    n = sys.dim
    eye = np.eye(n, dtype=complex)
    lhs = eye - bd.conj().T @ bd
    factor = np.linalg.inv(eye + (tau / 2.0) * sys.B)
    rhs = 2.0 * tau * factor.conj().T @ sys.split.hermitian_part @ factor
    return spectral_norm(lhs - rhs)


def inverse_hermitian_identity_residual(sys: ContinuousSystem, bd: np.ndarray, tau: float) -> float:
    """Residual of (tau/2) B_H = (B_d* + I)^(-1) (I - B_d* B_d) (B_d + I)^(-1).

    Companion identity expressing the Hermitian part of the inverse
    transform through the discrete contraction defect.
    """
    n = sys.dim
    eye = np.eye(n, dtype=complex)
    inv = np.linalg.inv(bd + eye)
    rhs = inv.conj().T @ (eye - bd.conj().T @ bd) @ inv
    lhs = (tau / 2.0) * sys.split.hermitian_part
    return spectral_norm(lhs - rhs)


def verify_index_preservation(sys: ContinuousSystem, tau: float) -> PreservationReport:
    """Compare indices across the transform and check the structural identities.

    Passes iff the hypocoercivity index of B equals the hypocontractivity
    index of its midpoint propagator (None counts as equal to None), the
    Hermitian-part identities hold to 1e-10 * max(1, ||B_H||), and the
    inverse transform reproduces B.
    """
    pair = cayley_forward(sys, tau)
    m_cont = hypocoercivity_index(sys).index
    m_disc = hypocontractivity_index(pair.discrete).index

    herm_res = hermitian_part_identity_residual(sys, pair.discrete.B, tau)
    inv_res = inverse_hermitian_identity_residual(sys, pair.discrete.B, tau)
    roundtrip = spectral_norm(inverse_cayley_matrix(pair.discrete.B, tau, sys.tol) - sys.B)

    h_scale = max(1.0, spectral_norm(sys.split.hermitian_part))
    passed = (
        m_cont == m_disc
        and herm_res <= 1e-10 * h_scale
        and inv_res <= 1e-10 * h_scale
        and roundtrip <= 1e-10 * max(1.0, spectral_norm(sys.B))
    )
    return PreservationReport(
        tau=tau,
        index_continuous=m_cont,
        index_discrete=m_disc,
        passed=passed,
        hermitian_identity_residual=herm_res,
        inverse_identity_residual=inv_res,
        roundtrip_residual=roundtrip,
    )


def spectral_mapping_residual(sys: ContinuousSystem, pair: CayleyPair) -> float:
    """Hausdorff-style mismatch between Lambda(B_d) and the mapped spectrum."""
    tau = pair.tau
    mapped = np.array(
        [(1.0 - (tau / 2.0) * lam) / (1.0 + (tau / 2.0) * lam) for lam in sys.spectral.eigenvalues]
    )
    actual = pair.discrete.spectral.eigenvalues
    worst = 0.0
    for z in mapped:
        worst = max(worst, float(np.min(np.abs(actual - z))))
    for z in actual:
        worst = max(worst, float(np.min(np.abs(mapped - z))))
    return worst
