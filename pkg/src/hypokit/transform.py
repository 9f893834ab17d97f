"""Maximally coercive / contractive changes of basis.

For a stable flow x' = -Bx with spectral abscissa mu = max Re(-lambda) < 0,
a positive definite X with X B + B* X >= -2 mu X turns y = X^(1/2) x into a
representation whose Hermitian part has smallest eigenvalue exactly -mu,
the best any similarity can achieve.  When every dominant eigenvalue is
semi-simple the bound is attained (with a tightness witness); a defective
dominant eigenvalue forces a slack epsilon > 0.  The discrete analog
replaces the Hermitian part by the contraction bound sigma_max <= rho.

The construction deflates the dominant invariant subspace on a reordered
Schur form (never the Jordan form) and solves a shifted Lyapunov / Stein
equation for the strictly dominated rest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .cayley import cayley_transform_matrix
from .coercivity import ContinuousSystem, certify_semidissipative
from .contractivity import DiscreteSystem, certify_semicontractive
from .errors import DefectiveNeedsEpsilon, HypokitError, NotPDError, NotStable
from .linalg import (
    DEFAULT_TOL,
    SpectralData,
    Tolerances,
    as_matrix,
    eigendata,
    expm,
    hermitianize,
    psd_sqrt,
    solve_lyapunov,
    solve_stein,
    spectral_norm,
)


@dataclass(frozen=True)
class TransformResult:
    """Positive definite X, its square root, and the achieved margin.

    achieved is lambda_min of the transformed Hermitian part (continuous)
    or sigma_max of the transformed matrix (discrete); target is -mu
    (continuous) or rho (discrete).  witness is a unit vector on which the
    Lyapunov inequality is tight (semi-simple, epsilon = 0 case only).
    """

    X: np.ndarray
    sqrt_X: np.ndarray
    transformed_matrix: np.ndarray
    transformed: ContinuousSystem | DiscreteSystem | None
    achieved: float
    target: float
    epsilon: float
    cond_sqrt_X: float
    witness: np.ndarray | None
    marginal: bool
    discrete: bool


def _as_flow_input(
    system_or_matrix, tol: Tolerances | None = None
) -> tuple[np.ndarray, SpectralData, Tolerances]:
    """Accept a certified system or any square matrix.

    The transforms only need stability, not semi-dissipativity or
    semi-contractivity: their whole point is manufacturing those
    properties by a change of basis.  tol applies to raw matrices only;
    systems carry their own.
    """
    if isinstance(system_or_matrix, (ContinuousSystem, DiscreteSystem)):
        return system_or_matrix.B, system_or_matrix.spectral, system_or_matrix.tol
    b = as_matrix(system_or_matrix, square=True)
    tol = DEFAULT_TOL if tol is None else tol
    return b, eigendata(b, tol), tol


@dataclass(frozen=True)
class AmplificationReport:
    """Midpoint-vs-exact error against the transformed-coordinates bound.

    The bound at grid time t_i is kappa(X^(1/2)) (||x0 - u0|| + t_i
    theta_max) exp(L_x t_i) with theta_max the maximal local discretization
    error (Richardson-estimated) and L_x the midpoint increment Lipschitz
    constant in original coordinates.
    """

    cond_sqrt_X: float
    lipschitz_x: float
    lipschitz_y_bound: float
    theta_max: float
    times: np.ndarray
    measured_error: np.ndarray
    error_bound: np.ndarray
    dominated: bool
    richardson_ratio: float


def _dominant_deflation(b: np.ndarray, select, tol: Tolerances):
    """Split off the dominant invariant subspace and diagonalize it.

    Returns (W, k) with W^-1 B W = diag(Lambda_1, T22), Lambda_1 diagonal
    holding the k dominant eigenvalues.  Raises DefectiveNeedsEpsilon if the
    dominant block is not diagonalizable at working precision.
    """
    n = b.shape[0]
    t, u, k = sla.schur(b.astype(complex), output="complex", sort=select)
    if k == 0:
        raise HypokitError("no dominant eigenvalues selected; spectral data inconsistent")
    if k == n:
        w_eig, v = np.linalg.eig(b)
        _assert_diagonalizable(v, tol)
        return v, n
    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    # zero the coupling: T11 Z - Z T22 = -T12 (spectra are disjoint by construction)
    z = sla.solve_sylvester(t11, -t22, -t12)
    w_eig, v1 = np.linalg.eig(t11)
    _assert_diagonalizable(v1, tol)
    coupling = np.block([[np.eye(k), z], [np.zeros((n - k, k)), np.eye(n - k)]])
    return u @ coupling @ sla.block_diag(v1, np.eye(n - k)), k


def _assert_diagonalizable(v: np.ndarray, tol: Tolerances) -> None:
    sv = np.linalg.svd(v, compute_uv=False)
    if sv[-1] <= np.sqrt(tol.cluster_tol) * sv[0]:
        raise DefectiveNeedsEpsilon(
            "a dominant eigenvalue is defective (eigenvector matrix numerically singular); "
            "pass epsilon > 0"
        )


def _finish(
    b: np.ndarray,
    x: np.ndarray,
    target: float,
    epsilon: float,
    witness: np.ndarray | None,
    marginal: bool,
    discrete: bool,
    tol: Tolerances,
) -> TransformResult:
    x = hermitianize(x)
    x = x / np.linalg.eigvalsh(x)[-1]
    sqrt_x = psd_sqrt(x, tol)
    sv = np.linalg.svd(sqrt_x, compute_uv=False)
    if sv[-1] <= 0.0:
        raise NotPDError("transform lost positive definiteness")
    transformed_matrix = sqrt_x @ b @ np.linalg.inv(sqrt_x)
    if discrete:
        achieved = spectral_norm(transformed_matrix)
    else:
        bt_h = hermitianize(transformed_matrix)
        achieved = float(np.linalg.eigvalsh(bt_h)[0])
    certified: ContinuousSystem | DiscreteSystem | None
    try:
        if discrete:
            certified = certify_semicontractive(transformed_matrix, tol)
        else:
            certified = certify_semidissipative(transformed_matrix, tol)
    except HypokitError:
        certified = None
    return TransformResult(
        X=x,
        sqrt_X=sqrt_x,
        transformed_matrix=transformed_matrix,
        transformed=certified,
        achieved=achieved,
        target=target,
        epsilon=epsilon,
        cond_sqrt_X=float(sv[0] / sv[-1]),
        witness=witness,
        marginal=marginal,
        discrete=discrete,
    )


def maximally_coercive(
    system_or_matrix, epsilon: float = 0.0, tol: Tolerances | None = None
) -> TransformResult:
    """Change of basis with the largest achievable coercivity constant.

    Accepts a certified system or any stable square matrix (the input
    need not be semi-dissipative; the transform manufactures that).
    Requires the spectral abscissa mu of -B to be negative (marginal
    mu = 0 is accepted with epsilon > 0 and flagged).  With epsilon = 0
    every dominant eigenvalue must be semi-simple; the returned margin
    then equals -mu and comes with a tightness witness.  With epsilon > 0
    a single shifted Lyapunov solve certifies margin >= -mu - epsilon.
    """
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    b, spectral, tol = _as_flow_input(system_or_matrix, tol)
    n = b.shape[0]
    mu = spectral.spectral_abscissa_of_minus
    scale = max(spectral_norm(b), 1.0)
    marginal = abs(mu) <= tol.cluster_tol * scale
    if mu >= 0.0 and not marginal:
        raise NotStable(f"spectral abscissa of -B is {mu:.6g} >= 0")
    if marginal and epsilon == 0.0:
        raise NotStable(
            "marginally stable (spectral abscissa ~ 0): no strict Lyapunov transform; "
            "pass epsilon > 0 for the relaxed inequality"
        )

    dominant_defective = any(
        c.defective
        for c in spectral.clusters
        if -c.value.real >= mu - tol.cluster_tol * scale
    )

    if epsilon > 0.0:
        # one shifted solve: A = -(B + (mu + eps) I) is strictly stable
        a = -(b + (mu + epsilon) * np.eye(n, dtype=complex))
        x = solve_lyapunov(a, scale * np.eye(n, dtype=complex), tol)
        return _finish(b, x, -mu, epsilon, None, marginal, False, tol)

    if dominant_defective:
        raise DefectiveNeedsEpsilon(
            f"a dominant eigenvalue (Re = {-mu:.6g}) is defective; pass epsilon > 0"
        )

    # dominant eigenvalues of B have Re = -mu (the minimal real part)
    select = lambda z: z.real <= -mu + tol.cluster_tol * scale
    w, k = _dominant_deflation(b, select, tol)
    w_inv = np.linalg.inv(w)
    if k == n:
        x = w_inv.conj().T @ w_inv
    else:
        t22 = (w_inv @ b @ w)[k:, k:]
        # want T22* X2 + X2 T22 + 2 mu X2 = Q2 > 0; A2 = T22 + mu I has Re > 0
        a2 = t22 + mu * np.eye(n - k, dtype=complex)
        x2 = solve_lyapunov(-a2, scale * np.eye(n - k, dtype=complex), tol)
        x = w_inv.conj().T @ sla.block_diag(np.eye(k), x2) @ w_inv

    witness = w[:, 0] / np.linalg.norm(w[:, 0])
    return _finish(b, x, -mu, 0.0, witness, marginal, False, tol)


def maximally_contractive(
    system_or_matrix, epsilon: float = 0.0, tol: Tolerances | None = None
) -> TransformResult:
    """Change of basis with the smallest achievable contraction bound.

    Accepts a certified system or any square matrix with rho(B) < 1 (the
    input need not be semi-contractive; marginal rho = 1 is accepted with
    epsilon > 0 and flagged).  Semi-simple dominant spectrum with
    epsilon = 0 attains sigma_max = rho with a tightness witness of
    rho^2 X - B* X B; a defective dominant eigenvalue needs epsilon > 0
    and one Stein solve.
    """
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    b, spectral, tol = _as_flow_input(system_or_matrix, tol)
    n = b.shape[0]
    rho = spectral.spectral_radius
    scale = max(spectral_norm(b), 1.0)
    marginal = abs(rho - 1.0) <= tol.cluster_tol * scale
    if rho >= 1.0 and not marginal:
        raise NotStable(f"spectral radius {rho:.6g} >= 1")
    if marginal and epsilon == 0.0:
        raise NotStable(
            "marginally stable (spectral radius ~ 1): no strict Stein transform; "
            "pass epsilon > 0 for the relaxed inequality"
        )
    dominant_defective = any(
        c.defective
        for c in spectral.clusters
        if abs(c.value) >= rho - tol.cluster_tol * scale
    )

    if epsilon > 0.0:
        sigma2 = rho**2 + epsilon
        x = solve_stein(b / np.sqrt(sigma2), scale * np.eye(n, dtype=complex) / sigma2, tol)
        return _finish(b, x, rho, epsilon, None, marginal, True, tol)

    if dominant_defective:
        raise DefectiveNeedsEpsilon(
            f"a dominant eigenvalue (|lambda| = {rho:.6g}) is defective; pass epsilon > 0"
        )

    select = lambda z: abs(z) >= rho - tol.cluster_tol * scale
    w, k = _dominant_deflation(b, select, tol)
    w_inv = np.linalg.inv(w)
    if k == n:
        x = w_inv.conj().T @ w_inv
    else:
        t22 = (w_inv @ b @ w)[k:, k:]
        # want rho^2 X2 - T22* X2 T22 = Q2 > 0, i.e. a Stein solve for T22/rho
        x2 = solve_stein(t22 / rho, scale * np.eye(n - k, dtype=complex) / rho**2, tol)
        x = w_inv.conj().T @ sla.block_diag(np.eye(k), x2) @ w_inv

    witness = w[:, 0] / np.linalg.norm(w[:, 0])
    return _finish(b, x, rho, 0.0, witness, marginal, True, tol)


def coercivity_witness_residual(system_or_matrix, result: TransformResult) -> float:
    """|z* (X B + B* X + 2 mu X) z| at the tightness witness (continuous)."""
    if result.witness is None:
        raise ValueError("transform carries no tightness witness (epsilon > 0 path)")
    b, _, _ = _as_flow_input(system_or_matrix)
    mu = -result.target
    m = result.X @ b + b.conj().T @ result.X + 2.0 * mu * result.X
    z = result.witness
    return float(abs(z.conj() @ m @ z))


def contractivity_witness_residual(system_or_matrix, result: TransformResult) -> float:
    """|z* (rho^2 X - B* X B) z| at the tightness witness (discrete)."""
    if result.witness is None:
        raise ValueError("transform carries no tightness witness (epsilon > 0 path)")
    b, _, _ = _as_flow_input(system_or_matrix)
    rho = result.target
    m = rho**2 * result.X - b.conj().T @ result.X @ b
    z = result.witness
    return float(abs(z.conj() @ m @ z))


def error_amplification_report(
    system_or_matrix,
    x,
    t_final: float,
    tau: float,
    x0: np.ndarray | None = None,
) -> AmplificationReport:
    """Run the midpoint iteration against the exact flow and bound the error.

    kappa(X^(1/2)) multiplies the standard one-step-method estimate; the
    report carries the per-grid-point measured error, the bound, and the
    Richardson ratio of maximal errors at tau vs tau/2 (2nd order ~ 4).
    """
    b, _, tol = _as_flow_input(system_or_matrix)
    x = hermitianize(as_matrix(x, square=True))
    if np.linalg.eigvalsh(x)[0] <= 0.0:
        raise NotPDError("X must be Hermitian positive definite")
    if not (t_final > 0.0 and tau > 0.0 and tau <= t_final):
        raise ValueError("need 0 < tau <= t_final")
    n = b.shape[0]
    if x0 is None:
        x0 = np.full(n, 1.0 / np.sqrt(n), dtype=complex)
    x0 = np.asarray(x0, dtype=complex)

    sqrt_x = psd_sqrt(x, tol)
    sv = np.linalg.svd(sqrt_x, compute_uv=False)
    kappa = float(sv[0] / sv[-1])

    lipschitz_x = spectral_norm(np.linalg.solve(np.eye(n, dtype=complex) + (tau / 2.0) * b, b))

    steps = int(round(t_final / tau))
    times = np.arange(steps + 1) * tau
    bd = cayley_transform_matrix(b, tau, tol)
    bd_half = cayley_transform_matrix(b, tau / 2.0, tol)

    exact = [expm(-t * b) @ x0 for t in times]
    iterate = x0.copy()
    measured = [0.0]
    theta_max = 0.0
    for i in range(steps):
        # local error per unit step, Richardson-estimated from tau vs tau/2
        one = bd @ exact[i]
        two = bd_half @ (bd_half @ exact[i])
        theta_max = max(theta_max, (4.0 / 3.0) * float(np.linalg.norm(one - two)) / tau)
        iterate = bd @ iterate
        measured.append(float(np.linalg.norm(exact[i + 1] - iterate)))
    measured_arr = np.array(measured)
    bound = kappa * (0.0 + times * theta_max) * np.exp(lipschitz_x * times)

    def max_error(step: float) -> float:
        k = int(round(t_final / step))
        prop = cayley_transform_matrix(b, step, tol)
        u = x0.copy()
        worst = 0.0
        for i in range(k):
            u = prop @ u
            worst = max(worst, float(np.linalg.norm(expm(-(i + 1) * step * b) @ x0 - u)))
        return worst

    richardson = max_error(tau) / max(max_error(tau / 2.0), 1e-300)

    return AmplificationReport(
        cond_sqrt_X=kappa,
        lipschitz_x=lipschitz_x,
        lipschitz_y_bound=kappa * lipschitz_x,
        theta_max=theta_max,
        times=times,
        measured_error=measured_arr,
        error_bound=bound,
        dominated=bool(np.all(measured_arr[1:] <= bound[1:])),
        richardson_ratio=float(richardson),
    )
