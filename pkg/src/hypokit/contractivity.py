"""Hypocontractivity certification and index for iterations x_{k+1} = B x_k.

A certified system has sigma_max(B) <= 1 (within the clamp) and 1 not in
the spectrum.  The index is the smallest m with
sum_{j<=m} (B*)^j (I - B*B) B^j coercive; equivalently the power norms
satisfy ||B^j|| = 1 for j <= m and ||B^(m+1)|| < 1, with the exact identity
kappa = 1 - ||B^(m+1)||^2 tying the two criteria together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coercivity import IndexReport
from .errors import CriterionMismatch, NotSemiContractive, UnitEigenvalue
from .linalg import (
    DEFAULT_TOL,
    SpectralData,
    Tolerances,
    as_matrix,
    eigendata,
    hermitianize,
    spectral_norm,
)


@dataclass(frozen=True)
class DiscreteSystem:
    """Certified semi-contractive system with cached norm and eigendata."""

    B: np.ndarray
    sigma_max: float
    spectral: SpectralData
    tol: Tolerances

    @property
    def dim(self) -> int:
        return self.B.shape[0]


def certify_semicontractive(b, tol: Tolerances = DEFAULT_TOL) -> DiscreteSystem:
    """Certify sigma_max(B) <= 1 + psd_rel_tol and 1 not an eigenvalue."""
    b = as_matrix(b, square=True)
    sigma = spectral_norm(b)
    if sigma > 1.0 + tol.psd_rel_tol:
        raise NotSemiContractive(
            f"sigma_max = {sigma:.12g} exceeds 1 by {sigma - 1.0:.3g} (> psd_rel_tol)"
        )
    spectral = eigendata(b, tol)
    gap = float(np.min(np.abs(spectral.eigenvalues - 1.0)))
    if gap <= tol.cluster_tol * max(sigma, 1.0):
        raise UnitEigenvalue(f"eigenvalue within {gap:.3g} of 1")
    return DiscreteSystem(B=b, sigma_max=sigma, spectral=spectral, tol=tol)


def power_norms(sys: DiscreteSystem, k_max: int) -> list[float]:
    """[||B^j|| for j = 0..k_max] by repeated multiplication."""
    norms = [1.0]
    power = np.eye(sys.dim, dtype=complex)
    for _ in range(k_max):
        power = power @ sys.B
        norms.append(spectral_norm(power))
    return norms


def hypocontractivity_index(sys: DiscreteSystem, m_max: int | None = None) -> IndexReport:
    """Smallest m with ||B^(m+1)|| strictly below the plateau, or None.

    Primary criterion: the norm plateau (||B^j|| >= 1 - norm_plateau_tol
    for j <= m, ||B^(m+1)|| < 1 - norm_plateau_tol).  Cross-check: the
    Gramian sums, accumulated term by term, must turn coercive at the same
    level, and kappa must match 1 - ||B^(m+1)||^2 to 1e-8.
    """
    n = sys.dim
    if m_max is None:
        m_max = n - 1
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    tol = sys.tol

    norms = power_norms(sys, m_max + 1)
    defect = hermitianize(np.eye(n, dtype=complex) - sys.B.conj().T @ sys.B)

    gram = np.zeros((n, n), dtype=complex)
    power = np.eye(n, dtype=complex)
    lambda_mins: list[float] = []
    kernel_dims: list[int] = []
    index = None
    kappa = None

    for m in range(m_max + 1):
        gram = hermitianize(gram + power.conj().T @ defect @ power)
        power = power @ sys.B
        w = np.linalg.eigvalsh(gram)
        lambda_mins.append(float(w[0]))
        gram_coercive = w[0] > tol.rank_rel_tol
        kernel_dims.append(int(np.count_nonzero(w <= tol.rank_rel_tol)))

        plateau_held = all(norms[j] >= 1.0 - tol.norm_plateau_tol for j in range(1, m + 1))
        contracts = norms[m + 1] < 1.0 - tol.norm_plateau_tol
        norm_says = plateau_held and contracts

        if gram_coercive != norm_says:
            raise CriterionMismatch(
                f"level {m}: Gramian lambda_min = {w[0]:.3g} vs power norms "
                f"{[f'{x:.12g}' for x in norms[: m + 2]]} disagree at the plateau tolerance"
            )
        if gram_coercive:
            identity_gap = abs(w[0] - (1.0 - norms[m + 1] ** 2))
            if identity_gap > 1e-8:
                raise CriterionMismatch(
                    f"kappa = {w[0]:.12g} vs 1 - ||B^{m + 1}||^2 = "
                    f"{1.0 - norms[m + 1] ** 2:.12g}: identity violated by {identity_gap:.3g}"
                )
            index = m
            kappa = float(w[0])
            break

    return IndexReport(
        index=index,
        kappa=kappa,
        per_level_lambda_min=tuple(lambda_mins),
        kernel_dims=tuple(kernel_dims),
        discrete=True,
    )
