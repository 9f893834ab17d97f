"""Hypocoercivity certification, index, and sharp short-time decay constant.

Works on the flow x' = -Bx for square complex B.  A certified system has a
PSD Hermitian part B_H and no zero eigenvalue.  The index is the smallest m
with sum_{j<=m} (B*)^j B_H B^j coercive; the propagator norm then satisfies
||exp(-tB)|| = 1 - c t^(2m+1) + O(t^(2m+2)) with

    c = min ||sqrt(B_H) B^m y||^2 / ((2m+1)! binom(2m, m))

over unit y in the intersection of ker(sqrt(B_H) B^p), p < m.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import (
    CriterionMismatch,
    DegenerateFit,
    IndexMissing,
    NotSemiDissipative,
    ZeroEigenvalue,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianSplit,
    SpectralData,
    Tolerances,
    as_matrix,
    eigendata,
    expm,
    hermitian_split,
    hermitianize,
    nullspace_basis,
    psd_sqrt,
    spectral_norm,
)


@dataclass(frozen=True)
class ContinuousSystem:
    """Certified semi-dissipative system with cached split and sqrt(B_H)."""

    B: np.ndarray
    split: HermitianSplit
    sqrt_hermitian: np.ndarray
    spectral: SpectralData
    tol: Tolerances

    @property
    def dim(self) -> int:
        return self.B.shape[0]


@dataclass(frozen=True)
class IndexReport:
    """Index certificate: Gramian minima and stacked-kernel dimensions.

    kernel_dims[j] is dim of the intersection of ker(sqrt(B_H) B^p) for
    p <= j; it is nonincreasing and hits 0 exactly at the index.
    """

    index: int | None
    kappa: float | None
    per_level_lambda_min: tuple[float, ...]
    kernel_dims: tuple[int, ...]
    discrete: bool = False


@dataclass(frozen=True)
class DecayExpansion:
    """Leading term of 1 - ||exp(-tB)||: exponent 2m+1 and constant c."""

    exponent_a: int
    constant_c: float
    min_value: float
    minimizer: np.ndarray
    prefactor: float


@dataclass(frozen=True)
class ShortTimeFit:
    a_hat: float
    c_hat: float
    points_used: int


def certify_semidissipative(b, tol: Tolerances = DEFAULT_TOL) -> ContinuousSystem:
    """Certify B_H >= 0 (within the PSD clamp) and 0 not an eigenvalue."""
    b = as_matrix(b, square=True)
    split = hermitian_split(b)
    wh = np.linalg.eigvalsh(split.hermitian_part)
    scale = max(abs(wh[0]), abs(wh[-1]))
    if wh[0] < -tol.psd_rel_tol * scale:
        raise NotSemiDissipative(
            f"Hermitian part has eigenvalue {wh[0]:.6g} below -psd_rel_tol*||B_H|| = "
            f"{-tol.psd_rel_tol * scale:.6g}"
        )
    spectral = eigendata(b, tol)
    gap = float(np.min(np.abs(spectral.eigenvalues)))
    if gap <= tol.cluster_tol * max(spectral_norm(b), 1.0):
        raise ZeroEigenvalue(f"eigenvalue within {gap:.3g} of zero; trivial kernel assumed")
    return ContinuousSystem(
        B=b,
        split=split,
        sqrt_hermitian=psd_sqrt(split.hermitian_part, tol),
        spectral=spectral,
        tol=tol,
    )


def _stacked_blocks(sys: ContinuousSystem, m: int) -> list[np.ndarray]:
    """[sqrt(B_H) B^p for p = 0..m]."""
    blocks = []
    power = np.eye(sys.dim, dtype=complex)
    for _ in range(m + 1):
        blocks.append(sys.sqrt_hermitian @ power)
        power = power @ sys.B
    return blocks


def hypocoercivity_index(sys: ContinuousSystem, m_max: int | None = None) -> IndexReport:
    """Smallest m with the level-m Gramian sum coercive, or None.

    Two criteria are evaluated at every level and must agree:
    lambda_min(S_m) > rank_rel_tol * lambda_max(S_m) for the Gramian sum
    S_m, and full column rank of the stacked matrix [sqrt(B_H) B^p]_{p<=m}.
    m_max defaults to n-1, after which the stacked rank has stabilized and
    a missing index is conclusive.
    """
    n = sys.dim
    if m_max is None:
        m_max = n - 1
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    tol = sys.tol

    gram = np.zeros((n, n), dtype=complex)
    power = np.eye(n, dtype=complex)
    blocks: list[np.ndarray] = []
    lambda_mins: list[float] = []
    kernel_dims: list[int] = []
    index = None
    kappa = None

    for m in range(m_max + 1):
        gram = hermitianize(gram + power.conj().T @ sys.split.hermitian_part @ power)
        blocks.append(sys.sqrt_hermitian @ power)
        power = power @ sys.B

        w = np.linalg.eigvalsh(gram)
        lambda_mins.append(float(w[0]))
        gram_coercive = w[0] > tol.rank_rel_tol * max(w[-1], 0.0)

        stacked = np.vstack(blocks)
        sv = np.linalg.svd(stacked, compute_uv=False)
        rank = int(np.count_nonzero(sv > tol.rank_rel_tol * sv[0])) if sv[0] > 0 else 0
        kernel_dims.append(n - rank)
        rank_full = rank == n

        if gram_coercive != rank_full:
            raise CriterionMismatch(
                f"level {m}: Gramian lambda_min/lambda_max = {w[0] / max(w[-1], 1e-300):.3g} "
                f"vs stacked sigma_min/sigma_max = {sv[-1] / max(sv[0], 1e-300):.3g} "
                "straddle the rank tolerance"
            )
        if gram_coercive:
            index = m
            kappa = float(w[0])
            break

    return IndexReport(
        index=index,
        kappa=kappa,
        per_level_lambda_min=tuple(lambda_mins),
        kernel_dims=tuple(kernel_dims),
    )


def decay_constant(sys: ContinuousSystem, report: IndexReport) -> DecayExpansion:
    """Sharp constant of the leading decay term 1 - c t^(2m+1).

    The constrained minimum of ||sqrt(B_H) B^m y||^2 over unit y in the
    kernel intersection N is realized as sigma_min(sqrt(B_H) B^m Q)^2 for
    an orthonormal basis Q of N; for m = 0 the minimum runs over the whole
    unit sphere.
    """
    if report.index is None:
        raise IndexMissing("system has no hypocoercivity index up to the searched level")
    m = report.index
    n = sys.dim
    blocks = _stacked_blocks(sys, m)

    if m == 0:
        basis = np.eye(n, dtype=complex)
    else:
        basis = nullspace_basis(np.vstack(blocks[:m]), sys.tol)
        if basis.shape[1] == 0:
            raise IndexMissing("kernel intersection is trivial below the reported index")

    restricted = blocks[m] @ basis
    u, sv, vh = np.linalg.svd(restricted)
    min_value = float(sv[-1] ** 2)
    minimizer = basis @ vh.conj().T[:, -1]
    minimizer = minimizer / np.linalg.norm(minimizer)
    prefactor = 1.0 / (factorial(2 * m + 1) * comb(2 * m, m))
    return DecayExpansion(
        exponent_a=2 * m + 1,
        constant_c=prefactor * min_value,
        min_value=min_value,
        minimizer=minimizer,
        prefactor=prefactor,
    )


def propagator_norm(sys: ContinuousSystem, t: float) -> float:
    """Phi(t) = ||exp(-tB)||; exactly 1 at t = 0."""
    if not np.isfinite(t) or t < 0.0:
        raise ValueError(f"t must be finite and nonnegative, got {t}")
    if t == 0.0:
        return 1.0
    return spectral_norm(expm(-t * sys.B))


def norm_deficiency(sys: ContinuousSystem, t: float) -> float:
    """1 - Phi(t), switching to the Gram form when cancellation bites.

    For 1 - Phi < 1e-9 the difference is recovered from
    1 - Phi^2 = lambda_min(I - E*E), which stays accurate at the scale of
    ||I - E*E|| rather than of 1.
    """
    if t == 0.0:
        return 0.0
    e = expm(-t * sys.B)
    phi = spectral_norm(e)
    d = 1.0 - phi
    if d < 1e-9:
        gram_gap = hermitianize(np.eye(sys.dim, dtype=complex) - e.conj().T @ e)
        d = float(np.linalg.eigvalsh(gram_gap)[0]) / (1.0 + phi)
    return d


def default_t_grid() -> tuple[float, ...]:
    return tuple(2.0 ** -k for k in range(4, 15))


def fit_short_time_expansion(
    sys: ContinuousSystem, t_grid=None, drop_below: float = 1e-12
) -> ShortTimeFit:
    """Least-squares log-log fit of 1 - Phi(t) = c t^a on a decreasing grid.

    Grid points whose deficiency falls below drop_below (cancellation
    floor) are discarded; fewer than two usable points raise DegenerateFit.
    Serves as an independent cross-check of decay_constant.
    """
    ts = np.asarray(default_t_grid() if t_grid is None else t_grid, dtype=float)
    if ts.ndim != 1 or ts.size < 2 or np.any(ts <= 0.0) or np.any(ts >= 1.0):
        raise ValueError("t_grid must contain at least two points inside (0, 1)")
    kept_t, kept_d = [], []
    for t in ts:
        d = norm_deficiency(sys, float(t))
        if d >= drop_below:
            kept_t.append(t)
            kept_d.append(d)
    if len(kept_t) < 2:
        raise DegenerateFit(
            f"only {len(kept_t)} grid points have 1 - Phi above {drop_below:g}; "
            "the flow is isometric at this resolution"
        )
    logs_t = np.log(np.asarray(kept_t))
    logs_d = np.log(np.asarray(kept_d))
    design = np.vstack([logs_t, np.ones_like(logs_t)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logs_d, rcond=None)
    return ShortTimeFit(a_hat=float(slope), c_hat=float(np.exp(intercept)), points_used=len(kept_t))
