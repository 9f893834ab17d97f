"""Dense complex linear algebra substrate.

All higher modules build on this surface only: validated complex matrices,
the Hermitian/skew splitting, PSD square roots, the matrix exponential,
spectral norms, numerical kernels, clustered eigendata with multiplicities,
and a continuous Lyapunov solver.  Matrices are plain ``numpy`` arrays of
``complex128``; every function is pure and inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, NotPDError, NotPSDError, SpectrumError


@dataclass(frozen=True)
class Tolerances:
    """Knobs for the rank/PSD/plateau/cluster decisions.

    rank_rel_tol
        Relative singular-value cutoff for numerical rank and kernels.
    psd_rel_tol
        Relative clamp threshold for roundoff-scale negative eigenvalues
        of nominally PSD matrices.
    norm_plateau_tol
        Gap below 1 at which a power norm counts as strictly contractive.
    cluster_tol
        Relative radius for eigenvalue clustering and multiplicity
        decisions (defective eigenvalues scatter like sqrt(eps), so this
        is deliberately much looser than rank_rel_tol).
    """

    rank_rel_tol: float = 1e-10
    psd_rel_tol: float = 1e-12
    norm_plateau_tol: float = 1e-9
    cluster_tol: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("rank_rel_tol", "psd_rel_tol", "norm_plateau_tol", "cluster_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Validate and normalize input to a finite complex128 2-d array."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise DimensionError("matrix entries must be finite")
    return arr


def hermitianize(a: np.ndarray) -> np.ndarray:
    """Force exact Hermitian symmetry by averaging with the adjoint."""
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True)
class HermitianSplit:
    """Split B = hermitian_part - skew_part with skew_part anti-Hermitian."""

    hermitian_part: np.ndarray
    skew_part: np.ndarray


def hermitian_split(b) -> HermitianSplit:
    """Split a square matrix into Hermitian and skew parts, B = B_H - B_S.

    B_H = (B + B*)/2 is symmetrized exactly; B_S = -(B - B*)/2 is exactly
    skew by construction.
    """
    b = as_matrix(b, square=True)
    h = hermitianize((b + b.conj().T) / 2.0)
    s = -(b - b.conj().T) / 2.0
    s = (s - s.conj().T) / 2.0
    return HermitianSplit(hermitian_part=h, skew_part=s)


def spectral_norm(a) -> float:
    """Largest singular value."""
    a = as_matrix(a)
    return float(np.linalg.norm(a, 2))


def spectral_norm_2x2_real(a: float, b: float, c: float, d: float) -> float:
    """Closed-form spectral norm of a real 2x2 matrix [[a, b], [c, d]].

    sqrt((g + sqrt(g^2 - 4h)) / 2) with g the squared Frobenius norm and
    h the squared determinant.
    """
    g = a * a + b * b + c * c + d * d
    h = (a * d - b * c) ** 2
    disc = max(g * g - 4.0 * h, 0.0)
    return float(np.sqrt((g + np.sqrt(disc)) / 2.0))


def psd_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root with a roundoff clamp.

    Eigenvalues below -psd_rel_tol * ||A|| raise NotPSDError; eigenvalues
    of magnitude up to psd_rel_tol * ||A|| are clamped to zero on BOTH
    sides.  The two-sided clamp matters: a structurally zero eigenvalue
    assembled with +1e-16 noise would otherwise surface as a 1e-8 singular
    value of the root and corrupt every kernel decision downstream.
    """
    a = hermitianize(as_matrix(a, square=True))
    w, v = np.linalg.eigh(a)
    scale = max(abs(w[0]), abs(w[-1]))
    floor = -tol.psd_rel_tol * scale
    if w[0] < floor:
        raise NotPSDError(f"eigenvalue {w[0]:.6g} below PSD clamp threshold {floor:.6g}")
    w = np.where(np.abs(w) <= tol.psd_rel_tol * scale, 0.0, w)
    return hermitianize((v * np.sqrt(w)) @ v.conj().T)


def expm(a) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with diagonal Pade)."""
    return sla.expm(as_matrix(a, square=True))


def numerical_rank(a: np.ndarray, rel_cutoff: float) -> int:
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_cutoff * sv[0]))


def nullspace_basis(a, tol: Tolerances = DEFAULT_TOL, rel_cutoff: float | None = None) -> np.ndarray:
    """Orthonormal basis of the numerical kernel as columns.

    The kernel is {x : ||Ax|| <= cutoff * sigma_max(A) * ||x||} with
    cutoff = rank_rel_tol unless overridden.  Returns an n x 0 matrix for a
    trivial kernel; for the zero matrix the kernel is the whole space.
    """
    a = as_matrix(a)
    cutoff = tol.rank_rel_tol if rel_cutoff is None else rel_cutoff
    _, sv, vh = np.linalg.svd(a)
    n = a.shape[1]
    if sv.size == 0 or sv[0] == 0.0:
        return np.eye(n, dtype=complex)
    keep = np.ones(n, dtype=bool)
    keep[: sv.size] = sv > cutoff * sv[0]
    return vh.conj().T[:, ~keep]


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    algebraic: int
    geometric: int

    @property
    def defective(self) -> bool:
        return self.geometric < self.algebraic


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues with clustered multiplicities and stability scalars.

    spectral_abscissa_of_minus is max Re(-lambda), the growth abscissa of
    the flow exp(-tB); spectral_radius is max |lambda|.
    """

    eigenvalues: np.ndarray
    spectral_abscissa_of_minus: float
    spectral_radius: float
    clusters: tuple[EigenCluster, ...] = field(default_factory=tuple)


def eigendata(a, tol: Tolerances = DEFAULT_TOL) -> SpectralData:
    """Eigenvalues clustered at radius cluster_tol * ||A|| with multiplicities.

    The radius is floored at sqrt(8 eps) * ||A||: computed eigenvalues of a
    defective pair scatter like sqrt(eps), so finer clustering would split
    every Jordan block.  The geometric multiplicity of a cluster is the
    numerical kernel dimension of A - mean(cluster) I, with the
    singular-value cutoff tied to the cluster scale (not rank_rel_tol,
    which sits far below the sqrt(eps) scatter).
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    lam = np.linalg.eigvals(a)
    norm_a = spectral_norm(a)
    noise_floor = np.sqrt(8.0 * np.finfo(float).eps)
    radius = max(tol.cluster_tol, noise_floor) * max(norm_a, 1.0)

    order = np.lexsort((lam.imag, lam.real))
    lam_sorted = lam[order]
    clusters: list[list[complex]] = []
    for z in lam_sorted:
        placed = False
        for group in clusters:
            if abs(z - np.mean(group)) <= radius:
                group.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])

    eye = np.eye(n, dtype=complex)
    out = []
    for group in clusters:
        mean = complex(np.mean(group))
        shifted = a - mean * eye
        sv = np.linalg.svd(shifted, compute_uv=False)
        geo = int(np.count_nonzero(sv <= 10.0 * radius))
        geo = min(max(geo, 1), len(group))
        out.append(EigenCluster(value=mean, algebraic=len(group), geometric=geo))

    return SpectralData(
        eigenvalues=lam,
        spectral_abscissa_of_minus=float(np.max(-lam.real)),
        spectral_radius=float(np.max(np.abs(lam))),
        clusters=tuple(out),
    )


def solve_lyapunov(a, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve A* X + X A = -Q for Hermitian PD X, A stable, Q Hermitian PD.

    Schur-based (Bartels-Stewart) via scipy; the residual is checked
    against rank_rel_tol * ||Q|| and positive definiteness of X is
    verified before returning.
    """
    a = as_matrix(a, square=True)
    q = hermitianize(as_matrix(q, square=True))
    if a.shape != q.shape:
        raise DimensionError(f"shape mismatch: A {a.shape} vs Q {q.shape}")
    lam = np.linalg.eigvals(a)
    if np.max(lam.real) >= 0.0:
        raise SpectrumError(f"A is not stable: max Re(lambda) = {np.max(lam.real):.6g}")
    wq = np.linalg.eigvalsh(q)
    if wq[0] <= 0.0:
        raise NotPDError(f"Q is not positive definite: lambda_min = {wq[0]:.6g}")

    # scipy solves a x + x a^H = q; substitute a -> A^H for A^H X + X A = -Q.
    x = sla.solve_continuous_lyapunov(a.conj().T, -q)
    x = hermitianize(x)
    residual = spectral_norm(a.conj().T @ x + x @ a + q)
    if residual > tol.rank_rel_tol * max(spectral_norm(q), 1.0):
        raise SpectrumError(f"Lyapunov residual {residual:.6g} exceeds tolerance")
    if np.linalg.eigvalsh(x)[0] <= 0.0:
        raise NotPDError("Lyapunov solution is not positive definite")
    return x


def solve_stein(a, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve X - A* X A = Q for Hermitian X, rho(A) < 1, Q Hermitian.

    Discrete (Stein) companion of solve_lyapunov, used by the discrete
    Lyapunov transform.
    """
    a = as_matrix(a, square=True)
    q = hermitianize(as_matrix(q, square=True))
    if a.shape != q.shape:
        raise DimensionError(f"shape mismatch: A {a.shape} vs Q {q.shape}")
    rho = float(np.max(np.abs(np.linalg.eigvals(a))))
    if rho >= 1.0:
        raise SpectrumError(f"spectral radius {rho:.6g} >= 1; Stein equation not solvable")
    # scipy solves x - a x a^H = q; substitute a -> A^H for X - A^H X A = Q.
    x = sla.solve_discrete_lyapunov(a.conj().T, q)
    x = hermitianize(x)
    residual = spectral_norm(x - a.conj().T @ x @ a - q)
    if residual > max(tol.rank_rel_tol, 1e-9) * max(spectral_norm(q), 1.0):
        raise SpectrumError(f"Stein residual {residual:.6g} exceeds tolerance")
    return x
