"""Hilbert-matrix closed forms behind the decay-constant prefactor.

The quadratic form with kernel C_{n,k} = (-1)^(n+k) binom(n+k, k)/(n+k+1)!
is a diagonal congruence of the Hilbert matrix H (entries 1/(i+j-1)); its
minimum over the affine slice lambda_0 = 1 equals
1/((2m+1)! binom(2m, m)), the prefactor of the sharp short-time decay
constant, and (H^-1)_{m+1,m+1} = (2m+1) binom(2m, m)^2 exactly.  All
combinatorics stay in integer/rational arithmetic: Hilbert conditioning
grows like (1 + sqrt(2))^(4m) and floats lose the tested digits by m = 6.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .rational import solve_linear_system

M_WARN = 6
M_MAX = 8


@dataclass(frozen=True)
class HilbertForm:
    """Hilbert matrix and the congruent signed-binomial kernel at level m."""

    m: int
    hilbert: np.ndarray
    kernel: np.ndarray


@dataclass(frozen=True)
class HilbertMinimum:
    """Constrained minimum of the kernel form with its unique real minimizer.

    lambda_star[p-1] is the coefficient of the p-th flow correction term
    (it multiplies (tB)^p in the near-minimizing curve), p = 1..m.
    """

    m: int
    value: float
    value_exact: Fraction
    lambda_star: tuple[float, ...]
    lambda_star_exact: tuple[Fraction, ...]


@dataclass(frozen=True)
class KernelCheckReport:
    m: int
    samples: int
    worst_margin: float
    violations: int


def _check_range(m: int) -> None:
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if m > M_MAX:
        raise ValueError(f"m = {m} beyond the supported range (<= {M_MAX})")
    if m > M_WARN:
        warnings.warn(
            f"Hilbert forms at m = {m}: exact values fine, float solves unreliable",
            RuntimeWarning,
            stacklevel=3,
        )


def hilbert_matrix_exact(size: int) -> list[list[Fraction]]:
    return [[Fraction(1, i + j + 1) for j in range(size)] for i in range(size)]


def kernel_matrix_exact(m: int) -> list[list[Fraction]]:
    """C_{n,k} = (-1)^(n+k) binom(n+k, k) / (n+k+1)!, n, k = 0..m."""
    return [
        [Fraction((-1) ** (n + k) * comb(n + k, k), factorial(n + k + 1)) for k in range(m + 1)]
        for n in range(m + 1)
    ]


def congruence_scaling_exact(m: int) -> list[Fraction]:
    """D = diag((-1)^n n!) with D C D = H entrywise."""
    return [Fraction((-1) ** n * factorial(n)) for n in range(m + 1)]


def hilbert_form(m: int) -> HilbertForm:
    _check_range(m)
    h = np.array(hilbert_matrix_exact(m + 1), dtype=float)
    c = np.array(kernel_matrix_exact(m), dtype=float)
    return HilbertForm(m=m, hilbert=h, kernel=c)


def closed_form_minimum(m: int) -> Fraction:
    return Fraction(1, factorial(2 * m + 1) * comb(2 * m, m))


def hilbert_min(m: int) -> HilbertMinimum:
    """Minimum of the kernel quadratic form over the slice lambda_0 = 1.

    Computed two ways: the closed form 1/((2m+1)! binom(2m, m)), and an
    exact constrained optimization (stationarity of the form in the free
    variables, solved over rationals).  The two must coincide; a mismatch
    would mean the kernel table is wrong.
    """
    _check_range(m)
    c = kernel_matrix_exact(m)
    closed = closed_form_minimum(m)
    if m == 0:
        value = c[0][0]
    else:
        # variables z_n = lambda_{m-n}; the constraint pins z_m = lambda_0 = 1
        a = [[c[i][k] for k in range(m)] for i in range(m)]
        rhs = [-c[i][m] for i in range(m)]
        z_free = solve_linear_system(a, rhs)
        z = z_free + [Fraction(1)]
        value = sum(z[i] * c[i][k] * z[k] for i in range(m + 1) for k in range(m + 1))
    if value != closed:
        raise ArithmeticError(
            f"exact optimization gave {value}, closed form gives {closed}; kernel table broken"
        )
    lam_exact = tuple(z[m - p] for p in range(1, m + 1)) if m > 0 else ()
    return HilbertMinimum(
        m=m,
        value=float(value),
        value_exact=value,
        lambda_star=tuple(float(x) for x in lam_exact),
        lambda_star_exact=lam_exact,
    )


def hilbert_inverse_entry(m: int) -> int:
    """(H_{m+1}^-1)_{m+1,m+1} = (2m+1) binom(2m, m)^2, exactly."""
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    return (2 * m + 1) * comb(2 * m, m) ** 2


def psd_kernel_check(
    m: int, samples: int, rng: np.random.Generator | None = None, dim: int = 4
) -> KernelCheckReport:
    """Sampled lower bound check of the kernel form on vector tuples.

    For random complex tuples (z_0, ..., z_m) the form
    sum C_{n,k} <z_{m-n}, z_{m-k}> must dominate the closed-form minimum
    times ||z_0||^2 (within 1e-10 slack).  Reports the worst margin.
    """
    if m > 5:
        raise ValueError(f"psd_kernel_check supports m <= 5, got {m}")
    _check_range(m)
    rng = np.random.default_rng(0) if rng is None else rng
    c = np.array(kernel_matrix_exact(m), dtype=float)
    bound = float(closed_form_minimum(m))
    worst = np.inf
    violations = 0
    for _ in range(samples):
        z = rng.standard_normal((m + 1, dim)) + 1j * rng.standard_normal((m + 1, dim))
        # gram[n, k] = <z_{m-n}, z_{m-k}>
        flipped = z[::-1]
        gram = flipped @ flipped.conj().T
        form = float(np.real(np.sum(c * gram)))
        margin = form - bound * float(np.linalg.norm(z[0]) ** 2)
        worst = min(worst, margin)
        if margin < -1e-10:
            violations += 1
    return KernelCheckReport(m=m, samples=samples, worst_margin=float(worst), violations=violations)
