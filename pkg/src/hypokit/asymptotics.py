"""Discrete propagator-norm asymptotics.

The grid function phi_k(tau) = ||B_d(tau)^k||, extended to negative k by odd
symmetry about (0, 1), turns the short-time decay law into a statement about
symmetric finite differences: for a system of index m the order-(2m+1)
central difference of phi at k = 0 collapses to phi_{m+1}(tau) - 1, and

    (phi_{m+1}(tau) - 1) / tau^(2m+1)  ->  -(2m+1)! c        (tau -> 0)

with c the continuous decay constant.  The module also provides exact
finite-difference stencil weights and the constrained minimum of the
quadratic form built from the Cayley-transform series coefficients, whose
value 1 / binom(2m, m) is the sharp constant of the discrete expansion.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .cayley import CayleyPair, cayley_forward
from .coercivity import ContinuousSystem, hypocoercivity_index
from .contractivity import power_norms
from .errors import CriterionMismatch, DegenerateFit, IndexMismatch, StencilError
from .rational import solve_linear_system


@dataclass(frozen=True)
class StencilWeights:
    """Finite-difference weights for one derivative order on a symmetric stencil."""

    order: int
    offsets: tuple[int, ...]
    weights: tuple[Fraction, ...]

    @property
    def weights_float(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.weights)


@dataclass(frozen=True)
class GridFunction:
    """phi_k(tau) for |k| <= k_max, odd-extended: phi_{-k} = 2 - phi_k."""

    tau: float
    values: dict[int, float]

    @property
    def k_max(self) -> int:
        return max(self.values)

    def __getitem__(self, k: int) -> float:
        return self.values[k]


@dataclass(frozen=True)
class OnsetFit:
    """Fit of ||B_d(tau)^(m+1)|| = 1 - (2m+1)! c tau^(2m+1) + o(...)."""

    c_hat: float
    exponent_hat: float
    points_used: int


@dataclass(frozen=True)
class SeriesMinimum:
    value: float
    value_exact: Fraction
    minimizer: tuple[float, ...]


def fornberg_weights(order: int, halfwidth: int) -> StencilWeights:
    """Exact weights of the order-d derivative on offsets -h..h.

    Solved from the moment conditions: the stencil annihilates monomials
    t^p for p != d, p <= 2h, and maps t^d to d!.  Requires 2h + 1 > d.
    """
    if order < 1:
        raise StencilError(f"derivative order must be >= 1, got {order}")
    if halfwidth < 1 or 2 * halfwidth + 1 <= order:
        raise StencilError(
            f"stencil of halfwidth {halfwidth} is too short for derivative order {order}"
        )
    offsets = tuple(range(-halfwidth, halfwidth + 1))
    n = len(offsets)
    vandermonde = [[Fraction(o) ** p for o in offsets] for p in range(n)]
    rhs = [Fraction(factorial(order)) if p == order else Fraction(0) for p in range(n)]
    weights = solve_linear_system(vandermonde, rhs)
    return StencilWeights(order=order, offsets=offsets, weights=tuple(weights))


def grid_function(pair: CayleyPair, k_max: int) -> GridFunction:
    """Power norms of the midpoint propagator with the odd extension."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    norms = power_norms(pair.discrete, k_max)
    values = {0: 1.0}
    for k in range(1, k_max + 1):
        values[k] = norms[k]
        values[-k] = 2.0 - norms[k]
    return GridFunction(tau=pair.tau, values=values)


def apply_stencil(stencil: StencilWeights, grid: GridFunction) -> float:
    """Central difference [Delta^d phi]_0 on the odd-extended grid."""
    if stencil.offsets[-1] > grid.k_max:
        raise StencilError(
            f"grid holds |k| <= {grid.k_max} but the stencil needs offset {stencil.offsets[-1]}"
        )
    return float(sum(w * grid[o] for w, o in zip(stencil.weights_float, stencil.offsets)))


def peano_estimate(pair: CayleyPair, m: int) -> float:
    """(phi_{m+1}(tau) - 1) / tau^(2m+1), the discrete Peano-derivative quotient.

    m must be the hypocoercivity index of the continuous side.  The full
    order-(2m+1) stencil applied to the odd-extended grid must agree with
    the collapsed form phi_{m+1} - 1 to 1e-12; a larger gap means the
    plateau assumption failed.
    """
    actual = hypocoercivity_index(pair.continuous).index
    if actual != m:
        raise IndexMismatch(f"system has hypocoercivity index {actual}, not {m}")
    grid = grid_function(pair, m + 1)
    collapsed = grid[m + 1] - 1.0
    stencil = fornberg_weights(2 * m + 1, m + 1)
    full = apply_stencil(stencil, grid)
    if abs(full - collapsed) > 1e-12:
        raise CriterionMismatch(
            f"order-{2 * m + 1} stencil value {full:.15g} deviates from the collapsed "
            f"form {collapsed:.15g}; norm plateau violated"
        )
    return collapsed / pair.tau ** (2 * m + 1)


def default_tau_grid() -> tuple[float, ...]:
    return tuple(2.0 ** -k for k in range(3, 13))


def contraction_onset_expansion(
    sys: ContinuousSystem, tau_grid=None, drop_below: float = 1e-11
) -> OnsetFit:
    """Fit the onset of strict contraction across step sizes.

    Fits 1 - phi_{m+1}(tau) = (2m+1)! c tau^(2m+1) on a decreasing tau
    grid by log-log least squares and returns c_hat (to be cross-checked
    against the continuous decay constant).  Points with deficiency below
    drop_below are discarded as cancellation noise.
    """
    m = hypocoercivity_index(sys).index
    if m is None:
        raise DegenerateFit("system is not hypocoercive; no contraction onset to fit")
    taus = np.asarray(default_tau_grid() if tau_grid is None else tau_grid, dtype=float)
    if taus.ndim != 1 or taus.size < 2 or np.any(taus <= 0.0):
        raise ValueError("tau_grid must contain at least two positive step sizes")

    kept_tau, kept_d = [], []
    for tau in taus:
        pair = cayley_forward(sys, float(tau))
        power = np.linalg.matrix_power(pair.discrete.B, m + 1)
        phi = float(np.linalg.norm(power, 2))
        d = 1.0 - phi
        if d < 1e-9:
            # Gram form of 1 - phi^2, accurate at the scale of the defect
            gram_gap = np.eye(sys.dim, dtype=complex) - power.conj().T @ power
            gram_gap = (gram_gap + gram_gap.conj().T) / 2.0
            d = float(np.linalg.eigvalsh(gram_gap)[0]) / (1.0 + phi)
        if d >= drop_below:
            kept_tau.append(float(tau))
            kept_d.append(d)
    if len(kept_tau) < 2:
        raise DegenerateFit(
            f"only {len(kept_tau)} step sizes have 1 - phi above {drop_below:g}"
        )
    logs_t = np.log(np.asarray(kept_tau))
    logs_d = np.log(np.asarray(kept_d))
    design = np.vstack([logs_t, np.ones_like(logs_t)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logs_d, rcond=None)
    c_hat = float(np.exp(intercept)) / factorial(2 * m + 1)
    return OnsetFit(c_hat=c_hat, exponent_hat=float(slope), points_used=len(kept_tau))


def _series_coefficient_table(m: int) -> list[list[Fraction]]:
    """w_r^(j) for j, r = 0..m: coefficients of (1 - z/2)^j / (1 + z/2)^(j+1).

    Built by truncated Cauchy products over the resolvent series
    a_0 = 1, a_i = 2(-1/2)^i (the series of the scalar Cayley map) and the
    geometric series of (1 + z/2)^(-1).
    """
    a = [Fraction(1)] + [2 * Fraction(-1, 2) ** i for i in range(1, m + 1)]
    g = [Fraction(-1, 2) ** i for i in range(m + 1)]
    table = []
    f_power = [Fraction(1)] + [Fraction(0)] * m
    for _ in range(m + 1):
        table.append([sum(f_power[r] * g[k - r] for r in range(k + 1)) for k in range(m + 1)])
        f_power = [sum(f_power[r] * a[k - r] for r in range(k + 1)) for k in range(m + 1)]
    return table


def cayley_series_minimum(m: int) -> SeriesMinimum:
    """Constrained minimum of the series-coefficient quadratic form.

    Minimizes ||Q lambda + b||^2 over lambda in R^m, where Q_{j,k} =
    w_{m-k}^(j) and b_j = w_m^(j) come from the Cayley series coefficient
    table; the minimum equals 1 / binom(2m, m) exactly.  Solved by exact
    rational normal equations (m = 0 has no free variables).
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if m > 8:
        raise ValueError(f"m = {m} beyond the supported range (<= 8)")
    if m > 6:
        warnings.warn(
            f"series minimum at m = {m} is exact but the float minimizer is ill-conditioned",
            RuntimeWarning,
            stacklevel=2,
        )
    w = _series_coefficient_table(m)
    residual_at = lambda lam: [
        sum(w[j][m - k] * lam[k - 1] for k in range(1, m + 1)) + w[j][m] for j in range(m + 1)
    ]
    if m == 0:
        value = w[0][0] ** 2
        minimizer: tuple[float, ...] = ()
    else:
        normal = [
            [
                sum(w[j][m - i] * w[j][m - k] for j in range(m + 1))
                for k in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        rhs = [-sum(w[j][m - i] * w[j][m] for j in range(m + 1)) for i in range(1, m + 1)]
        lam = solve_linear_system(normal, rhs)
        value = sum(r * r for r in residual_at(lam))
        minimizer = tuple(float(x) for x in lam)
    return SeriesMinimum(value=float(value), value_exact=value, minimizer=minimizer)
