"""Report assembly: plain-dict JSON bodies and CSV sweep emitters.

All numbers are formatted locale-independently; CSV cells carry 17
significant digits so sweeps are reproducible bit-for-bit.
"""

from __future__ import annotations

import io
from dataclasses import asdict

import numpy as np

from . import __version__ as _version
from .asymptotics import grid_function
from .cayley import cayley_forward
from .coercivity import (
    ContinuousSystem,
    DecayExpansion,
    IndexReport,
    decay_constant,
    fit_short_time_expansion,
    hypocoercivity_index,
    propagator_norm,
)
from .contractivity import DiscreteSystem, hypocontractivity_index, power_norms
from .errors import HypokitError
from .linalg import Tolerances
from .transform import TransformResult

SCHEMA = "hypokit/1"


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def complex_pairs(a: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a).ravel()]


def tolerances_dict(tol: Tolerances) -> dict:
    return {
        "rank_rel_tol": tol.rank_rel_tol,
        "psd_rel_tol": tol.psd_rel_tol,
        "norm_plateau_tol": tol.norm_plateau_tol,
        "cluster_tol": tol.cluster_tol,
    }


def index_report_dict(report: IndexReport) -> dict:
    return {
        "index": report.index,
        "kappa": report.kappa,
        "per_level_lambda_min": list(report.per_level_lambda_min),
        "kernel_dims": list(report.kernel_dims),
    }


def analyze_continuous(sys: ContinuousSystem, m_max: int | None = None) -> dict:
    """Index, certificate, and decay expansion for a certified flow."""
    report = hypocoercivity_index(sys, m_max)
    body = {
        "schema": SCHEMA,
        "discrete": False,
        "semi_dissipative": True,
        "hypocoercive": report.index is not None,
        "tolerances": tolerances_dict(sys.tol),
        "spectral": {
            "eigenvalues": complex_pairs(sys.spectral.eigenvalues),
            "spectral_abscissa_of_minus": sys.spectral.spectral_abscissa_of_minus,
            "spectral_radius": sys.spectral.spectral_radius,
        },
        **index_report_dict(report),
        "a": None,
        "c": None,
        "min_value": None,
        "prefactor": None,
        "minimizer": None,
    }
    if report.index is not None:
        expansion = decay_constant(sys, report)
        body.update(
            a=expansion.exponent_a,
            c=expansion.constant_c,
            min_value=expansion.min_value,
            prefactor=expansion.prefactor,
            minimizer=complex_pairs(expansion.minimizer),
        )
    return body


def analyze_discrete(sys: DiscreteSystem, m_max: int | None = None) -> dict:
    report = hypocontractivity_index(sys, m_max)
    norms = power_norms(sys, min(sys.dim, (report.index or 0) + 1) + 1)
    return {
        "schema": SCHEMA,
        "discrete": True,
        "semi_contractive": True,
        "hypocontractive": report.index is not None,
        "sigma_max": sys.sigma_max,
        "tolerances": tolerances_dict(sys.tol),
        "spectral": {
            "eigenvalues": complex_pairs(sys.spectral.eigenvalues),
            "spectral_abscissa_of_minus": sys.spectral.spectral_abscissa_of_minus,
            "spectral_radius": sys.spectral.spectral_radius,
        },
        **index_report_dict(report),
        "power_norms": norms,
    }


def decay_report(sys: ContinuousSystem, t_grid=None) -> dict:
    """Exact decay expansion next to the fitted cross-check."""
    report = hypocoercivity_index(sys)
    body = {
        "schema": SCHEMA,
        "hypocoercive": report.index is not None,
        "index": report.index,
    }
    if report.index is None:
        return body
    expansion = decay_constant(sys, report)
    body.update(
        a=expansion.exponent_a,
        c=expansion.constant_c,
        min_value=expansion.min_value,
        prefactor=expansion.prefactor,
    )
    try:
        fit = fit_short_time_expansion(sys, t_grid)
        body.update(
            fit={"a_hat": fit.a_hat, "c_hat": fit.c_hat, "points_used": fit.points_used},
            fit_consistent=bool(
                abs(fit.a_hat - expansion.exponent_a) <= 0.1
                and abs(fit.c_hat / expansion.constant_c - 1.0) <= 0.05
            ),
        )
    except HypokitError as exc:
        body.update(fit=None, fit_error=str(exc))
    return body


def transform_report(result: TransformResult) -> dict:
    return {
        "schema": SCHEMA,
        "discrete": result.discrete,
        "X": _matrix_body(result.X),
        "sqrt_X": _matrix_body(result.sqrt_X),
        "transformed": _matrix_body(result.transformed_matrix),
        "achieved": result.achieved,
        "target": result.target,
        "epsilon": result.epsilon,
        "cond_sqrt_X": result.cond_sqrt_X,
        "marginal": result.marginal,
        "witness": complex_pairs(result.witness) if result.witness is not None else None,
    }


def _matrix_body(a: np.ndarray) -> dict:
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "entries": complex_pairs(a)}


SWEEP_HEADER = "row,t,Phi,taylor,k,tau,phi_k"


def sweep_csv(sys: ContinuousSystem, tau: float, k_max: int, t_points: int = 200) -> str:
    """Figure-reproduction CSV: continuous curve, Taylor comparison, markers.

    Curve rows sample Phi(t) and its leading expansion 1 - c t^(2m+1) on
    [0, k_max * tau]; marker rows carry (k, tau, phi_k) including the
    odd-extended negative k.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    report = hypocoercivity_index(sys)
    taylor = None
    if report.index is not None:
        expansion = decay_constant(sys, report)
        taylor = (expansion.constant_c, expansion.exponent_a)

    out = io.StringIO()
    out.write(SWEEP_HEADER + "\n")
    t_end = max(k_max, 1) * tau
    for t in np.linspace(0.0, t_end, max(t_points, 2)):
        phi = propagator_norm(sys, float(t))
        tay = "" if taylor is None else fmt17(1.0 - taylor[0] * float(t) ** taylor[1])
        out.write(f"curve,{fmt17(t)},{fmt17(phi)},{tay},,,\n")
    if k_max == 0:
        out.write(f"marker,{fmt17(0.0)},,,0,{fmt17(tau)},{fmt17(1.0)}\n")
    else:
        grid = grid_function(cayley_forward(sys, tau), k_max)
        for k in range(-k_max, k_max + 1):
            out.write(f"marker,{fmt17(k * tau)},,,{k},{fmt17(tau)},{fmt17(grid[k])}\n")
    return out.getvalue()


def preservation_csv(reports: list, matrix_id: str) -> str:
    out = io.StringIO()
    out.write("matrix_id,tau,m_HC,m_dHC,pass,hermitian_residual,inverse_residual,roundtrip_residual\n")
    for r in reports:
        out.write(
            f"{matrix_id},{fmt17(r.tau)},{_none(r.index_continuous)},{_none(r.index_discrete)},"
            f"{str(r.passed).lower()},{fmt17(r.hermitian_identity_residual)},"
            f"{fmt17(r.inverse_identity_residual)},{fmt17(r.roundtrip_residual)}\n"
        )
    return out.getvalue()


def _none(x) -> str:
    return "" if x is None else str(x)
