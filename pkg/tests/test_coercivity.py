import numpy as np
import pytest

from hypokit import (
    certify_semidissipative,
    decay_constant,
    fit_short_time_expansion,
    hypocoercivity_index,
    norm_deficiency,
    propagator_norm,
)
from hypokit.errors import DegenerateFit, IndexMissing, NotSemiDissipative, ZeroEigenvalue

from conftest import EXAMPLE_2D, FIG1, FIG2, ROTATION, example_phi
from oracles import sampled_min_value


class TestCertification:
    def test_example_accepted(self, sys_example):
        assert np.allclose(sys_example.split.hermitian_part, np.diag([0.0, 1.0]))

    def test_indefinite_rejected(self):
        with pytest.raises(NotSemiDissipative):
            certify_semidissipative(np.diag([-1.0, 1.0]))

    def test_skew_accepted(self):
        # eigenvalues +-i: semi-dissipative with vanishing Hermitian part
        sys = certify_semidissipative(ROTATION)
        assert np.allclose(sys.split.hermitian_part, 0.0)

    def test_zero_eigenvalue_rejected(self):
        with pytest.raises(ZeroEigenvalue):
            certify_semidissipative(np.diag([0.0, 1.0]))


class TestIndex:
    def test_example_index_one(self, sys_example):
        report = hypocoercivity_index(sys_example)
        assert report.index == 1
        assert report.kappa > 0
        assert report.kernel_dims == (1, 0)

    def test_figure_matrix_index_two(self, sys_fig2):
        assert hypocoercivity_index(sys_fig2).index == 2

    def test_coercive_index_zero(self):
        assert hypocoercivity_index(certify_semidissipative(np.eye(2))).index == 0

    def test_skew_never_coercive(self):
        report = hypocoercivity_index(certify_semidissipative(ROTATION))
        assert report.index is None
        assert report.kappa is None

    def test_gramian_sum_positive_definite_level(self, sys_example):
        # B_H + B* B_H B = [[1/4, -1/2], [-1/2, 2]]
        b = EXAMPLE_2D
        bh = np.diag([0.0, 1.0])
        s1 = bh + b.T @ bh @ b
        assert np.allclose(s1, [[0.25, -0.5], [-0.5, 2.0]])
        assert np.linalg.eigvalsh(s1)[0] > 0

    def test_monotone_certificates(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            ev = np.zeros(n)
            r = int(rng.integers(1, n + 1))
            ev[:r] = rng.uniform(0.5, 1.5, r)
            bh = q @ np.diag(ev) @ q.T
            k = rng.standard_normal((n, n))
            b = bh - (k - k.T) / 2.0
            try:
                sys = certify_semidissipative(b)
                report = hypocoercivity_index(sys, m_max=n - 1)
            except Exception:
                continue
            lams = report.per_level_lambda_min
            assert all(lams[i + 1] >= lams[i] - 1e-12 for i in range(len(lams) - 1))
            dims = report.kernel_dims
            assert all(dims[i + 1] <= dims[i] for i in range(len(dims) - 1))


class TestDecayConstant:
    def test_example_constant(self, sys_example):
        report = hypocoercivity_index(sys_example)
        expansion = decay_constant(sys_example, report)
        assert expansion.exponent_a == 3
        assert expansion.min_value == pytest.approx(0.25, abs=1e-12)
        assert expansion.constant_c == pytest.approx(1.0 / 48.0, rel=1e-12)
        assert expansion.prefactor == pytest.approx(1.0 / 12.0)

    def test_coercive_case(self):
        sys = certify_semidissipative(np.eye(2))
        expansion = decay_constant(sys, hypocoercivity_index(sys))
        assert expansion.exponent_a == 1
        assert expansion.min_value == pytest.approx(1.0)
        assert expansion.constant_c == pytest.approx(1.0)

    def test_fig1_brute_force_oracle(self, sys_fig1):
        report = hypocoercivity_index(sys_fig1)
        expansion = decay_constant(sys_fig1, report)
        sampled = sampled_min_value(sys_fig1, report.index)
        assert expansion.min_value == pytest.approx(sampled, rel=1e-6)
        assert expansion.constant_c == pytest.approx(1.0 / 12.0, rel=1e-12)

    def test_minimizer_in_kernel(self, sys_example):
        report = hypocoercivity_index(sys_example)
        expansion = decay_constant(sys_example, report)
        y = expansion.minimizer
        assert np.linalg.norm(y) == pytest.approx(1.0)
        # kernel membership diagnostic: sqrt(B_H) B^p y vanishes for p < index
        stack_norm = np.linalg.norm(sys_example.sqrt_hermitian, 2)
        for p in range(report.index):
            vec = sys_example.sqrt_hermitian @ np.linalg.matrix_power(sys_example.B, p) @ y
            assert np.linalg.norm(vec) <= sys_example.tol.rank_rel_tol * max(stack_norm, 1.0)

    def test_requires_index(self):
        sys = certify_semidissipative(ROTATION)
        with pytest.raises(IndexMissing):
            decay_constant(sys, hypocoercivity_index(sys))

    def test_positive_whenever_index_exists(self, sys_fig2):
        expansion = decay_constant(sys_fig2, hypocoercivity_index(sys_fig2))
        assert expansion.constant_c > 0
        assert expansion.constant_c == pytest.approx(1.0 / 720.0, rel=1e-10)

    def test_scaling_covariance(self, sys_fig1):
        report = hypocoercivity_index(sys_fig1)
        base = decay_constant(sys_fig1, report)
        for s in (0.5, 2.0, 3.7):
            scaled = certify_semidissipative(s * FIG1)
            sreport = hypocoercivity_index(scaled)
            assert sreport.index == report.index
            sexp = decay_constant(scaled, sreport)
            m = report.index
            assert sexp.constant_c == pytest.approx(
                s ** (2 * m + 1) * base.constant_c, rel=1e-10
            )


class TestPropagatorNorm:
    def test_closed_form(self, sys_example):
        for t in (0.25, 0.5, 1.0, 2.0):
            assert propagator_norm(sys_example, t) == pytest.approx(example_phi(t), rel=1e-12)

    def test_value_at_one(self, sys_example):
        # golden ratio times e^(-1/2), from the closed form
        assert propagator_norm(sys_example, 1.0) == pytest.approx(0.9813872226339374, rel=1e-12)

    def test_zero_is_exactly_one(self, sys_example):
        assert propagator_norm(sys_example, 0.0) == 1.0

    def test_monotone_for_semidissipative(self, sys_fig1):
        ts = np.linspace(0.0, 3.0, 40)
        values = [propagator_norm(sys_fig1, t) for t in ts]
        assert all(values[i + 1] <= values[i] + 1e-12 for i in range(len(values) - 1))


class TestShortTimeFit:
    def test_example_fit(self, sys_example):
        fit = fit_short_time_expansion(sys_example)
        assert fit.a_hat == pytest.approx(3.0, abs=0.05)
        assert fit.c_hat == pytest.approx(1.0 / 48.0, rel=0.05)

    def test_identity_fit(self):
        sys = certify_semidissipative(np.eye(2))
        fit = fit_short_time_expansion(sys)
        assert fit.a_hat == pytest.approx(1.0, abs=0.05)
        assert fit.c_hat == pytest.approx(1.0, rel=0.05)

    def test_skew_degenerate(self):
        sys = certify_semidissipative(ROTATION)
        with pytest.raises(DegenerateFit):
            fit_short_time_expansion(sys)

    def test_consistency_on_regression_suite(self, sys_example, sys_fig1, sys_fig2):
        grid = tuple(2.0 ** -k for k in range(3, 15))
        for sys in (sys_example, sys_fig1, sys_fig2):
            report = hypocoercivity_index(sys)
            expansion = decay_constant(sys, report)
            fit = fit_short_time_expansion(sys, grid)
            assert abs(fit.a_hat - expansion.exponent_a) <= 0.1
            assert abs(fit.c_hat / expansion.constant_c - 1.0) <= 0.05

    def test_deficiency_guard_matches_direct(self, sys_example):
        # moderate t: both paths available and consistent
        t = 0.25
        direct = 1.0 - propagator_norm(sys_example, t)
        assert norm_deficiency(sys_example, t) == pytest.approx(direct, rel=1e-9)
