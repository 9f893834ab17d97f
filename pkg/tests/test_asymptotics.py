from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from hypokit import (
    apply_stencil,
    cayley_forward,
    cayley_series_minimum,
    certify_semidissipative,
    contraction_onset_expansion,
    decay_constant,
    fornberg_weights,
    grid_function,
    hypocoercivity_index,
    peano_estimate,
)
from hypokit.errors import IndexMismatch, StencilError
from hypokit.corpus import semidissipative_corpus

from conftest import EXAMPLE_2D, FIG1, FIG2, example_phi2


class TestFornbergWeights:
    def test_first_derivative(self):
        w = fornberg_weights(1, 1)
        assert w.weights == (Fraction(-1, 2), Fraction(0), Fraction(1, 2))

    def test_third_derivative(self):
        w = fornberg_weights(3, 2)
        assert w.weights == (
            Fraction(-1, 2),
            Fraction(1),
            Fraction(0),
            Fraction(-1),
            Fraction(1, 2),
        )

    def test_fifth_derivative_exactness(self):
        w = fornberg_weights(5, 3)
        # annihilates monomials below order 5, maps t^5 to 5! = 120
        for p in range(5):
            assert sum(Fraction(o) ** p * c for o, c in zip(w.offsets, w.weights)) == 0
        assert sum(Fraction(o) ** 5 * c for o, c in zip(w.offsets, w.weights)) == 120

    def test_minimal_odd_stencils_end_in_half(self):
        for m in range(0, 4):
            w = fornberg_weights(2 * m + 1, m + 1)
            assert w.weights[0] == Fraction(-1, 2)
            assert w.weights[-1] == Fraction(1, 2)
            # skew symmetry
            assert all(w.weights[i] == -w.weights[-1 - i] for i in range(len(w.weights)))

    def test_exactness_on_wide_stencils(self):
        for d, h in ((1, 3), (2, 3), (4, 4)):
            w = fornberg_weights(d, h)
            for p in range(2 * h + 1):
                target = factorial(d) if p == d else 0
                value = sum(float(o) ** p * c for o, c in zip(w.offsets, w.weights_float))
                scale = max(1.0, max(abs(float(x)) for x in w.weights_float)) * h**p
                assert abs(value - target) <= 1e-10 * scale

    def test_too_short_rejected(self):
        with pytest.raises(StencilError):
            fornberg_weights(3, 1)


class TestGridFunction:
    def test_example_phi2_closed_form(self, sys_example):
        pair = cayley_forward(sys_example, 1.0)
        grid = grid_function(pair, 2)
        assert grid[1] == pytest.approx(1.0, abs=1e-12)
        expected = (3.0 / 125.0) * np.sqrt(737.0 + 32.0 * np.sqrt(481.0))
        assert grid[2] == pytest.approx(expected, rel=1e-12)
        assert grid[2] == pytest.approx(example_phi2(1.0), rel=1e-12)

    def test_definition_rows(self, sys_fig1):
        grid = grid_function(cayley_forward(sys_fig1, 0.5), 4)
        assert grid[0] == 1.0
        for k in range(1, 5):
            assert grid[-k] == 2.0 - grid[k]

    def test_fig1_markers(self, sys_fig1):
        grid = grid_function(cayley_forward(sys_fig1, 0.5), 6)
        assert grid[1] == pytest.approx(1.0, abs=1e-12)
        assert grid[2] < 1.0
        for k in range(0, 6):
            assert grid[k + 1] <= grid[k] + 1e-12


class TestPeanoEstimate:
    def test_example_limit(self, sys_example):
        values = [
            peano_estimate(cayley_forward(sys_example, 2.0**-k), 1) for k in range(3, 11)
        ]
        assert values[-1] == pytest.approx(-0.125, rel=0.02)
        errors = [abs(v + 0.125) for v in values]
        assert all(errors[i + 1] <= errors[i] for i in range(4))

    def test_collapse_identity_matches_stencil(self, sys_fig2):
        pair = cayley_forward(sys_fig2, 0.5)
        m = 2
        grid = grid_function(pair, m + 1)
        stencil = fornberg_weights(2 * m + 1, m + 1)
        assert abs(apply_stencil(stencil, grid) - (grid[m + 1] - 1.0)) <= 1e-12

    def test_lower_order_differences_vanish(self, sys_fig2):
        # [Delta^j phi]_0 = delta_{0j} for j = 1..2m on the odd-extended grid
        pair = cayley_forward(sys_fig2, 0.5)
        m = 2
        grid = grid_function(pair, m + 1)
        for j in range(1, 2 * m + 1):
            halfwidth = max((j + 1) // 2, (j + 2) // 2 if j % 2 == 0 else (j + 1) // 2)
            stencil = fornberg_weights(j, max(halfwidth, 1))
            assert abs(apply_stencil(stencil, grid)) <= 1e-9

    def test_scalar_cayley(self):
        sys = certify_semidissipative(np.eye(1))
        for tau in (0.5, 0.125):
            est = peano_estimate(cayley_forward(sys, tau), 0)
            assert est == pytest.approx(-1.0 / (1.0 + tau / 2.0), rel=1e-12)
        est = peano_estimate(cayley_forward(sys, 2.0**-10), 0)
        assert est == pytest.approx(-1.0, rel=1e-3)

    def test_wrong_index_rejected(self, sys_example):
        with pytest.raises(IndexMismatch):
            peano_estimate(cayley_forward(sys_example, 0.5), 2)

    def test_collapse_on_corpus(self):
        for sys in semidissipative_corpus(55, 10):
            m = hypocoercivity_index(sys).index
            for tau in (0.25, 0.5):
                pair = cayley_forward(sys, tau)
                grid = grid_function(pair, m + 1)
                stencil = fornberg_weights(2 * m + 1, m + 1)
                assert abs(apply_stencil(stencil, grid) - (grid[m + 1] - 1.0)) <= 1e-12


class TestContractionOnset:
    def test_example(self, sys_example):
        fit = contraction_onset_expansion(sys_example)
        assert fit.exponent_hat == pytest.approx(3.0, abs=0.1)
        assert fit.c_hat == pytest.approx(1.0 / 48.0, rel=0.05)

    def test_identity(self):
        sys = certify_semidissipative(np.eye(2))
        fit = contraction_onset_expansion(sys)
        assert fit.c_hat == pytest.approx(1.0, rel=0.05)

    def test_fig2_exponent(self, sys_fig2):
        fit = contraction_onset_expansion(sys_fig2, tuple(2.0**-k for k in range(2, 9)))
        assert fit.exponent_hat == pytest.approx(5.0, abs=0.1)

    def test_cross_check_against_decay_constant(self, sys_fig1):
        expansion = decay_constant(sys_fig1, hypocoercivity_index(sys_fig1))
        fit = contraction_onset_expansion(sys_fig1)
        assert abs(fit.c_hat / expansion.constant_c - 1.0) <= 0.05


class TestSeriesMinimum:
    def test_small_closed_forms(self):
        assert cayley_series_minimum(0).value_exact == 1
        assert cayley_series_minimum(1).value_exact == Fraction(1, 2)
        assert cayley_series_minimum(3).value_exact == Fraction(1, 20)

    @pytest.mark.parametrize("m", range(0, 7))
    def test_matches_binomial(self, m):
        result = cayley_series_minimum(m)
        assert result.value_exact == Fraction(1, comb(2 * m, m))
        assert abs(result.value * comb(2 * m, m) - 1.0) <= 1e-9

    def test_minimizer_real_and_finite(self):
        result = cayley_series_minimum(4)
        assert len(result.minimizer) == 4
        assert all(np.isfinite(x) for x in result.minimizer)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cayley_series_minimum(9)
