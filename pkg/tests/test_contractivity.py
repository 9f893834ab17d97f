import numpy as np
import pytest

from hypokit import (
    certify_semicontractive,
    certify_semidissipative,
    cayley_transform_matrix,
    hypocontractivity_index,
    power_norms,
)
from hypokit.errors import NotSemiContractive, UnitEigenvalue

from conftest import EXAMPLE_2D, FIG1, example_bd


class TestCertification:
    def test_zero_matrix(self):
        sys = certify_semicontractive(np.zeros((2, 2)))
        assert sys.sigma_max == 0.0

    def test_midpoint_propagator_of_example(self):
        bd = cayley_transform_matrix(EXAMPLE_2D, 0.5)
        sys = certify_semicontractive(bd)
        assert sys.sigma_max == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(bd, example_bd(0.5), atol=1e-14)

    def test_expansion_rejected(self):
        with pytest.raises(NotSemiContractive):
            certify_semicontractive(1.5 * np.eye(2))

    def test_identity_rejected(self):
        with pytest.raises(UnitEigenvalue):
            certify_semicontractive(np.eye(2))


class TestIndex:
    def test_fig1_discretization_index_one(self):
        bd = cayley_transform_matrix(FIG1, 0.5)
        report = hypocontractivity_index(certify_semicontractive(bd))
        assert report.index == 1
        assert report.discrete

    def test_zero_matrix_index_zero(self):
        report = hypocontractivity_index(certify_semicontractive(np.zeros((2, 2))))
        assert report.index == 0
        assert report.kappa == pytest.approx(1.0)

    def test_rotation_never_contracts(self):
        theta = 1.0
        rot = np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]])
        report = hypocontractivity_index(certify_semicontractive(rot))
        assert report.index is None

    def test_norm_plateau_shape(self):
        bd = cayley_transform_matrix(EXAMPLE_2D, 0.5)
        sys = certify_semicontractive(bd)
        report = hypocontractivity_index(sys)
        m = report.index
        norms = power_norms(sys, m + 1)
        for j in range(1, m + 1):
            assert 1.0 - sys.tol.norm_plateau_tol <= norms[j] <= 1.0 + sys.tol.psd_rel_tol
        assert norms[m + 1] < 1.0 - sys.tol.norm_plateau_tol

    def test_power_norm_monotone(self):
        bd = cayley_transform_matrix(FIG1, 0.5)
        sys = certify_semicontractive(bd)
        norms = power_norms(sys, 8)
        for j in range(len(norms) - 1):
            assert norms[j + 1] <= norms[j] + 1e-12

    def test_kappa_identity(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            ev = np.zeros(n)
            r = int(rng.integers(1, n + 1))
            ev[:r] = rng.uniform(0.5, 1.5, r)
            b = q @ np.diag(ev) @ q.T - 0.5 * (lambda k: k - k.T)(rng.standard_normal((n, n)))
            try:
                sys_c = certify_semidissipative(b)
                bd = cayley_transform_matrix(b, 0.5)
                sys_d = certify_semicontractive(bd)
                report = hypocontractivity_index(sys_d)
            except Exception:
                continue
            if report.index is None:
                continue
            norms = power_norms(sys_d, report.index + 1)
            assert abs(report.kappa - (1.0 - norms[report.index + 1] ** 2)) <= 1e-8

    def test_index_implies_spectral_radius_below_one(self):
        bd = cayley_transform_matrix(EXAMPLE_2D, 0.5)
        sys = certify_semicontractive(bd)
        report = hypocontractivity_index(sys)
        assert report.index is not None
        assert sys.spectral.spectral_radius < 1.0
