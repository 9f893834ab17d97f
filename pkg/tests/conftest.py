import numpy as np
import pytest

from hypokit import certify_semidissipative

# worked-example flow matrix: Hermitian part diag(0, 1), double defective
# eigenvalue 1/2, index 1, decay constant 1/48
EXAMPLE_2D = np.array([[0.0, 0.5], [-0.5, 1.0]])

# index-1 figure matrix: decay constant 1/12
FIG1 = np.array([[0.0, 1.0], [-1.0, 1.0]])

# index-2 figure matrix: decay constant 1/720
FIG2 = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]])

ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]])


def example_phi(t):
    """Closed-form propagator norm of EXAMPLE_2D."""
    return np.exp(-t / 2.0) * np.sqrt((2.0 + t**2 + t * np.sqrt(4.0 + t**2)) / 2.0)


def example_bd(tau):
    """Closed-form midpoint propagator of EXAMPLE_2D."""
    return (1.0 / (4.0 + tau) ** 2) * np.array(
        [
            [16.0 + 8.0 * tau - tau**2, -8.0 * tau],
            [8.0 * tau, 16.0 - 8.0 * tau - tau**2],
        ]
    )


def example_phi2(tau):
    """Closed-form ||B_d(tau)^2|| of EXAMPLE_2D, analytic for 0 <= tau < 4."""
    inner = np.sqrt(tau**4 + 224.0 * tau**2 + 256.0)
    return (
        abs(4.0 - tau)
        / (tau + 4.0) ** 3
        * np.sqrt(tau**4 + 480.0 * tau**2 + 256.0 + 32.0 * tau * inner)
    )


@pytest.fixture
def sys_example():
    return certify_semidissipative(EXAMPLE_2D)


@pytest.fixture
def sys_fig1():
    return certify_semidissipative(FIG1)


@pytest.fixture
def sys_fig2():
    return certify_semidissipative(FIG2)
