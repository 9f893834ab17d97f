"""Independent brute-force oracles used to freeze expected values.

The sampling minimizer evaluates the restricted quadratic form directly on
unit vectors of the kernel subspace instead of going through sigma_min, so
it cross-checks the SVD route without sharing it.
"""

import numpy as np

from hypokit.linalg import nullspace_basis


def kernel_subspace(sys, m: int) -> np.ndarray:
    if m == 0:
        return np.eye(sys.dim, dtype=complex)
    blocks = []
    power = np.eye(sys.dim, dtype=complex)
    for _ in range(m):
        blocks.append(sys.sqrt_hermitian @ power)
        power = power @ sys.B
    return nullspace_basis(np.vstack(blocks), sys.tol)


def sampled_min_value(sys, m: int, samples: int = 100_000, seed: int = 0) -> float:
    """min ||sqrt(B_H) B^m y||^2 over sampled unit y in the kernel subspace.

    Dimension 1 is exact (the form is constant on the circle |alpha| = 1);
    dimension 2 of a real system uses a uniform angular grid; anything
    else falls back to random unit samples and is only trustworthy when
    the form is (nearly) constant.
    """
    basis = kernel_subspace(sys, m)
    d = basis.shape[1]
    if d == 0:
        raise ValueError("trivial kernel subspace")
    restricted = sys.sqrt_hermitian @ np.linalg.matrix_power(sys.B, m) @ basis
    gram = restricted.conj().T @ restricted

    if d == 1:
        return float(np.real(gram[0, 0]))

    is_real = (
        np.allclose(sys.B.imag, 0.0)
        and np.allclose(basis.imag, 0.0, atol=1e-12)
    )
    if d == 2 and is_real:
        theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        g = gram.real
        vals = (
            g[0, 0] * np.cos(theta) ** 2
            + (g[0, 1] + g[1, 0]) * np.cos(theta) * np.sin(theta)
            + g[1, 1] * np.sin(theta) ** 2
        )
        return float(vals.min())

    rng = np.random.default_rng(seed)
    z = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    vals = np.real(np.einsum("si,ij,sj->s", z.conj(), gram, z))
    return float(vals.min())
