"""Exact linear solves over fractions.

The Hilbert-form and stencil computations are ill-conditioned in floating
point but have small exact-rational formulations; this keeps them exact.
"""

from __future__ import annotations

from fractions import Fraction


def solve_linear_system(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination with partial (nonzero) pivoting over Fraction."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("system must be square with a matching right-hand side")
    m = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            raise ValueError("singular system")
        m[col], m[pivot_row] = m[pivot_row], m[col]
        pivot = m[col][col]
        m[col] = [x / pivot for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]
