"""Shared builders for the test suite."""

import numpy as np

from superdirichlet import BoundaryLogModulus, CircleGrid, OuterFunction


def rand_outer(rng, n, terms=6, scale=0.8):
    """Smooth random outer function with bounded log modulus."""
    thetas = CircleGrid(n).thetas
    h = np.zeros(n)
    for k in range(1, terms + 1):
        a, b = rng.normal(scale=scale / k**2, size=2)
        h += a * np.cos(k * thetas) + b * np.sin(k * thetas)
    return OuterFunction(BoundaryLogModulus(h))


def harmonic_number(m: int) -> float:
    return sum(1.0 / i for i in range(1, m + 1))
