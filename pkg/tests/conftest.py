import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermval

from hmh.harness import RunConfig


def hermite_ref(k, x):
    """Normalised Hermite function from numpy's physicists' Hermite series."""
    x = np.asarray(x, dtype=complex)
    norm = math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
    return hermval(x, [0] * k + [1]) * np.exp(-x * x / 2) / norm


def special_hermite_ref(a, b, lam, z, w, half_width=14.0, n=6001):
    """phi_ab^lam(z, w), n = 1, by a dense trapezoid rule on the defining integral
    (2pi)^{-1/2}|lam|^{1/2} int exp(i lam (z xi + z w / 2)) phi_a(xi + w) phi_b(xi) d xi."""
    L = abs(lam)
    xi = np.linspace(-half_width, half_width, n) / math.sqrt(L)
    h = xi[1] - xi[0]
    phi = lambda k, x: L ** 0.25 * hermite_ref(k, math.sqrt(L) * x)
    f = np.exp(1j * lam * (z * xi + z * w / 2)) * phi(a, xi + w) * phi(b, xi)
    return (2 * math.pi) ** -0.5 * L ** 0.5 * h * np.sum(f)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_config():
    return RunConfig(M_trunc=2, lambda_nodes=3, n_random=2, n_random_slices=2).validate()
