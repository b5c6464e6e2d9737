import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from conftest import hermite_ref, special_hermite_ref
from hmh.numerics import QuadratureError, enumerate_indices, gaussian_grid
from hmh.special_functions import (K_MAX, dim_pm, hermite_function, laguerre, laguerre_function,
                                   laguerre_function_imag, scaled_hermite, special_hermite,
                                   special_hermite_prefactor, special_hermite_table)


def test_hermite_matches_scipy_at_complex_points():
    x = np.array([0.0, 0.7, -2.3, 1.1 + 0.4j, -0.5 - 1.3j])
    for k in (0, 1, 2, 5, 12, 30):
        assert np.allclose(hermite_function(k, x), hermite_ref(k, x), rtol=1e-11, atol=1e-14)


def test_hermite_range_checked():
    with pytest.raises(ValueError):
        hermite_function(K_MAX + 1, 0.3)
    with pytest.raises(ValueError):
        hermite_function(-1, 0.3)


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0, -2.0])
@pytest.mark.parametrize("n", [1, 2])
def test_scaled_hermite_orthonormal(lam, n):
    idx = enumerate_indices(n, 6)
    nodes, wts = gaussian_grid(12, np.zeros(n), 1 / math.sqrt(abs(lam)))
    V = np.stack([scaled_hermite(a, lam, nodes) for a in idx])
    G = (V * wts) @ V.T
    assert np.max(np.abs(G - np.eye(len(idx)))) < 1e-10


def test_scaled_hermite_rejects_zero_lambda():
    with pytest.raises(ValueError):
        scaled_hermite((0,), 0.0, np.zeros((1, 1)))


def test_laguerre_matches_scipy():
    x = np.linspace(-3, 12, 31)
    for m in (0, 1, 2, 7, 20):
        for a in (0, 1, 3):
            assert np.allclose(laguerre(m, a, x), eval_genlaguerre(m, a, x), rtol=1e-12, atol=1e-12)


def test_laguerre_complex_argument_and_range():
    z = 0.3 + 0.8j
    assert laguerre(4, 1, z) == pytest.approx(complex(eval_genlaguerre(4, 1, z)), rel=1e-12)
    with pytest.raises(ValueError):
        laguerre(-1, 0, 1.0)


@pytest.mark.parametrize("lam", [1.0, -1.5, 0.4])
def test_special_hermite_brute_force_real_and_complex(lam):
    pts = [(0.3, -0.8), (0.4 + 0.3j, -0.2 - 0.5j), (-1.0 + 0.1j, 0.6j)]
    for a, b in [(0, 0), (1, 0), (0, 2), (3, 1), (2, 4)]:
        for z, w in pts:
            got = special_hermite((a,), (b,), lam, [z], [w])
            ref = special_hermite_ref(a, b, lam, z, w)
            assert abs(got - ref) < 1e-10 * max(1.0, abs(ref)), (a, b, z, w)


def test_phi00_closed_form():
    lam, x, u = -1.7, 0.5, 1.2
    ref = (2 * math.pi) ** -0.5 * abs(lam) ** 0.5 * math.exp(-abs(lam) * (x * x + u * u) / 4)
    assert special_hermite((0,), (0,), lam, [x], [u]) == pytest.approx(ref, rel=1e-13)
    assert special_hermite_prefactor(lam, 1) == pytest.approx((2 * math.pi) ** -0.5 * abs(lam) ** 0.5)


def test_special_hermite_orthonormal_on_r2():
    lam = 1.3
    idx = [(a, b) for a in range(4) for b in range(4)]
    nodes, wts = gaussian_grid(14, np.zeros(2), math.sqrt(2 / lam))
    tab = special_hermite_table(3, lam, nodes[:, :1], nodes[:, 1:])[:, 0]
    V = np.stack([tab[:, a, b] for a, b in idx])
    G = (V * wts) @ V.conj().T
    assert np.max(np.abs(G - np.eye(len(idx)))) < 1e-12


def test_special_hermite_symmetries():
    lam, x, u = 0.9, np.array([0.4]), np.array([-0.7])
    for a, b in [(1, 2), (0, 3), (2, 2)]:
        p = special_hermite((a,), (b,), lam, x, u)
        # conj phi_ab(X) = phi_ba(-X); parity (-1)^{a+b}; phi^{-lam} = conj phi^{lam}
        assert np.conj(p) == pytest.approx(special_hermite((b,), (a,), lam, -x, -u), abs=1e-14)
        assert special_hermite((a,), (b,), lam, -x, -u) == pytest.approx((-1) ** (a + b) * p, abs=1e-14)
        assert special_hermite((a,), (b,), -lam, x, u) == pytest.approx(np.conj(p), abs=1e-14)


def test_tensor_product_in_two_dimensions():
    lam, z, w = 1.1, np.array([0.2 + 0.1j, -0.4]), np.array([0.3, 0.5 - 0.2j])
    got = special_hermite((1, 2), (0, 1), lam, z, w)
    ref = special_hermite((1,), (0,), lam, z[:1], w[:1]) * special_hermite((2,), (1,), lam, z[1:], w[1:])
    assert got == pytest.approx(ref, rel=1e-13)


def test_laguerre_function_is_diagonal_special_hermite():
    lam, x, u = -0.8, np.array([0.6]), np.array([0.9])
    for k in range(5):
        lhs = special_hermite((k,), (k,), lam, x, u)
        ref = special_hermite_prefactor(lam, 1) * laguerre_function(k, lam, x, u)
        assert lhs == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("lam", [1.0, -1.5])
def test_diagonal_continuation_to_imaginary_arguments(lam):
    y, v = np.array([0.35]), np.array([-0.2])
    for k in range(5):
        cont = special_hermite((k,), (k,), lam, 2j * y, 2j * v)
        ref = special_hermite_prefactor(lam, 1) * laguerre_function_imag(k, lam, y, v)
        assert cont == pytest.approx(ref, rel=1e-12)
    r2 = float(y @ y + v @ v)
    assert laguerre_function_imag(2, lam, y, v) == pytest.approx(
        eval_genlaguerre(2, 0, -2 * abs(lam) * r2) * math.exp(abs(lam) * r2))


def test_table_node_check_raises_when_underresolved():
    with pytest.raises(QuadratureError):
        special_hermite_table(12, 1.0, np.array([[2.0 + 1.5j]]), np.array([[1.0j]]), n_nodes=3, check=True)
    tab = special_hermite_table(12, 1.0, np.array([[2.0 + 1.5j]]), np.array([[1.0j]]), check=True)
    assert np.all(np.isfinite(tab))


def test_degree_cap():
    with pytest.raises(ValueError):
        special_hermite_table(K_MAX + 1, 1.0, np.zeros((1, 1)), np.zeros((1, 1)))


def test_dim_pm():
    assert [dim_pm(m, 1) for m in range(4)] == [1, 1, 1, 1]
    assert [dim_pm(m, 2) for m in range(4)] == [1, 2, 3, 4]
    assert dim_pm(3, 3) == len([a for a in enumerate_indices(3, 3) if sum(a) == 3])
