"""Hermite, Laguerre and special Hermite functions, with complex arguments.

Normalisation used throughout::

    phi_a^lam(x)        = |lam|^{1/4} h_a(|lam|^{1/2} x)              (n = 1)
    phi_ab^lam(x, u)    = (2pi)^{-1/2} |lam|^{1/2} <pi_lam(x, u) phi_a, phi_b>
    pi_lam(x, u) f(xi)  = exp(i lam (x xi + x u / 2)) f(xi + u)

Higher dimensions are tensor products over coordinates.  The pairing is
continued holomorphically in (z, w); since the Hermite functions are real the
second slot needs no conjugation.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .numerics import QuadratureError, gauss_hermite_rule

K_MAX = 64
LAGUERRE_MAX = 256
PI_QUARTER = math.pi ** -0.25


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if lam == 0.0 or not math.isfinite(lam):
        raise ValueError("lambda must be a nonzero finite real")
    return lam


def hermite_poly_table(kmax: int, x) -> np.ndarray:
    """Polynomial parts P_k with h_k(x) = P_k(x) exp(-x^2/2), k = 0..kmax.

    Shape ``x.shape + (kmax + 1,)``.  Uses the normalised three-term recurrence,
    so no factorials appear.
    """
    x = np.asarray(x)
    dtype = complex if np.iscomplexobj(x) else float
    out = np.empty(x.shape + (kmax + 1,), dtype=dtype)
    out[..., 0] = PI_QUARTER
    if kmax >= 1:
        out[..., 1] = math.sqrt(2.0) * x * PI_QUARTER
    for k in range(1, kmax):
        out[..., k + 1] = (x * math.sqrt(2.0 / (k + 1)) * out[..., k]
                           - math.sqrt(k / (k + 1)) * out[..., k - 1])
    return out


def hermite_function(k: int, x, k_max: int = K_MAX):
    """Normalised Hermite function h_k, entire in x."""
    if not 0 <= k <= k_max:
        raise ValueError(f"order k={k} outside [0, {k_max}]")
    x = np.asarray(x)
    return hermite_poly_table(k, x)[..., k] * np.exp(-x * x / 2)


def scaled_hermite(alpha, lam: float, x, k_max: int = K_MAX):
    """phi_alpha^lam at x (last axis of ``x`` has length n = len(alpha))."""
    lam = _check_lambda(lam)
    x = np.asarray(x)
    alpha = tuple(alpha)
    if x.shape[-1] != len(alpha):
        raise ValueError("x must have trailing dimension n = len(alpha)")
    s = math.sqrt(abs(lam))
    out = 1.0
    for j, a in enumerate(alpha):
        out = out * abs(lam) ** 0.25 * hermite_function(a, s * x[..., j], k_max)
    return out


def laguerre(m: int, alpha_type: int, x):
    """Generalised Laguerre polynomial L_m^alpha(x) via the three-term recurrence."""
    if not 0 <= m <= LAGUERRE_MAX:
        raise ValueError(f"degree m={m} outside [0, {LAGUERRE_MAX}]")
    x = np.asarray(x)
    a = alpha_type
    prev = np.ones_like(x, dtype=complex if np.iscomplexobj(x) else float)
    if m == 0:
        return prev
    cur = 1.0 + a - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + a + 1 - x) * cur - (k + a) * prev) / (k + 1)
    return cur


# ---------------------------------------------------------------- special Hermite

def _table_1d(max_degree: int, lam: float, z, w, n_nodes: int, split: bool = False):
    """phi_ab^lam(z, w) for one coordinate; shape z.shape + (M+1, M+1).

    With ``split`` the real part of the Gaussian exponent is returned separately
    as ``(table * exp(-re), re)``, which stays finite far from the real axis.
    """
    rule = gauss_hermite_rule(n_nodes)
    big = abs(lam)
    sg = math.copysign(1.0, lam)
    root = math.sqrt(big)
    # complete the square: xi = eta/sqrt|lam| - (w - i sgn z)/2 turns the Gaussian
    # part of the integrand into exp(-eta^2) (a contour shift for complex z, w)
    shift = (w - 1j * sg * z) / 2
    xi = rule.nodes / root - shift[..., None]
    pa = hermite_poly_table(max_degree, root * (xi + w[..., None]))
    pb = hermite_poly_table(max_degree, root * xi)
    expo = big * shift ** 2 - big * w * w / 2 + 0.5j * lam * z * w
    tab = np.matmul(np.swapaxes(pa * rule.weights[:, None], -1, -2), pb)
    if split:
        return (2 * math.pi) ** -0.5 * root * np.exp(1j * expo.imag)[..., None, None] * tab, expo.real
    return (2 * math.pi) ** -0.5 * root * np.exp(expo)[..., None, None] * tab


def special_hermite_table(max_degree: int, lam: float, z, w, n_nodes: int | None = None,
                          check: bool = False, rtol: float = 1e-9, split: bool = False):
    """One-coordinate special Hermite values for all orders up to ``max_degree``.

    ``z`` and ``w`` have shape ``(..., n)``; the result has shape
    ``(..., n, M+1, M+1)`` holding phi_{ab}^lam(z_j, w_j).  Products over the
    coordinate axis give the n-dimensional functions (see ``basis_values``).
    ``split=True`` returns ``(scaled_table, log_scale)`` with log_scale of shape
    ``(..., n)`` and table = scaled_table * exp(log_scale); it skips ``check``.
    """
    lam = _check_lambda(lam)
    if max_degree > K_MAX:
        raise ValueError(f"degree {max_degree} exceeds K_MAX={K_MAX}")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if n_nodes is None:
        # exact once n_nodes > max_degree; the margin guards rounding only
        n_nodes = max_degree + 4
    if split or not check:
        return _table_1d(max_degree, lam, z, w, n_nodes, split=split)
    a = _table_1d(max_degree, lam, z, w, n_nodes)
    b = _table_1d(max_degree, lam, z, w, n_nodes + 8)
    scale = np.max(np.abs(b), axis=(-2, -1), keepdims=True)
    if np.any(np.abs(a - b) > rtol * np.maximum(scale, 1e-300)):
        raise QuadratureError(
            f"special Hermite quadrature with {n_nodes} nodes is not converged")
    return b


def basis_values(tables: np.ndarray, alphas, betas) -> np.ndarray:
    """Multiply one-coordinate tables into phi_{alpha beta}(z, w).

    ``tables`` has shape ``(P, n, M+1, M+1)``; ``alphas``/``betas`` are integer
    arrays of shape ``(K, n)``.  Returns shape ``(P, K)``.
    """
    alphas = np.asarray(alphas, dtype=int).reshape(-1, tables.shape[1])
    betas = np.asarray(betas, dtype=int).reshape(-1, tables.shape[1])
    out = np.ones((tables.shape[0], alphas.shape[0]), dtype=complex)
    for j in range(tables.shape[1]):
        out = out * tables[:, j, alphas[:, j], betas[:, j]]
    return out


def special_hermite(alpha, beta, lam: float, z, w, n_nodes: int | None = None,
                    check: bool = True) -> complex:
    """phi_{alpha beta}^lam(z, w) at a single complex point.

    Quadrature with ``n_nodes`` Gauss-Hermite nodes is exact once
    ``n_nodes > (|alpha| + |beta|)/2``; with ``check`` the value is compared
    against a rule with eight more nodes and ``QuadratureError`` is raised on
    disagreement beyond 1e-9 relative.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    n = len(alpha)
    if len(beta) != n:
        raise ValueError("alpha and beta must have the same length")
    z = np.asarray(z, dtype=complex).reshape(1, n)
    w = np.asarray(w, dtype=complex).reshape(1, n)
    mdeg = max(max(alpha), max(beta))
    tab = special_hermite_table(mdeg, lam, z, w, n_nodes=n_nodes, check=check)
    return complex(basis_values(tab, [alpha], [beta])[0, 0])


def special_hermite_prefactor(lam: float, n: int) -> float:
    """(2pi)^{-n/2} |lam|^{n/2}, the factor relating phi_{ab} to the plain pairing."""
    return (2 * math.pi) ** (-n / 2) * abs(_check_lambda(lam)) ** (n / 2)


# ---------------------------------------------------------------- Laguerre functions

def laguerre_function(m: int, lam: float, x, u):
    """L_m^{n-1}(|lam| r^2 / 2) exp(-|lam| r^2 / 4), r^2 = |x|^2 + |u|^2."""
    lam = _check_lambda(lam)
    x = np.asarray(x)
    u = np.asarray(u)
    n = x.shape[-1]
    r2 = np.sum(x * x, axis=-1) + np.sum(u * u, axis=-1)
    return laguerre(m, n - 1, abs(lam) * r2 / 2) * np.exp(-abs(lam) * r2 / 4)


def laguerre_function_imag(m: int, lam: float, y, v):
    """Continuation of the Laguerre function to (2iy, 2iv).

    Equals L_m^{n-1}(-2|lam| r^2) exp(|lam| r^2) with r^2 = |y|^2 + |v|^2.
    """
    lam = _check_lambda(lam)
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    n = y.shape[-1]
    r2 = np.sum(y * y, axis=-1) + np.sum(v * v, axis=-1)
    return laguerre(m, n - 1, -2 * abs(lam) * r2) * np.exp(abs(lam) * r2)


@lru_cache(maxsize=None)
def dim_pm(m: int, n: int) -> int:
    """Dimension of span{phi_alpha : |alpha| = m} in n variables."""
    return math.comb(m + n - 1, n - 1)
