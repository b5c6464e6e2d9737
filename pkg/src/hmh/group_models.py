"""Heisenberg group, the motion group H^n x| T^d, and the torus model.

Group law on H^n (first vector x, second u)::

    (x, u, t)(x', u', t') = (x + x', u + u', t + t' + (x'.u - u'.x)/2)

The torus T^d (d <= n) rotates the coordinate planes (x_j, u_j), j < d.
Complex points and complex angles theta + iH are handled by the same
formulas, which is how the complexified group G = K exp(i h) acts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import gauss_hermite_rule, periodic_trapezoid_rule


def _vec(a, dtype=float):
    return np.atleast_1d(np.asarray(a, dtype=dtype))


@dataclass(frozen=True)
class HeisenbergElement:
    x: np.ndarray
    u: np.ndarray
    t: float

    def __post_init__(self):
        x, u = _vec(self.x), _vec(self.u)
        if x.shape != u.shape or x.ndim != 1:
            raise ValueError("x and u must be vectors of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def identity(cls, n: int) -> "HeisenbergElement":
        return cls(np.zeros(n), np.zeros(n), 0.0)


def heisenberg_multiply(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    return HeisenbergElement(a.x + b.x, a.u + b.u,
                             a.t + b.t + 0.5 * (b.x @ a.u - b.u @ a.x))


def heisenberg_inverse(a: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-a.x, -a.u, -a.t)


def rotate(theta, x, u):
    """Apply the torus element exp(i theta) to (x, u).

    ``theta`` has length d <= n and acts on the first d coordinate planes.
    Works for complex ``theta`` (i.e. theta + iH) and complex points, which
    is the complex-linear extension used for K exp(iH).
    Broadcasts over leading axes of ``x``/``u``.
    """
    theta = np.asarray(theta)
    x = np.asarray(x)
    u = np.asarray(u)
    d = theta.shape[-1] if theta.ndim else 1
    theta = theta.reshape(theta.shape if theta.ndim else (1,))
    n = x.shape[-1]
    if d > n:
        raise ValueError("torus dimension exceeds n")
    c = np.ones(theta.shape[:-1] + (n,), dtype=theta.dtype)
    s = np.zeros(theta.shape[:-1] + (n,), dtype=theta.dtype)
    c[..., :d] = np.cos(theta)
    s[..., :d] = np.sin(theta)
    return x * c - u * s, x * s + u * c


@dataclass(frozen=True)
class TorusElement:
    """exp(i theta) in T^d, optionally complexified to exp(i theta) exp(-H)."""

    theta: np.ndarray
    H: np.ndarray | None = None

    def __post_init__(self):
        th = _vec(self.theta)
        H = np.zeros_like(th) if self.H is None else _vec(self.H)
        if H.shape != th.shape:
            raise ValueError("theta and H must have equal length")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "H", H)

    @property
    def d(self) -> int:
        return self.theta.size

    @property
    def angle(self) -> np.ndarray:
        """The complex angle theta + iH."""
        return self.theta + 1j * self.H

    @property
    def is_real(self) -> bool:
        return not np.any(self.H)

    @classmethod
    def identity(cls, d: int) -> "TorusElement":
        return cls(np.zeros(d))


def torus_multiply(a: TorusElement, b: TorusElement) -> TorusElement:
    return TorusElement(np.mod(a.theta + b.theta, 2 * np.pi), a.H + b.H)


def torus_inverse(a: TorusElement) -> TorusElement:
    return TorusElement(np.mod(-a.theta, 2 * np.pi), -a.H)


@dataclass(frozen=True)
class HMElement:
    h: HeisenbergElement
    k: TorusElement

    def __post_init__(self):
        if self.k.d > self.h.n:
            raise ValueError("torus dimension exceeds n")
        if not self.k.is_real:
            raise ValueError("HMElement needs a real torus element")


def hm_multiply(a: HMElement, b: HMElement) -> HMElement:
    """(X, k)(Y, h) = (X . (k . Y), k h)."""
    if a.h.n != b.h.n or a.k.d != b.k.d:
        raise ValueError("dimension mismatch")
    bx, bu = rotate(a.k.theta, b.h.x, b.h.u)
    rotated = HeisenbergElement(bx, bu, b.h.t)
    return HMElement(heisenberg_multiply(a.h, rotated), torus_multiply(a.k, b.k))


def hm_inverse(a: HMElement) -> HMElement:
    kinv = torus_inverse(a.k)
    hinv = heisenberg_inverse(a.h)
    x, u = rotate(kinv.theta, hinv.x, hinv.u)
    return HMElement(HeisenbergElement(x, u, hinv.t), kinv)


def hm_identity(n: int, d: int) -> HMElement:
    return HMElement(HeisenbergElement.identity(n), TorusElement.identity(d))


# ---------------------------------------------------------------- irreducibles of T^d

@dataclass(frozen=True)
class TorusIrrep:
    weight: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(m) for m in self.weight))

    @property
    def degree(self) -> int:
        return 1

    @property
    def casimir(self) -> float:
        return float(sum(m * m for m in self.weight))

    def character(self, theta, H=None):
        """chi_m(exp(i theta) exp(-H)) = exp(i m.(theta + iH))."""
        ang = np.asarray(theta, dtype=complex)
        if H is not None:
            ang = ang + 1j * np.asarray(H)
        return np.exp(1j * (ang @ np.asarray(self.weight, dtype=float)))


def characters(modes, theta, H=None) -> np.ndarray:
    """exp(i m.(theta + iH)) for weights ``modes`` (K, d) at angles (..., d)."""
    ang = np.asarray(theta, dtype=complex)
    if H is not None:
        ang = ang + 1j * np.asarray(H)
    return np.exp(1j * ang @ np.asarray(modes, dtype=float).T)


def peter_weyl_coefficients(samples, max_weight: int | None = None,
                            tol: float = 1e-12) -> dict[int, complex]:
    """Fourier coefficients of a function on T^1 sampled at the trapezoid nodes.

    Coefficients of magnitude below ``tol`` are dropped.  Raises if a weight
    that would alias (|m| >= N/2) is requested.
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.size
    if max_weight is None:
        max_weight = (n - 1) // 2
    if 2 * max_weight >= n:
        raise ValueError(f"weights up to {max_weight} alias on a grid of {n} points")
    fhat = np.fft.fft(samples) / n
    out = {}
    for m in range(-max_weight, max_weight + 1):
        c = fhat[m % n]
        if abs(c) > tol:
            out[m] = complex(c)
    return out


def metaplectic_phase(theta, alpha, lam: float, H=None) -> complex:
    """Eigenvalue of mu_lam(k) on phi_alpha^lam for the full torus.

    mu_lam(exp(i theta)) phi_alpha = exp(i sgn(lam) alpha.theta) phi_alpha.
    This is the sign for which pi_lam(k.(x,u)) = mu(k) pi_lam(x,u) mu(k)^*
    holds with the rotation convention of ``rotate``.  A complex angle
    theta + iH gives the holomorphic extension.
    """
    ang = np.asarray(theta, dtype=complex)
    if H is not None:
        ang = ang + 1j * np.asarray(H)
    alpha = np.asarray(alpha, dtype=float)
    if ang.shape[-1] != alpha.shape[-1]:
        raise ValueError("metaplectic phases need the full torus (d = n)")
    return np.exp(1j * math.copysign(1.0, lam) * (ang @ alpha))


def pm_decomposition(m: int, n: int, d: int) -> list[tuple[int, list[tuple[int, ...]]]]:
    """K-irreducible pieces of span{phi_alpha : |alpha| = m} for the torus T^d."""
    from .numerics import indices_of_degree
    if d != n:
        raise ValueError("multiplicity one is only guaranteed for the full torus (d = n)")
    return [(a, [alpha]) for a, alpha in enumerate(indices_of_degree(n, m))]


# ---------------------------------------------------------------- heat kernel and measure

class SeriesError(RuntimeError):
    pass


def heat_kernel_band(t: float, H_norm: float = 0.0, tol: float = 1e-12, limit: int = 10_000) -> int:
    """Smallest M with sum_{|m|>M} exp(-m^2 t/2 + |m| |H|) below ``tol`` (per axis)."""
    if t <= 0:
        raise ValueError("t must be positive")
    for M in range(limit + 1):
        m = np.arange(M + 1, M + 200)
        tail = 2 * np.sum(np.exp(-m * m * t / 2 + m * H_norm))
        if tail < tol:
            return M
    raise SeriesError(f"no band <= {limit} reaches tail {tol} for t={t}, |H|={H_norm}")


def heat_kernel_K(t: float, theta, H=None, tol: float = 1e-12) -> complex:
    """q_t(k) = sum_m exp(-|m|^2 t / 2) chi_m(k) on T^d, continued to k exp(-H)."""
    theta = _vec(theta)
    H = np.zeros_like(theta) if H is None else _vec(H)
    d = theta.size
    M = heat_kernel_band(t, float(np.max(np.abs(H))) if H.size else 0.0, tol / max(d, 1))
    m = np.arange(-M, M + 1)
    out = 1.0 + 0j
    for j in range(d):
        out *= np.sum(np.exp(-m * m * t / 2) * np.exp(1j * m * (theta[j] + 1j * H[j])))
    return complex(out)


def torus_heat_convolve(coeffs: dict, t: float) -> dict:
    """(f * q_t) for f given by Fourier coefficients: multiply by exp(-|m|^2 t/2)."""
    return {m: c * math.exp(-sum(k * k for k in np.atleast_1d(m)) * t / 2)
            for m, c in coeffs.items()}


def g_measure_density(t: float, H) -> float:
    """rho_t(H) = (pi t)^{-d/2} exp(-|H|^2 / t); int exp(-2 m.H) rho_t = exp(|m|^2 t)."""
    if t <= 0:
        raise ValueError("t must be positive")
    H = _vec(H)
    return float((math.pi * t) ** (-H.size / 2) * math.exp(-(H @ H) / t))


def g_measure_rule(t: float, d: int, n_theta: int, n_h: int):
    """Tensor rule for normalised Haar x rho_t(H) dH on T^d x R^d.

    Returns (theta, H, weights) with theta, H of shape (G, d).
    """
    tr = periodic_trapezoid_rule(n_theta)
    gh = gauss_hermite_rule(n_h)
    h1 = math.sqrt(t) * gh.nodes
    w1 = gh.weights / math.sqrt(math.pi)  # rho_t(H) dH becomes exp(-eta^2) d eta / sqrt(pi)
    th = np.stack(np.meshgrid(*([tr.nodes] * d), indexing="ij"), -1).reshape(-1, d)
    hh = np.stack(np.meshgrid(*([h1] * d), indexing="ij"), -1).reshape(-1, d)
    wt = np.prod(np.stack(np.meshgrid(*([tr.weights / (2 * np.pi)] * d), indexing="ij"), -1)
                 .reshape(-1, d), axis=1)
    wh = np.prod(np.stack(np.meshgrid(*([w1] * d), indexing="ij"), -1).reshape(-1, d), axis=1)
    G = th.shape[0] * hh.shape[0]
    theta = np.repeat(th, hh.shape[0], axis=0)
    Hs = np.tile(hh, (th.shape[0], 1))
    weights = np.repeat(wt, hh.shape[0]) * np.tile(wh, th.shape[0])
    assert theta.shape == (G, d)
    return theta, Hs, weights


def character_gram(modes, t: float, n_theta: int | None = None, n_h: int = 32) -> np.ndarray:
    """Quadrature of int_G chi_m(g) conj(chi_m'(g)) d nu(g) for the given weights."""
    modes = np.asarray(modes, dtype=int)
    if modes.ndim == 1:
        modes = modes[:, None]
    d = modes.shape[1]
    if n_theta is None:
        n_theta = 2 * int(np.max(np.abs(modes), initial=0)) + 3
    theta, H, w = g_measure_rule(t, d, n_theta, n_h)
    chi = characters(modes, theta, H)
    return (chi * w[:, None]).T @ chi.conj()


def holomorphic_torus_norm(coeffs: dict, H, n_theta: int | None = None) -> float:
    """int_K |f(k exp(iH))|^2 dk by trapezoid quadrature, f a trigonometric polynomial."""
    modes = np.array([np.atleast_1d(m) for m in coeffs], dtype=int)
    vals = np.array(list(coeffs.values()), dtype=complex)
    d = modes.shape[1]
    H = _vec(H)
    if n_theta is None:
        n_theta = 2 * int(np.max(np.abs(modes))) + 3
    tr = periodic_trapezoid_rule(n_theta)
    th = np.stack(np.meshgrid(*([tr.nodes] * d), indexing="ij"), -1).reshape(-1, d)
    f = characters(modes, th, np.broadcast_to(H, th.shape)) @ vals
    return float(np.mean(np.abs(f) ** 2))


def lassalle_rhs(coeffs: dict, H) -> float:
    """sum_m |f^(m)|^2 chi_m(exp 2iH) for the torus."""
    H = _vec(H)
    return float(sum(abs(c) ** 2 * math.exp(-2 * float(np.atleast_1d(m) @ H))
                     for m, c in coeffs.items()))
