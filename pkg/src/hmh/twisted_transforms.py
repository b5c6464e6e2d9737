"""Lambda-slices, twisted convolution, heat kernels and Bergman norms.

A function on the motion group is stored through its central Fourier slices
``f^lam(x, u, k) = int f(x, u, t, k) exp(i lam t) dt`` sampled on a lambda
grid.  Each slice is a finite sum

    f^lam(x, u, k) = sum c[alpha, beta, m] phi_{alpha beta}^lam(x, u) chi_m(k)

so that heat and Poisson semigroups act by multipliers and holomorphic
extensions are obtained by evaluating the basis at complex arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .group_models import characters, character_gram, heat_kernel_K, heat_kernel_band
from .numerics import (EPS_FLOOR, QuadratureError, VerificationReport, gauss_legendre_rule,
                       gaussian_grid, periodic_trapezoid_rule)
from .special_functions import _check_lambda, basis_values, special_hermite_table

# the heat multiplier acts on the second index: phi_{ab} * p_t = exp(-t(2|b|+n)|lam|) phi_{ab}
HEAT_INDEX = "beta"
FOURIER_T_CONSTANT = 1.0 / (2 * math.pi)  # ||f||^2 = FOURIER_T_CONSTANT * int ||f^lam||^2 d lam
CHUNK = 8192


@dataclass(frozen=True)
class TwistedSlice:
    lam: float
    n: int
    d: int
    alphas: np.ndarray
    betas: np.ndarray
    modes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        _check_lambda(self.lam)
        k = len(self.values)
        al = np.asarray(self.alphas, dtype=int).reshape(k, self.n)
        be = np.asarray(self.betas, dtype=int).reshape(k, self.n)
        mo = np.asarray(self.modes, dtype=int).reshape(k, self.d)
        va = np.asarray(self.values, dtype=complex).reshape(k)
        if np.any(al < 0) or np.any(be < 0):
            raise ValueError("multi-indices must be non-negative")
        if self.d > self.n:
            raise ValueError("torus dimension d must not exceed n")
        keys = np.concatenate([al, be, mo], axis=1)
        if len({tuple(r) for r in keys}) != k:
            raise ValueError("duplicate coefficient keys")
        for name, arr in (("alphas", al), ("betas", be), ("modes", mo), ("values", va)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def from_coeffs(cls, lam: float, n: int, d: int, coeffs: dict) -> "TwistedSlice":
        """Build from ``{(alpha, beta, m): value}``; ``m`` is a d-tuple (``()`` when d = 0)."""
        items = list(coeffs.items())
        al = [k[0] for k, _ in items]
        be = [k[1] for k, _ in items]
        mo = [tuple(k[2]) if len(k) > 2 else () for k, _ in items]
        k = len(items)
        return cls(lam, n, d, np.array(al, dtype=int).reshape(k, n),
                   np.array(be, dtype=int).reshape(k, n),
                   np.array(mo, dtype=int).reshape(k, d),
                   np.array([v for _, v in items], dtype=complex))

    @classmethod
    def zero(cls, lam: float, n: int, d: int) -> "TwistedSlice":
        return cls.from_coeffs(lam, n, d, {})

    @property
    def coeffs(self) -> dict:
        return {(tuple(a), tuple(b), tuple(m)): complex(v)
                for a, b, m, v in zip(self.alphas.tolist(), self.betas.tolist(),
                                      self.modes.tolist(), self.values)}

    def __len__(self):
        return len(self.values)

    @property
    def max_degree(self) -> int:
        if len(self) == 0:
            return 0
        return int(max(self.alphas.max(), self.betas.max()))

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def with_values(self, values) -> "TwistedSlice":
        return TwistedSlice(self.lam, self.n, self.d, self.alphas, self.betas, self.modes, values)

    def scaled(self, c: complex) -> "TwistedSlice":
        return self.with_values(self.values * c)

    def __add__(self, other: "TwistedSlice") -> "TwistedSlice":
        if (other.lam, other.n, other.d) != (self.lam, self.n, self.d):
            raise ValueError("slices live on different lambda or dimensions")
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc.get(k, 0) + v
        return TwistedSlice.from_coeffs(self.lam, self.n, self.d, acc)

    # ----- evaluation through the continued basis

    def mode_list(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct K-weights and, per coefficient, the index of its weight."""
        if self.d == 0:
            return np.zeros((1, 0), dtype=int), np.zeros(len(self), dtype=int)
        uniq, inv = np.unique(self.modes, axis=0, return_inverse=True)
        return uniq, inv.reshape(-1)

    def evaluate_modes(self, z, w, n_nodes: int | None = None, log_scale: bool = False):
        """Per-weight amplitudes A_m(z, w) with f^lam(z, w, g) = sum_m A_m chi_m(g).

        ``z``/``w`` have shape (P, n).  Returns (modes (Q, d), A (P, Q)).  With
        ``log_scale`` a third array s (P,) is returned and the amplitudes are
        A exp(-s), so points far off the real axis do not overflow.
        """
        z = np.asarray(z, dtype=complex).reshape(-1, self.n)
        w = np.asarray(w, dtype=complex).reshape(-1, self.n)
        uniq, inv = self.mode_list()
        P = z.shape[0]
        out = np.zeros((P, uniq.shape[0]), dtype=complex)
        logs = np.zeros(P)
        if len(self) == 0:
            return (uniq, out, logs) if log_scale else (uniq, out)
        proj = np.zeros((len(self), uniq.shape[0]), dtype=complex)
        proj[np.arange(len(self)), inv] = self.values
        for s in range(0, P, CHUNK):
            sl = slice(s, s + CHUNK)
            if log_scale:
                tab, re = special_hermite_table(self.max_degree, self.lam, z[sl], w[sl], n_nodes=n_nodes,
                                                split=True)
                logs[sl] = re.sum(axis=-1)
            else:
                tab = special_hermite_table(self.max_degree, self.lam, z[sl], w[sl], n_nodes=n_nodes)
            out[sl] = basis_values(tab, self.alphas, self.betas) @ proj
        return (uniq, out, logs) if log_scale else (uniq, out)

    def evaluate(self, z, w, theta=None, H=None) -> np.ndarray:
        """f^lam(z, w, k exp(iH)) at points (P, n); theta/H broadcast to (P, d)."""
        uniq, A = self.evaluate_modes(z, w)
        if self.d == 0:
            return A[:, 0]
        P = A.shape[0]
        theta = np.zeros((P, self.d)) if theta is None else np.broadcast_to(theta, (P, self.d))
        H = np.zeros((P, self.d)) if H is None else np.broadcast_to(H, (P, self.d))
        return np.sum(A * characters(uniq, theta, H), axis=1)


# ---------------------------------------------------------------- band-limited functions

def bump_profile(lams, a: float, b: float) -> np.ndarray:
    """Smooth bump in |lambda| supported in [a, b] with peak value 1."""
    s = (2 * np.abs(np.asarray(lams, dtype=float)) - (a + b)) / (b - a)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def symmetric_lambda_grid(a: float, b: float, nodes_per_side: int, symmetric: bool = True):
    """Gauss-Legendre nodes on [-b, -a] u [a, b] (or [a, b] only)."""
    if not 0 < a < b:
        raise ValueError("need 0 < a < b; lambda = 0 is excluded")
    rule = gauss_legendre_rule(nodes_per_side, a, b)
    if not symmetric:
        return rule.nodes.copy(), rule.weights.copy()
    return (np.concatenate([-rule.nodes[::-1], rule.nodes]),
            np.concatenate([rule.weights[::-1], rule.weights]))


@dataclass(frozen=True)
class BandLimitedFunction:
    lambdas: np.ndarray
    weights: np.ndarray
    profile: np.ndarray
    slices: tuple

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if not (lam.shape == np.shape(self.weights) == np.shape(self.profile)
                and len(self.slices) == lam.size):
            raise ValueError("one weight, profile value and slice per lambda node")
        if np.any(lam == 0):
            raise ValueError("lambda = 0 must not be a grid node")
        for s, l in zip(self.slices, lam):
            if s.lam != l:
                raise ValueError("slice lambda does not match its grid node")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "profile", np.asarray(self.profile, dtype=float))
        object.__setattr__(self, "slices", tuple(self.slices))

    @property
    def n(self) -> int:
        return self.slices[0].n

    @property
    def d(self) -> int:
        return self.slices[0].d

    @property
    def norm_sq(self) -> float:
        return FOURIER_T_CONSTANT * float(sum(w * s.norm_sq for w, s in zip(self.weights, self.slices)))

    def map_slices(self, fn: Callable[[TwistedSlice], TwistedSlice]) -> "BandLimitedFunction":
        return BandLimitedFunction(self.lambdas, self.weights, self.profile,
                                   tuple(fn(s) for s in self.slices))

    def scaled(self, c: complex) -> "BandLimitedFunction":
        return self.map_slices(lambda s: s.scaled(c))

    def __add__(self, other: "BandLimitedFunction") -> "BandLimitedFunction":
        if not np.array_equal(self.lambdas, other.lambdas):
            raise ValueError("functions live on different lambda grids")
        return BandLimitedFunction(self.lambdas, self.weights, self.profile,
                                   tuple(a + b for a, b in zip(self.slices, other.slices)))

    @classmethod
    def from_pattern(cls, n: int, d: int, coeffs: dict, lambdas, weights, profile,
                     per_sign: dict | None = None) -> "BandLimitedFunction":
        """Slices profile(lam) * coeffs; ``per_sign`` optionally overrides coeffs for lam < 0."""
        slices = []
        for lam, p in zip(lambdas, profile):
            base = per_sign if (per_sign is not None and lam < 0) else coeffs
            slices.append(TwistedSlice.from_coeffs(lam, n, d, {k: p * v for k, v in base.items()}))
        return cls(np.asarray(lambdas), np.asarray(weights), np.asarray(profile), tuple(slices))


# ---------------------------------------------------------------- kernels and convolution

def heat_kernel_twisted(t: float, lam: float, x, u):
    """p_t^lam(x, u) = (4 pi)^{-n} (lam / sinh lam t)^n exp(-(lam/4) coth(lam t) r^2).

    ``x``, ``u`` have a trailing axis of length n and may be complex
    (r^2 = x.x + u.u, no conjugation).
    """
    lam = _check_lambda(lam)
    if t <= 0:
        raise ValueError("t must be positive")
    L = abs(lam)
    if L * t > 700:
        raise OverflowError("|lambda| t > 700 overflows sinh")
    x = np.asarray(x)
    u = np.asarray(u)
    n = x.shape[-1]
    r2 = np.sum(x * x, axis=-1) + np.sum(u * u, axis=-1)
    return (4 * math.pi) ** -n * (L / math.sinh(L * t)) ** n * np.exp(-L / (4 * math.tanh(L * t)) * r2)


def twisted_convolution(F: Callable, G: Callable, lam: float, point, n_points: int = 48,
                        center=None, scale=None, check: bool = True, rtol: float = 1e-8) -> complex:
    """(F *_lam G)(x, u) by tensor Gauss-Hermite quadrature over R^{2n}.

    ``F`` and ``G`` map arrays x, u of shape (P, n) to values (P,).  The rule is
    centred at ``center`` (default: half the evaluation point) with width
    ``scale`` (default 2/sqrt|lam|).
    """
    lam = _check_lambda(lam)
    x0, u0 = (np.atleast_1d(np.asarray(p, dtype=float)) for p in point)
    n = x0.size
    if center is None:
        center = np.concatenate([x0, u0]) / 2
    if scale is None:
        scale = 2 / math.sqrt(abs(lam))

    def compute(N):
        nodes, wts = gaussian_grid(N, center, scale)
        xp, up = nodes[:, :n], nodes[:, n:]
        phase = np.exp(-0.5j * lam * (xp @ u0 - up @ x0))
        terms = wts * F(xp, up) * G(x0 - xp, u0 - up) * phase
        return complex(np.sum(terms)), float(np.sum(np.abs(terms)))

    if not check:
        return compute(n_points)[0]
    (a, mass), (b, _) = compute(n_points), compute(n_points + 8)
    # cancelling integrands (e.g. orthogonal pairs) are judged against their L1 mass
    if abs(a - b) > max(rtol * max(abs(a), abs(b)), 1e-13 * mass, EPS_FLOOR):
        raise QuadratureError(f"twisted convolution not converged at {n_points} nodes: "
                              f"{a} vs {b}")
    return b


def heat_multiplier(lam: float, beta_deg, n: int, t: float):
    return np.exp(-t * (2 * np.asarray(beta_deg) + n) * abs(lam))


def heat_multiplier_apply(slc: TwistedSlice, t: float) -> TwistedSlice:
    """e^{-t L_lam} on coefficients: phi_{ab} -> exp(-t(2|b|+n)|lam|) phi_{ab}."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return slc.with_values(slc.values * heat_multiplier(slc.lam, slc.betas.sum(axis=1), slc.n, t))


def segal_bargmann_multiplier(slc: TwistedSlice, t: float) -> np.ndarray:
    lam = slc.lam
    kcas = np.sum(slc.modes ** 2, axis=1) if slc.d else np.zeros(len(slc))
    return (math.exp(-t * lam * lam) * heat_multiplier(lam, slc.betas.sum(axis=1), slc.n, t)
            * np.exp(-kcas * t / 2))


def segal_bargmann(f: BandLimitedFunction, t: float) -> BandLimitedFunction:
    """f -> f * psi_t, psi_t the product of the H^n and K heat kernels."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return f.map_slices(lambda s: s.with_values(s.values * segal_bargmann_multiplier(s, t)))


def segal_bargmann_by_quadrature(slc: TwistedSlice, t: float, x, u, theta,
                                 n_points: int = 48, n_theta: int | None = None) -> complex:
    """(f * psi_t)^lam at one real point, by twisted-convolution and K-convolution quadrature."""
    lam = slc.lam
    L = abs(lam)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    c = 1 / math.tanh(L * t)
    # Gaussian envelope of F(X') p_t(X - X'): precision |lam|(1 + coth)/4
    center = np.concatenate([x, u]) * c / (1 + c)
    scale = 2 / math.sqrt(L * (1 + c))
    kern = lambda a, b: heat_kernel_twisted(t, lam, a, b)
    if slc.d == 0:
        F = lambda a, b: slc.evaluate(a, b)
        return math.exp(-t * lam * lam) * twisted_convolution(F, kern, lam, (x, u), n_points,
                                                              center, scale)
    if n_theta is None:
        # F has weights up to |m|; q_t is band limited to heat_kernel_band(t) up to 1e-12
        n_theta = 2 * (int(np.max(np.abs(slc.modes), initial=0)) + heat_kernel_band(t)) + 1
    tr = periodic_trapezoid_rule(n_theta)
    grid = np.stack(np.meshgrid(*([tr.nodes] * slc.d), indexing="ij"), -1).reshape(-1, slc.d)
    total = 0j
    for th in grid:
        F = lambda a, b, th=th: slc.evaluate(a, b, theta=th)
        conv = twisted_convolution(F, kern, lam, (x, u), n_points, center, scale)
        total += conv * heat_kernel_K(t, np.mod(theta - th, 2 * np.pi))
    return math.exp(-t * lam * lam) * total / grid.shape[0]


# ---------------------------------------------------------------- Bergman spaces

def log_bergman_weight(t: float, lam: float, z, w):
    """log W_t^lam(z, w); see ``bergman_weight``."""
    lam = _check_lambda(lam)
    if t <= 0:
        raise ValueError("t must be positive")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    n = z.shape[-1]
    x, y, u, v = z.real, z.imag, w.real, w.imag
    L = abs(lam)
    # log p_{2t}(2y, 2v), with log sinh written to stay finite for large |lam| t
    log_sinh = 2 * L * t + math.log1p(-math.exp(-4 * L * t)) - math.log(2)
    log_p = (-n * math.log(4 * math.pi) + n * (math.log(L) - log_sinh)
             - L / math.tanh(2 * L * t) * (np.sum(y * y, -1) + np.sum(v * v, -1)))
    return n * math.log(4.0) + lam * (np.sum(u * y, -1) - np.sum(v * x, -1)) + log_p


def bergman_weight(t: float, lam: float, z, w):
    """W_t^lam(x+iy, u+iv) = 4^n exp(lam(u.y - v.x)) p_{2t}^lam(2y, 2v)."""
    return np.exp(log_bergman_weight(t, lam, z, w))


def _hermitian_sum(slc: TwistedSlice, z, w, log_weights, gram) -> float:
    """sum_p exp(log_weights_p) * A(p) gram A(p)^* over points, chunked.

    The weight and |A|^2 are combined in log form: each overflows on its own
    far from the real axis while their product stays moderate.
    """
    total = 0.0
    for s in range(0, z.shape[0], CHUNK):
        _, A, logs = slc.evaluate_modes(z[s:s + CHUNK], w[s:s + CHUNK], log_scale=True)
        q = np.einsum("pi,ij,pj->p", A, gram, A.conj()).real
        total += float(np.sum(np.exp(log_weights[s:s + CHUNK] + 2 * logs) * q))
    return total


def complex_orbit_grid(lam: float, n: int, n_points: int, outer_center, outer_scale,
                       inner_shift: Callable):
    """Nested Gauss-Hermite grid over C^{2n} = {(x + iy, u + iv)}.

    The outer rule covers (y, v); for each outer node the inner rule covers
    (x, u) centred at ``inner_shift(y, v)`` with width sqrt(2/|lam|), the
    scale of |phi_{ab}(x + iy, u + iv)|^2.
    """
    yv, wo = gaussian_grid(n_points, outer_center, outer_scale)
    base, wi = gaussian_grid(n_points, np.zeros(2 * n), math.sqrt(2 / abs(lam)))
    y, v = yv[:, :n], yv[:, n:]
    cx, cu = inner_shift(y, v)
    x = (base[None, :, :n] + cx[:, None, :]).reshape(-1, n)
    u = (base[None, :, n:] + cu[:, None, :]).reshape(-1, n)
    Y = np.repeat(y, base.shape[0], axis=0)
    V = np.repeat(v, base.shape[0], axis=0)
    wts = np.outer(wo, wi).reshape(-1)
    return x + 1j * Y, u + 1j * V, wts


def bergman_norm(slc: TwistedSlice, t: float, n_points: int | None = None, n_theta: int | None = None,
                 n_h: int = 32, check: bool = True, rtol: float = 1e-6) -> float:
    """int_G int_{C^{2n}} |F(z, w, g)|^2 W_t^lam(z, w) dz dw d nu(g) by quadrature.

    For d = 0 the G factor is absent.  The G-integral is applied as the
    quadrature Gram matrix of the characters present in the slice.
    """
    if len(slc) == 0 or not np.any(slc.values):
        return 0.0
    lam, n = slc.lam, slc.n
    L, sg = abs(lam), math.copysign(1.0, lam)
    if slc.d == 0:
        gram = np.ones((1, 1), dtype=complex)
    else:
        uniq, _ = slc.mode_list()
        gram = character_gram(uniq, t, n_theta=n_theta, n_h=n_h)
    if n_points is None:
        # |F|^2 is a polynomial of degree <= 4M in each real variable times the envelope
        n_points = 2 * slc.max_degree + 2
    # after the (x, u) integral the (y, v) envelope is exp(-|lam|(coth 2|lam|t - 1)|(y,v)|^2)
    a = L * (1 / math.tanh(2 * L * t) - 1)

    def compute(N):
        z, w, wts = complex_orbit_grid(lam, n, N, np.zeros(2 * n), 1 / math.sqrt(a),
                                       lambda y, v: (-sg * v, sg * y))
        return _hermitian_sum(slc, z, w, np.log(wts) + log_bergman_weight(t, lam, z, w), gram)

    if not check:
        return compute(n_points)
    v1, v2 = compute(n_points), compute(n_points + 8)
    if abs(v1 - v2) > rtol * max(abs(v1), abs(v2), EPS_FLOOR):
        raise QuadratureError(f"Bergman norm not converged: {v1} vs {v2}")
    return v2


def direct_integral_norm(f_image: BandLimitedFunction, t: float, **kw) -> float:
    """FOURIER_T_CONSTANT * sum_j w_j exp(2 t lam_j^2) ||f_image^{lam_j}||^2_{A_t^lam}."""
    total = 0.0
    for wj, s in zip(f_image.weights, f_image.slices):
        total += wj * math.exp(2 * t * s.lam ** 2) * bergman_norm(s, t, **kw)
    return FOURIER_T_CONSTANT * total


# ---------------------------------------------------------------- weight probe

def nonnegative_weight_probe(t: float, lam: float = 1.0, alpha: int = 1, beta: int = 0,
                             scale: float = 1.0, single_lambda: bool = False,
                             n_probe: int = 3, radius: float = 0.5) -> VerificationReport:
    """Show that no lambda-independent weight reproduces the norms of two slices.

    F1 = phi_{ab}^{lam} and F2 = (-1)^{a+b} phi_{ba}^{-lam} are the same
    function on R^2.  Their heat transforms at lam and -lam satisfy
    |G1|^2 = rho |G2|^2 pointwise, so any single weight W gives
    ||G1||_W^2 / ||G2||_W^2 = rho, whereas the L^2 norms of F1, F2 agree.
    The margin |rho - ||F1||^2/||F2||^2| / max(...) is therefore an obstruction.
    With ``single_lambda`` both slices sit at ``lam`` and the margin is 0.
    """
    lam = abs(_check_lambda(lam))
    f1 = TwistedSlice.from_coeffs(lam, 1, 0, {((alpha,), (beta,), ()): scale})
    if single_lambda:
        f2 = TwistedSlice.from_coeffs(lam, 1, 0, {((alpha,), (beta,), ()): scale})
    else:
        f2 = TwistedSlice.from_coeffs(-lam, 1, 0, {((beta,), (alpha,), ()): (-1) ** (alpha + beta) * scale})
    g1, g2 = heat_multiplier_apply(f1, t), heat_multiplier_apply(f2, t)
    pts = np.linspace(-radius, radius, n_probe)
    grid = np.stack(np.meshgrid(pts, pts, pts, pts, indexing="ij"), -1).reshape(-1, 4)
    z = (grid[:, 0] + 1j * grid[:, 1])[:, None]
    w = (grid[:, 2] + 1j * grid[:, 3])[:, None]
    a1 = np.abs(g1.evaluate(z, w)) ** 2
    a2 = np.abs(g2.evaluate(z, w)) ** 2
    keep = a2 > 1e-12 * a2.max()
    ratios = a1[keep] / a2[keep]
    rho = float(np.median(ratios))
    spread = float(np.max(np.abs(ratios - rho)) / rho)
    norm_ratio = f1.norm_sq / f2.norm_sq
    margin = abs(rho - norm_ratio) / max(rho, norm_ratio)
    if single_lambda:
        ok = spread < 1e-9 and margin < 1e-9
    else:
        ok = spread < 1e-9 and margin > 1e-6
    return VerificationReport.compare(
        "nonnegative_weight_probe", rho, norm_ratio, tol=0.0,
        params={"t": t, "lambda": lam, "alpha": alpha, "beta": beta, "margin": margin,
                "proportionality_spread": spread, "probe_points": int(keep.sum()),
                "single_lambda": single_lambda},
        passed=ok)
