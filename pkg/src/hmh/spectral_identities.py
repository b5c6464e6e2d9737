"""Gutzmer, Poisson, Plancherel and Paley-Wiener identities on H^n x| T^n.

Every check returns a ``VerificationReport`` comparing a quadrature route
(evaluating continued basis functions on complex orbits) with a closed
coefficient route.

Normalisation constants that are fixed by oracles rather than read off the
displayed formulas:

* ``TWISTED_CONSTANT``:  phi_ab *_lam phi_cd = (2pi)^{n/2}|lam|^{-n/2} delta_bc phi_ad
* ``PLANCHEREL_CONSTANT``: ||f||^2 = (1/2pi) * [(2pi)^{-n} sum_s int ||f^(lam,s)||^2 |lam|^n]
* ``paley_wiener_constant(n)``: the same bridge for the complexified display
  with prefactor (2pi)^{-2n}, equal to (2pi)^{n-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .group_models import TorusIrrep, characters, metaplectic_phase, rotate
from .numerics import (EPS_FLOOR, QuadratureError, VerificationReport, enumerate_indices,
                       gaussian_grid, periodic_trapezoid_rule)
from .special_functions import (basis_values, dim_pm, laguerre, laguerre_function_imag,
                                special_hermite_table)
from .twisted_transforms import FOURIER_T_CONSTANT, BandLimitedFunction, TwistedSlice

PLANCHEREL_CONSTANT = 1.0 / (2 * math.pi)
EXP_GUARD = 700.0


def twisted_constant(lam: float, n: int) -> float:
    return (2 * math.pi) ** (n / 2) * abs(lam) ** (-n / 2)


def paley_wiener_constant(n: int) -> float:
    return (2 * math.pi) ** (n - 1)


def _torus_grid(n_theta: int, d: int):
    tr = periodic_trapezoid_rule(n_theta)
    return np.stack(np.meshgrid(*([tr.nodes] * d), indexing="ij"), -1).reshape(-1, d)


def _sgn(lam: float) -> float:
    return math.copysign(1.0, lam)


# ---------------------------------------------------------------- Gutzmer

def gutzmer_rhs(slc: TwistedSlice, y, v) -> float:
    """sum over (m, a) of phi_{ma}(2iy, 2iv)/dim P_{ma} * sum_alpha |<F, phi_{alpha beta}>|^2.

    For the full torus each P_{ma} is spanned by one phi_beta, so the
    continued spherical function is a product of one-variable Laguerre factors.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    total = 0.0
    for beta, c in zip(slc.betas, slc.values):
        fac = 1.0
        for j, b in enumerate(beta):
            fac *= float(laguerre_function_imag(int(b), slc.lam, y[j:j + 1], v[j:j + 1]))
        total += fac * abs(c) ** 2
    return total


def _orbit_points(lam: float, n: int, N: int, y, v, xshift=None):
    """Gauss-Hermite grid over (x, u) for |F(x+iy, u+iv)|^2 exp(lam(u.y - v.x))."""
    L, sg = abs(lam), _sgn(lam)
    x0 = np.zeros(n) if xshift is None else xshift[0]
    u0 = np.zeros(n) if xshift is None else xshift[1]
    nodes, wts = gaussian_grid(N, np.concatenate([x0 - sg * v, u0 + sg * y]), math.sqrt(2 / L))
    return nodes[:, :n], nodes[:, n:], wts


def gutzmer_lhs(slc: TwistedSlice, y, v, n_theta: int | None = None, n_points: int | None = None,
                check: bool = True, rtol: float = 1e-6) -> float:
    """int_K int_{R^2n} |F(k.(x+iy, u+iv))|^2 exp(lam(u.y - v.x)) dx du dk (K = T^n)."""
    if slc.d != 0:
        raise ValueError("Gutzmer slices carry no K-variable (d = 0)")
    n, lam = slc.n, slc.lam
    y = np.atleast_1d(np.asarray(y, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    M = slc.max_degree
    if n_theta is None:
        n_theta = 2 * M + 3
    if n_points is None:
        n_points = 2 * M + 2
    thetas = _torus_grid(n_theta, n)

    def compute(N):
        x, u, wts = _orbit_points(lam, n, N, y, v)
        wts = wts * np.exp(lam * (u @ y - x @ v))
        z, w = x + 1j * y, u + 1j * v
        acc = 0.0
        for th in thetas:
            zr, wr = rotate(th, z, w)
            acc += float(np.sum(wts * np.abs(slc.evaluate(zr, wr)) ** 2))
        return acc / thetas.shape[0]

    if not check:
        return compute(n_points)
    a, b = compute(n_points), compute(n_points + 8)
    if abs(a - b) > rtol * max(abs(a), abs(b), EPS_FLOOR):
        raise QuadratureError(f"Gutzmer orbit integral not converged: {a} vs {b}")
    return b


def gutzmer_check(slc: TwistedSlice, y, v, tol: float = 1e-5, **kw) -> VerificationReport:
    lhs = gutzmer_lhs(slc, y, v, **kw)
    rhs = gutzmer_rhs(slc, y, v)
    return VerificationReport.compare(
        "gutzmer", lhs, rhs, tol,
        {"lambda": slc.lam, "n": slc.n, "y": np.atleast_1d(y), "v": np.atleast_1d(v),
         "M_trunc": slc.max_degree})


# ---------------------------------------------------------------- Poisson semigroup

def poisson_multiplier(slc: TwistedSlice, q: float) -> np.ndarray:
    lam = slc.lam
    cas = np.sum(slc.modes ** 2, axis=1) if slc.d else np.zeros(len(slc))
    E = (2 * slc.betas.sum(axis=1) + slc.n) * abs(lam) + lam * lam + cas
    return np.exp(-q * np.sqrt(E))


def poisson_apply(f: BandLimitedFunction, q: float) -> BandLimitedFunction:
    """exp(-q Delta^{1/2}) on coefficients."""
    if q < 0:
        raise ValueError("q must be non-negative")
    return f.map_slices(lambda s: s.with_values(s.values * poisson_multiplier(s, q)))


def poisson_lhs(h: BandLimitedFunction, r: float, H, s: float, n_circle: int = 16,
                n_theta: int | None = None, n_points: int | None = None) -> float:
    """Orbit integral of |h(X.(z, w, tau, k1 e^{iH} k2))|^2, n = 1, Re(z, w) = 0.

    X runs over H^1 (t-integral through lambda-Parseval), (Im z, Im w) over the
    circle of radius r with normalised measure, k1, k2 over K.
    """
    if h.n != 1:
        raise ValueError("the sphere integral is implemented for n = 1")
    H = np.atleast_1d(np.asarray(H, dtype=float))
    d = h.d
    M = max(s_.max_degree for s_ in h.slices)
    if n_points is None:
        n_points = 2 * M + 4
    mmax = max((int(np.max(np.abs(s_.modes), initial=0)) for s_ in h.slices), default=0)
    if n_theta is None:
        n_theta = 2 * mmax + 2
    phis = periodic_trapezoid_rule(n_circle).nodes
    k1 = _torus_grid(n_theta, d) if d else np.zeros((1, 0))
    # k1 exp(iH) k2 = (k1 k2) exp(iH) on the torus; both Haar integrals are kept
    ang = (k1[:, None, :] + k1[None, :, :]).reshape(-1, d) if d else np.zeros((1, 0))
    total = 0.0
    for wj, slc in zip(h.weights, h.slices):
        if len(slc) == 0:
            continue
        lam = slc.lam
        circ = 0.0
        for ph in phis:
            y = np.array([r * math.cos(ph)])
            v = np.array([r * math.sin(ph)])
            x, u, wts = _orbit_points(lam, 1, n_points, y, v)
            uniq, A = slc.evaluate_modes(x + 1j * y, u + 1j * v)
            if d:
                chi = characters(uniq, ang, np.broadcast_to(H, ang.shape))
                vals = np.mean(np.abs(A @ chi.T) ** 2, axis=1)
            else:
                vals = np.abs(A[:, 0]) ** 2
            circ += float(np.sum(wts * np.exp(lam * (u @ y - x @ v)) * vals))
        total += wj * math.exp(2 * lam * s) * circ / n_circle
    return FOURIER_T_CONSTANT * total


def poisson_rhs(h: BandLimitedFunction, r: float, H, s: float, literal_lambda: bool = False,
                dim_convention: str = "pm") -> float:
    """Series side of the Poisson identity, written in terms of h = exp(-q Delta^{1/2}) f.

    ``literal_lambda`` evaluates L_m^{n-1}(-2 lam r^2) exp(lam r^2) with the
    signed lambda; ``dim_convention`` chooses 1/dim P_m ("pm") or 1/dim P_ma ("pma").
    """
    H = np.atleast_1d(np.asarray(H, dtype=float))
    n = h.n
    total = 0.0
    for wj, slc in zip(h.weights, h.slices):
        lam = slc.lam
        lr = lam if literal_lambda else abs(lam)
        acc = 0.0
        for beta, m, c in zip(slc.betas, slc.modes, slc.values):
            deg = int(beta.sum())
            chi = math.exp(-2 * float(m @ H[:len(m)])) if slc.d else 1.0
            dim = dim_pm(deg, n) if dim_convention == "pm" else 1
            lag = float(laguerre(deg, n - 1, -2 * lr * r * r)) * math.exp(lr * r * r)
            acc += chi * lag / dim * abs(c) ** 2
        total += wj * math.exp(2 * lam * s) * acc
    return FOURIER_T_CONSTANT * total


def poisson_identity_check(f: BandLimitedFunction, q: float, r: float, H, s: float,
                           tol: float = 1e-4, **kw) -> VerificationReport:
    h = poisson_apply(f, q)
    lhs = poisson_lhs(h, r, H, s, **kw)
    rhs = poisson_rhs(h, r, H, s)
    rhs_literal = poisson_rhs(h, r, H, s, literal_lambda=True)
    rhs_pma = poisson_rhs(h, r, H, s, dim_convention="pma")
    return VerificationReport.compare(
        "poisson", lhs, rhs, tol,
        {"q": q, "r": r, "H": np.atleast_1d(H), "s": s,
         "ratio_literal_lambda": lhs / rhs_literal if rhs_literal else None,
         "ratio_dim_pma": lhs / rhs_pma if rhs_pma else None,
         "fourier_t_constant": FOURIER_T_CONSTANT})


# ---------------------------------------------------------------- group Fourier transform

@dataclass(frozen=True)
class FourierMatrix:
    """Matrix of f^(lam, sigma) in the basis phi_gamma (columns) -> phi_beta (rows)."""

    lam: float
    sigma: TorusIrrep
    entries: dict

    @property
    def hs_norm_sq(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.entries.values()))


def _require_full_torus(slc: TwistedSlice):
    if slc.d != slc.n:
        raise ValueError("the group Fourier transform is implemented for the full torus d = n")


def sigma_band(slc: TwistedSlice) -> list[tuple[int, ...]]:
    """Weights sigma with a nonzero Fourier matrix: sigma = -m - sgn(lam) beta."""
    _require_full_torus(slc)
    sg = int(_sgn(slc.lam))
    return sorted({tuple(int(x) for x in (-m - sg * b)) for b, m in zip(slc.betas, slc.modes)})


def fourier_transform_slice(slc: TwistedSlice, sigma) -> FourierMatrix:
    """f^(lam, sigma) in closed coefficient form.

    <f^(phi_gamma), phi_beta> = C (-1)^{|beta|+|gamma|} c[beta, gamma, m]
    with m = -sigma - sgn(lam) gamma and C = (2pi)^{n/2}|lam|^{-n/2}; the
    K-integral of eta_gamma(k) chi_m(k) sigma(k) forces the weight condition.
    """
    _require_full_torus(slc)
    sigma = sigma if isinstance(sigma, TorusIrrep) else TorusIrrep(tuple(np.atleast_1d(sigma)))
    sg = int(_sgn(slc.lam))
    C = twisted_constant(slc.lam, slc.n)
    sw = np.asarray(sigma.weight)
    entries = {}
    for a, b, m, c in zip(slc.alphas, slc.betas, slc.modes, slc.values):
        if np.array_equal(m, -sw - sg * b):
            key = (tuple(int(x) for x in a), tuple(int(x) for x in b))
            entries[key] = entries.get(key, 0) + C * (-1) ** int(a.sum() + b.sum()) * c
    return FourierMatrix(slc.lam, sigma, entries)


def fourier_transform_hm(f: BandLimitedFunction, lambda_node: int, sigma) -> FourierMatrix:
    return fourier_transform_slice(f.slices[lambda_node], sigma)


def fourier_entry_by_quadrature(slc: TwistedSlice, sigma, beta, gamma, n_points: int = 24,
                                n_theta: int | None = None) -> complex:
    """int_K int f^lam(X, k) <pi(X) mu(k) phi_gamma, phi_beta> sigma(k) dX dk by quadrature."""
    _require_full_torus(slc)
    n, lam = slc.n, slc.lam
    sw = np.atleast_1d(np.asarray(sigma.weight if isinstance(sigma, TorusIrrep) else sigma))
    if n_theta is None:
        n_theta = 2 * (int(np.max(np.abs(slc.modes), initial=0)) + slc.max_degree + int(np.max(np.abs(sw)))) + 3
    nodes, wts = gaussian_grid(n_points, np.zeros(2 * n), math.sqrt(2 / abs(lam)))
    x, u = nodes[:, :n], nodes[:, n:]
    mdeg = max(slc.max_degree, max(beta), max(gamma))
    tab = special_hermite_table(mdeg, lam, x, u)
    pair = basis_values(tab, [gamma], [beta])[:, 0] * twisted_constant(lam, n)
    thetas = _torus_grid(n_theta, n)
    total = 0j
    for th in thetas:
        fv = slc.evaluate(x, u, theta=th)
        kfac = metaplectic_phase(th, gamma, lam) * np.exp(1j * (th @ sw))
        total += np.sum(wts * fv * pair) * kfac
    return complex(total / thetas.shape[0])


def plancherel_rhs_display(f: BandLimitedFunction) -> float:
    """(2pi)^{-n} sum_sigma int ||f^(lam, sigma)||_HS^2 |lam|^n d lam on the grid."""
    n = f.n
    total = 0.0
    for wj, slc in zip(f.weights, f.slices):
        if len(slc) == 0:
            continue
        hs = sum(fourier_transform_slice(slc, s).hs_norm_sq for s in sigma_band(slc))
        total += wj * hs * abs(slc.lam) ** n
    return (2 * math.pi) ** (-n) * total


def plancherel_check(f: BandLimitedFunction, tol: float = 1e-6) -> VerificationReport:
    lhs = f.norm_sq
    disp = plancherel_rhs_display(f)
    return VerificationReport.compare(
        "plancherel", lhs, PLANCHEREL_CONSTANT * disp, tol,
        {"rhs_display": disp, "pinned_constant": PLANCHEREL_CONSTANT, "n": f.n})


def _inner_lhs(f: BandLimitedFunction, g: BandLimitedFunction) -> complex:
    total = 0j
    for wj, a, b in zip(f.weights, f.slices, g.slices):
        ca, cb = a.coeffs, b.coeffs
        total += wj * sum(v * np.conj(cb.get(k, 0)) for k, v in ca.items())
    return FOURIER_T_CONSTANT * total


def _inner_rhs(f: BandLimitedFunction, g: BandLimitedFunction) -> complex:
    """Fourier-side inner product: constant * (2pi)^{-n} sum tr(f^ g^*) |lam|^n."""
    n = f.n
    total = 0j
    for wj, a, b in zip(f.weights, f.slices, g.slices):
        sig = sorted(set(sigma_band(a)) | set(sigma_band(b))) if len(a) + len(b) else []
        for s in sig:
            A = fourier_transform_slice(a, s).entries
            B = fourier_transform_slice(b, s).entries
            total += wj * abs(a.lam) ** n * sum(v * np.conj(B.get(k, 0)) for k, v in A.items())
    return PLANCHEREL_CONSTANT * (2 * math.pi) ** (-n) * total


def plancherel_polarization_check(f: BandLimitedFunction, g: BandLimitedFunction,
                                  tol: float = 1e-6) -> VerificationReport:
    """<f, g> from polarising the norm identity against the Fourier-side pairing."""
    norms = [(f + g.scaled(1j ** k)).norm_sq for k in range(4)]
    lhs = 0.25 * sum((1j ** k) * nk for k, nk in enumerate(norms))
    rhs = _inner_rhs(f, g)
    scale = math.sqrt(f.norm_sq * g.norm_sq)
    r = abs(lhs - rhs) / max(scale, EPS_FLOOR)
    return VerificationReport.compare(
        "plancherel_polarization", lhs, rhs, tol,
        {"inner_direct": _inner_lhs(f, g), "error_over_norms": r}, passed=r <= tol)


# ---------------------------------------------------------------- complexified representations

@dataclass(frozen=True)
class ComplexGroupPoint:
    z: np.ndarray
    w: np.ndarray
    tau: complex
    theta: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        w = np.atleast_1d(np.asarray(self.w, dtype=complex))
        th = np.atleast_1d(np.asarray(self.theta, dtype=float))
        H = np.atleast_1d(np.asarray(self.H, dtype=float))
        if z.shape != w.shape or th.shape != H.shape or th.size > z.size:
            raise ValueError("inconsistent dimensions")
        for name, val in (("z", z), ("w", w), ("theta", th), ("H", H)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "tau", complex(self.tau))

    @classmethod
    def identity(cls, n: int, d: int) -> "ComplexGroupPoint":
        return cls(np.zeros(n), np.zeros(n), 0, np.zeros(d), np.zeros(d))

    @property
    def s(self) -> float:
        return self.tau.imag

    @property
    def r(self) -> float:
        return float(np.sqrt(np.sum(self.z.imag ** 2 + self.w.imag ** 2)))

    @property
    def angle(self) -> np.ndarray:
        return self.theta + 1j * self.H


def _rep_matrix(lam: float, n: int, z, w, rows, cols) -> np.ndarray:
    """<pi_lam(z, w) phi_row, phi_col> for the given index lists (continued)."""
    rows = np.asarray(rows, dtype=int).reshape(-1, n)
    cols = np.asarray(cols, dtype=int).reshape(-1, n)
    mdeg = int(max(rows.max(), cols.max()))
    tab = special_hermite_table(mdeg, lam, np.asarray(z).reshape(1, n), np.asarray(w).reshape(1, n))
    R = np.repeat(rows, cols.shape[0], axis=0)
    Cc = np.tile(cols, (rows.shape[0], 1))
    vals = basis_values(tab, R, Cc)[0].reshape(rows.shape[0], cols.shape[0])
    return twisted_constant(lam, n) * vals


def rep_apply(fm: FourierMatrix, n: int, p: ComplexGroupPoint, beta_cutoff: int) -> np.ndarray:
    """Dense matrix of rho_sigma^lam(p) f^ with rows phi_beta, |beta| <= cutoff."""
    lam = fm.lam
    if not fm.entries:
        return np.zeros((0, 0), dtype=complex)
    rows_f = sorted({k[0] for k in fm.entries})
    cols_f = sorted({k[1] for k in fm.entries})
    F = np.zeros((len(rows_f), len(cols_f)), dtype=complex)
    for (b, g), v in fm.entries.items():
        F[rows_f.index(b), cols_f.index(g)] = v
    betas = enumerate_indices(n, beta_cutoff)
    piZ = _rep_matrix(lam, n, p.z, p.w, rows_f, betas)          # [delta, beta]
    mu = np.array([metaplectic_phase(p.theta, dl, lam, p.H) for dl in rows_f])
    sig = fm.sigma.character(p.theta, p.H)
    central = np.exp(1j * lam * p.tau)
    return central * sig * (piZ.T @ (mu[:, None] * F))


def _exp_guard(lam: float, p: ComplexGroupPoint, weights):
    expo = abs(lam) * abs(p.s) + 2 * max((abs(np.asarray(m)).sum() for m in weights), default=0) \
        * float(np.max(np.abs(p.H), initial=0))
    if expo > EXP_GUARD:
        raise OverflowError("complexified representation overflows at this point")


def complexified_rep_norm(f: BandLimitedFunction, p: ComplexGroupPoint,
                          beta_cutoff: int | None = None) -> float:
    """(2pi)^{-2n} sum_sigma int ||rho_sigma^lam(p) f^(lam, sigma)||_HS^2 |lam|^n d lam."""
    n = f.n
    total = 0.0
    for wj, slc in zip(f.weights, f.slices):
        if len(slc) == 0:
            continue
        cut = slc.max_degree + 40 if beta_cutoff is None else beta_cutoff
        band = sigma_band(slc)
        _exp_guard(slc.lam, p, band)
        hs = 0.0
        for s in band:
            R = rep_apply(fourier_transform_slice(slc, s), n, p, cut)
            hs += float(np.sum(np.abs(R) ** 2))
        total += wj * hs * abs(slc.lam) ** n
    return (2 * math.pi) ** (-2 * n) * total


def rho_unitarity_check(fm: FourierMatrix, n: int, x, u, t: float, theta,
                        beta_cutoff: int = 48, tol: float = 1e-10) -> VerificationReport:
    p = ComplexGroupPoint(np.asarray(x, dtype=float), np.asarray(u, dtype=float), t,
                          theta, np.zeros_like(np.atleast_1d(theta), dtype=float))
    R = rep_apply(fm, n, p, beta_cutoff)
    return VerificationReport.compare("rho_unitarity", float(np.sum(np.abs(R) ** 2)),
                                      fm.hs_norm_sq, tol, {"lambda": fm.lam,
                                                           "sigma": fm.sigma.weight})


def paley_wiener_lhs(f: BandLimitedFunction, p: ComplexGroupPoint, n_points: int | None = None,
                     n_theta: int | None = None, average_k: bool = False) -> float:
    """int_{H^n} int_K |f((z, w, tau, g)^{-1} (x', u', t', k'))|^2 by quadrature.

    The t'-integral is taken through lambda-Parseval; (x', u') by Gauss-Hermite
    and k' by the trapezoid rule.  With ``average_k`` the real torus part of g
    is also averaged over K.
    """
    n, d = f.n, f.d
    if d != n:
        raise ValueError("the complexified action is implemented for the full torus d = n")
    M = max(s_.max_degree for s_ in f.slices)
    mmax = max((int(np.max(np.abs(s_.modes), initial=0)) for s_ in f.slices), default=0)
    if n_points is None:
        n_points = 2 * M + 4
    if n_theta is None:
        n_theta = 2 * mmax + 2
    kprime = _torus_grid(n_theta, d)
    gthetas = _torus_grid(2 * (M + mmax) + 3, d) if average_k else p.theta[None, :]
    x0, y0 = p.z.real, p.z.imag
    u0, v0 = p.w.real, p.w.imag
    total = 0.0
    for wj, slc in zip(f.weights, f.slices):
        if len(slc) == 0:
            continue
        lam = slc.lam
        xp, up, wts = _orbit_points(lam, n, n_points, y0, v0, xshift=(x0, u0))
        wts = wts * np.exp(lam * (up @ y0 - xp @ v0))
        acc = 0.0
        for gth in gthetas:
            ang = gth + 1j * p.H
            # g^{-1} . (X' - Z): rotation by the complex angle -(theta + iH)
            zr, wr = rotate(-ang, xp - p.z, up - p.w)
            uniq, A = slc.evaluate_modes(zr, wr)
            ginv = np.exp(-1j * (uniq @ ang))                     # chi_m(g^{-1})
            chi = characters(uniq, kprime)                        # chi_m(k')
            vals = np.mean(np.abs((A * ginv) @ chi.T) ** 2, axis=1)
            acc += float(np.sum(wts * vals))
        total += wj * math.exp(-2 * lam * p.s) * acc / gthetas.shape[0]
    return FOURIER_T_CONSTANT * total


def paley_wiener_check(f: BandLimitedFunction, p: ComplexGroupPoint, tol: float = 1e-4,
                       **kw) -> VerificationReport:
    lhs = paley_wiener_lhs(f, p, **kw)
    disp = complexified_rep_norm(f, p)
    kappa = paley_wiener_constant(f.n)
    return VerificationReport.compare(
        "paley_wiener", lhs, kappa * disp, tol,
        {"rhs_display": disp, "pinned_constant": kappa, "H": p.H, "s": p.s,
         "z": p.z, "w": p.w, "theta": p.theta})


def block_support(slc: TwistedSlice) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(pi, nu) weight pairs present in a slice: pi = K-mode, nu = sgn(lam)(beta - alpha)."""
    sg = int(_sgn(slc.lam))
    return {(tuple(int(x) for x in m), tuple(int(x) for x in sg * (b - a)))
            for a, b, m in zip(slc.alphas, slc.betas, slc.modes)}


def lemma_display_rhs(f: BandLimitedFunction, p: ComplexGroupPoint, beta_cutoff: int | None = None,
                      n_points: int = 24) -> float:
    """Closed right-hand side for a single (pi, nu) block.

    int sum_{alpha, beta} |chi_nu(e^{-iH} k^{-1}) chi_pi(e^{-iH})
        sum_delta phi_{delta beta}(z, w) <f^lam, conj phi_{alpha delta}>|^2
        e^{-2 lam s} |lam|^{-n} d lam,
    with the pairings <f^lam, conj phi_{alpha delta}> computed by quadrature.
    """
    n = f.n
    total = 0.0
    for wj, slc in zip(f.weights, f.slices):
        if len(slc) == 0:
            continue
        blocks = block_support(slc)
        if len(blocks) != 1:
            raise ValueError("expected a single (pi, nu) block")
        (pi_w, nu_w), = blocks
        lam = slc.lam
        M = slc.max_degree
        cut = M + 40 if beta_cutoff is None else beta_cutoff
        idx = enumerate_indices(n, M)
        nodes, wts = gaussian_grid(n_points, np.zeros(2 * n), math.sqrt(2 / abs(lam)))
        x, u = nodes[:, :n], nodes[:, n:]
        fv = slc.evaluate(x, u)  # a single K-mode: chi_pi(1) = 1
        tab = special_hermite_table(M, lam, x, u)
        pairs = [(a, dl) for a in idx for dl in idx]
        vals = basis_values(tab, [a for a, _ in pairs], [dl for _, dl in pairs])
        B = (wts * fv) @ vals
        B = B.reshape(len(idx), len(idx))                            # [alpha, delta]
        betas = enumerate_indices(n, cut)
        tabz = special_hermite_table(cut, lam, p.z.reshape(1, n), p.w.reshape(1, n))
        R = np.repeat(np.array(idx), len(betas), axis=0)
        Cc = np.tile(np.array(betas), (len(idx), 1))
        phiZ = basis_values(tabz, R, Cc)[0].reshape(len(idx), len(betas))   # [delta, beta]
        kinv_nu = np.exp(1j * (np.asarray(nu_w) @ (-p.theta - 1j * p.H)))
        pi_fac = np.exp(1j * (np.asarray(pi_w) @ (-1j * p.H)))
        inner = (B @ phiZ) * kinv_nu * pi_fac                           # [alpha, beta]
        total += wj * float(np.sum(np.abs(inner) ** 2)) * math.exp(-2 * lam * p.s) * abs(lam) ** (-n)
    return total


# ---------------------------------------------------------------- intertwining

def metaplectic_check(lam: float, n: int, x, u, theta, max_degree: int = 6,
                      tol: float = 1e-9) -> VerificationReport:
    """pi(k.X) = mu(k) pi(X) mu(k)^* on span{phi_alpha : alpha_j <= max_degree}.

    Both matrices <pi(.) phi_a, phi_b> come from special Hermite quadrature;
    the comparison is the max entry difference relative to the max entry.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    idx = [a for a in enumerate_indices(n, n * max_degree) if max(a) <= max_degree]
    xr, ur = rotate(theta, x, u)
    lhs = _rep_matrix(lam, n, xr, ur, idx, idx)
    eta = np.array([metaplectic_phase(theta, a, lam) for a in idx])
    rhs = np.conj(eta)[:, None] * _rep_matrix(lam, n, x, u, idx, idx) * eta[None, :]
    err = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), EPS_FLOOR))
    return VerificationReport.from_error(
        "metaplectic_intertwining", err, tol,
        {"lambda": lam, "n": n, "theta": theta, "max_degree": max_degree})
