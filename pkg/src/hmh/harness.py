"""Run configuration, test-function generation, suites and golden constants."""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import spectral_identities as si
from . import twisted_transforms as tt
from .numerics import EPS_FLOOR, VerificationReport, _jsonable, enumerate_indices, gaussian_grid
from .special_functions import laguerre, scaled_hermite, special_hermite

SUITES = ("orthonormality", "heat", "bergman", "gutzmer", "poisson", "plancherel", "paley_wiener")
KINDS = ("single_coeff", "random_band", "lemma_block")
CONFIG_ENV = "HMH_CONFIG"
GOLDEN_NAME = "golden_constants.json"
DRIFT_TOL = 1e-9


class ConfigError(ValueError):
    def __init__(self, problems: dict[str, str]):
        self.problems = problems
        super().__init__("; ".join(f"{k}: {v}" for k, v in problems.items()))


@dataclass
class RunConfig:
    n: int = 1
    d: int = 1
    M_trunc: int = 3
    mK_band: int = 1
    lambda_interval: tuple[float, float] = (0.5, 1.5)
    lambda_nodes: int = 5
    n_points: int | None = None
    n_theta: int | None = None
    n_h: int = 32
    n_circle: int = 16
    t: float = 0.5
    q: float = 1.0
    r: float = 0.3
    H: tuple[float, ...] = (0.2,)
    s: float = 0.1
    pw_H: tuple[float, ...] = (0.25,)
    pw_s: float = 0.1
    pw_im: tuple[float, float] = (0.2, 0.0)
    gutzmer_lambdas: tuple[float, ...] = (1.0, -1.5)
    gutzmer_radius: float = 0.6
    heat_lambdas: tuple[float, ...] = (1.5, -1.5)
    heat_times: tuple[float, ...] = (0.2, 1.0)
    gram_lambdas: tuple[float, ...] = (0.5, 1.0, 3.0, -2.0)
    n_random: int = 10
    n_random_slices: int = 5
    seed: int = 42
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def validate(self) -> "RunConfig":
        p = {}
        if self.n < 1:
            p["n"] = "must be >= 1"
        if not 0 <= self.d <= self.n:
            p["d"] = "must satisfy 0 <= d <= n"
        if self.M_trunc < 0:
            p["M_trunc"] = "must be >= 0"
        if self.mK_band < 0:
            p["mK_band"] = "must be >= 0"
        a, b = self.lambda_interval
        if not 0 < a < b:
            p["lambda_interval"] = f"need 0 < a < b, got ({a}, {b})"
        if self.lambda_nodes < 1:
            p["lambda_nodes"] = "must be >= 1"
        for name in ("t", "q"):
            if getattr(self, name) <= 0:
                p[name] = "must be > 0"
        if self.r < 0:
            p["r"] = "must be >= 0"
        if len(self.H) != self.d:
            p["H"] = f"needs length d = {self.d}"
        if len(self.pw_H) != self.d:
            p["pw_H"] = f"needs length d = {self.d}"
        if any(lam == 0 for lam in (*self.gutzmer_lambdas, *self.heat_lambdas, *self.gram_lambdas)):
            p["lambdas"] = "lambda values must be nonzero"
        for k, v in self.tolerances.items():
            if not v > 0:
                p[f"tolerances.{k}"] = "must be > 0"
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            p["tolerances"] = f"unknown keys {sorted(unknown)}"
        if p:
            raise ConfigError(p)
        return self

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        names = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(data) - set(names)
        if unknown:
            raise ConfigError({k: "unknown field" for k in sorted(unknown)})
        kw = {}
        for k, v in data.items():
            if isinstance(v, list):
                v = tuple(v)
            if k == "tolerances":
                v = {**DEFAULT_TOLERANCES, **v}
            kw[k] = v
        return cls(**kw).validate()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "RunConfig":
        """Read a config file; ``None`` falls back to $HMH_CONFIG, then the defaults."""
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls().validate()
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def lambda_grid(self):
        a, b = self.lambda_interval
        lams, wts = tt.symmetric_lambda_grid(a, b, self.lambda_nodes)
        return lams, wts, tt.bump_profile(lams, a, b)


DEFAULT_TOLERANCES = {
    "gram": 1e-10, "laguerre": 1e-12, "metaplectic": 1e-9, "heat": 1e-8,
    "bergman": 1e-5, "direct_integral": 1e-4, "gutzmer": 1e-5, "poisson": 1e-4,
    "plancherel": 1e-6, "paley_wiener": 1e-4, "orthogonality": 1e-6, "unitarity": 1e-10,
}


# ---------------------------------------------------------------- random test functions

def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 stream keyed by (seed, *stream) via SeedSequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def _cnormal(rng, size=None):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def _mode_list(d: int, band: int):
    if d == 0:
        return [()]
    grid = np.stack(np.meshgrid(*([np.arange(-band, band + 1)] * d), indexing="ij"), -1)
    return [tuple(int(x) for x in m) for m in grid.reshape(-1, d)]


def _normalise(f: tt.BandLimitedFunction) -> tt.BandLimitedFunction:
    return f.scaled(1 / math.sqrt(f.norm_sq))


def random_slice(lam: float, n: int, M: int, rng) -> tt.TwistedSlice:
    """d = 0 slice with random coefficients for all alpha, beta with |alpha|, |beta| <= M."""
    idx = enumerate_indices(n, M)
    return tt.TwistedSlice.from_coeffs(lam, n, 0, {(a, b, ()): complex(_cnormal(rng))
                                                    for a in idx for b in idx})


def lemma_block(config: RunConfig, pi, nu, rng) -> tt.BandLimitedFunction:
    """Coefficients with K-mode pi and sgn(lam)(beta - alpha) = nu, a single block."""
    lams, wts, prof = config.lambda_grid()
    idx = enumerate_indices(config.n, config.M_trunc)
    pi, nu = tuple(pi), tuple(nu)
    per = {}
    for sg in (1, -1):
        c = {}
        for a in idx:
            b = tuple(int(x) for x in np.asarray(a) + sg * np.asarray(nu))
            if min(b) >= 0 and sum(b) <= config.M_trunc:
                c[(a, b, pi)] = complex(_cnormal(rng))
        per[sg] = c
    if not per[1] or not per[-1]:
        raise ValueError(f"block (pi={pi}, nu={nu}) is empty at M_trunc={config.M_trunc}")
    f = tt.BandLimitedFunction.from_pattern(config.n, config.d, per[1], lams, wts, prof,
                                            per_sign=per[-1])
    return _normalise(f)


def make_test_function(config: RunConfig, kind: str, index: int = 0) -> tt.BandLimitedFunction:
    """Unit-norm band-limited test function, reproducible from (seed, kind, index)."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    rng = make_rng(config.seed, KINDS.index(kind), index)
    lams, wts, prof = config.lambda_grid()
    idx = enumerate_indices(config.n, config.M_trunc)
    modes = _mode_list(config.d, config.mK_band)
    if kind == "single_coeff":
        key = (idx[rng.integers(len(idx))], idx[rng.integers(len(idx))], modes[rng.integers(len(modes))])
        f = tt.BandLimitedFunction.from_pattern(config.n, config.d, {key: 1.0}, lams, wts, prof)
        return _normalise(f)
    if kind == "random_band":
        keys = [(a, b, m) for a in idx for b in idx for m in modes]
        pos = dict(zip(keys, _cnormal(rng, len(keys))))
        neg = dict(zip(keys, _cnormal(rng, len(keys))))
        f = tt.BandLimitedFunction.from_pattern(config.n, config.d, pos, lams, wts, prof, per_sign=neg)
        return _normalise(f)
    pi = modes[rng.integers(len(modes))]
    M = config.M_trunc
    nu = tuple(int(x) for x in rng.integers(-M, M + 1, size=config.d))
    if config.d < config.n:
        raise ValueError("lemma blocks need the full torus d = n")
    return lemma_block(config, pi, nu, rng)


# ---------------------------------------------------------------- oracles

def laguerre_series(m: int, a: int, x: float) -> float:
    """Exact explicit sum sum_k (-1)^k C(m+a, m-k) x^k / k! in rationals."""
    xf = Fraction(x)
    total = sum(Fraction((-1) ** k * math.comb(m + a, m - k), math.factorial(k)) * xf ** k
                for k in range(m + 1))
    return float(total)


def gram_report(lam: float, n: int, max_degree: int, tol: float) -> VerificationReport:
    idx = enumerate_indices(n, max_degree)
    nodes, wts = gaussian_grid(max_degree + 4, np.zeros(n), 1 / math.sqrt(abs(lam)))
    vals = np.stack([scaled_hermite(a, lam, nodes) for a in idx])
    G = (vals * wts) @ vals.T
    err = float(np.max(np.abs(G - np.eye(len(idx)))))
    return VerificationReport.from_error("hermite_gram", err, tol,
                                         {"lambda": lam, "n": n, "max_degree": max_degree,
                                          "size": len(idx)})


def laguerre_report(tol: float) -> VerificationReport:
    worst = 0.0
    for m in range(0, 13):
        for a in range(0, 3):
            for x in (0.0, 0.25, 1.5, 3.0, -2.0):
                ref = laguerre_series(m, a, x)
                got = float(laguerre(m, a, x))
                worst = max(worst, abs(got - ref) / max(abs(ref), 1.0))
    return VerificationReport.from_error("laguerre_series", worst, tol,
                                         {"max_m": 12, "alpha_types": [0, 1, 2]})


def phi00_report(lam: float, tol: float) -> VerificationReport:
    """phi_00^lam(x, u) = (2pi)^{-1/2}|lam|^{1/2} exp(-|lam|(x^2+u^2)/4)."""
    x, u = 0.7, -0.4
    got = special_hermite((0,), (0,), lam, [x], [u])
    ref = (2 * math.pi) ** -0.5 * abs(lam) ** 0.5 * math.exp(-abs(lam) * (x * x + u * u) / 4)
    return VerificationReport.compare("special_hermite_phi00", got, ref, tol, {"lambda": lam})


# ---------------------------------------------------------------- golden constants

def _phi(slc: tt.TwistedSlice):
    return lambda x, u: slc.evaluate(x, u)


def measure_constants() -> dict[str, float]:
    """Constants fixed by quadrature oracles rather than by displayed formulas."""
    lam, X = 1.5, (np.array([0.3]), np.array([-0.2]))
    p00 = tt.TwistedSlice.from_coeffs(lam, 1, 0, {((0,), (0,), ()): 1.0})
    conv = tt.twisted_convolution(_phi(p00), _phi(p00), lam, X, n_points=40)
    twisted = (conv / p00.evaluate(*[v[None, :] for v in X])[0]).real

    t = 0.3
    p01 = tt.TwistedSlice.from_coeffs(lam, 1, 0, {((0,), (1,), ()): 1.0})
    hk = tt.twisted_convolution(_phi(p01), lambda x, u: tt.heat_kernel_twisted(t, lam, x, u), lam, X,
                                n_points=40)
    ratio = (hk / p01.evaluate(*[v[None, :] for v in X])[0]).real
    acted = (-math.log(ratio) / (t * abs(lam)) - 1) / 2

    sig = tt.TwistedSlice.from_coeffs(lam, 1, 1, {((1,), (0,), (1,)): 1.0})
    sw = si.sigma_band(sig)[0]
    entry = si.fourier_entry_by_quadrature(sig, sw, (1,), (0,))

    from .group_models import rotate
    th = 0.4
    p10 = tt.TwistedSlice.from_coeffs(lam, 1, 0, {((1,), (0,), ()): 1.0})
    xr, ur = rotate(np.array([th]), *X)
    rot = p10.evaluate(xr[None, :], ur[None, :])[0] / p10.evaluate(X[0][None, :], X[1][None, :])[0]
    msign = float(np.angle(rot) / (math.copysign(1, lam) * (0 - 1) * th))

    one = tt.BandLimitedFunction(np.array([lam]), np.array([1.0]), np.array([1.0]), (sig,))
    planch = one.norm_sq / si.plancherel_rhs_display(one)
    p = si.ComplexGroupPoint.identity(1, 1)
    pw = si.paley_wiener_lhs(one, p) / si.complexified_rep_norm(one, p)
    return {
        "twisted_convolution_constant_n1_lambda1.5": float(twisted),
        "heat_acted_degree_alpha0_beta1": float(acted),
        "fourier_entry_modulus_n1_lambda1.5": float(abs(entry)),
        "metaplectic_sign": msign,
        "plancherel_constant": float(planch),
        "paley_wiener_constant_n1": float(pw),
    }


def golden_path() -> Path:
    return Path(str(resources.files("hmh") / "data" / GOLDEN_NAME))


def pin_constants(path: str | os.PathLike | None = None) -> dict[str, float]:
    values = measure_constants()
    target = Path(path) if path else golden_path()
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps({"version": 1, "constants": values}, sort_keys=True, indent=2) + "\n")
    return values


def drift_reports(path: str | os.PathLike | None = None) -> list[VerificationReport]:
    target = Path(path) if path else golden_path()
    if not target.exists():
        return [VerificationReport.compare("golden_constants", 0, 1, DRIFT_TOL,
                                           {"error": f"missing golden file {target.name}"}, passed=False)]
    pinned = json.loads(target.read_text())["constants"]
    measured = measure_constants()
    out = []
    for key in sorted(set(pinned) | set(measured)):
        if key not in pinned or key not in measured:
            out.append(VerificationReport.compare(f"golden:{key}", 0, 1, DRIFT_TOL,
                                                  {"error": "key missing"}, passed=False))
            continue
        out.append(VerificationReport.compare(f"golden:{key}", measured[key], pinned[key], DRIFT_TOL))
    return out


# ---------------------------------------------------------------- checks per suite
# Each check is a module-level callable so it can run in a worker process.

def _check_heat(lam, t, M, seed, stream, points, tol):
    rng = make_rng(seed, 100, stream)
    slc = random_slice(lam, 1, M, rng)
    out = tt.heat_multiplier_apply(slc, t)
    # Gaussian envelopes exp(-a1 |X'|^2) of F and exp(-a2 |X - X'|^2) of the kernel
    a1 = abs(lam) / 4
    a2 = a1 / math.tanh(abs(lam) * t)
    worst = 0.0
    for p in points:
        X = (np.array([p[0]]), np.array([p[1]]))
        conv = tt.twisted_convolution(_phi(slc), lambda x, u: tt.heat_kernel_twisted(t, lam, x, u),
                                      lam, X, n_points=32, center=a2 * np.asarray(p) / (a1 + a2),
                                      scale=1 / math.sqrt(a1 + a2), rtol=1e-11)
        ref = out.evaluate(X[0][None, :], X[1][None, :])[0]
        worst = max(worst, abs(conv - ref) / max(abs(ref), EPS_FLOOR))
    return VerificationReport.from_error("twisted_heat", worst, tol,
                                         {"lambda": lam, "t": t, "max_index": M, "points": len(points)})


def _check_heat_isometry(lam, t, M, seed, index, tol):
    slc = random_slice(lam, 1, M, make_rng(seed, 200, index))
    img = tt.heat_multiplier_apply(slc, t)
    return VerificationReport.compare("heat_transform_isometry", tt.bergman_norm(img, t), slc.norm_sq,
                                      tol, {"lambda": lam, "t": t, "index": index})


def _check_direct_integral(config, index):
    f = make_test_function(config, "random_band", index)
    g = tt.segal_bargmann(f, config.t)
    return VerificationReport.compare("direct_integral_isometry",
                                      tt.direct_integral_norm(g, config.t, n_h=config.n_h),
                                      f.norm_sq, config.tol("direct_integral"),
                                      {"t": config.t, "index": index})


def _check_gutzmer(lam, n, M, seed, index, y, v, tol):
    slc = random_slice(lam, n, M, make_rng(seed, 300, index, n))
    rep = si.gutzmer_check(slc, y, v, tol=tol)
    return dataclasses.replace(rep, params={**rep.params, "index": index})


def _check_poisson(config, index, r, H, s):
    f = make_test_function(config, "random_band", index)
    return si.poisson_identity_check(f, config.q, r, np.asarray(H), s, tol=config.tol("poisson"),
                                     n_circle=config.n_circle)


def _check_plancherel(config, index):
    f = make_test_function(config, "random_band", index)
    rep = si.plancherel_check(f, tol=config.tol("plancherel"))
    return dataclasses.replace(rep, params={**rep.params, "index": index})


def _check_polarization(config):
    f = make_test_function(config, "random_band", 0)
    g = make_test_function(config, "random_band", 1)
    return si.plancherel_polarization_check(f, g, tol=config.tol("plancherel"))


def _check_band_capture(config, index):
    """All Fourier mass sits in the enumerated sigma-band: sum_sigma ||f^||^2 = C^2 sum |c|^2."""
    f = make_test_function(config, "random_band", index)
    worst = 0.0
    for slc in f.slices:
        hs = sum(si.fourier_transform_slice(slc, s).hs_norm_sq for s in si.sigma_band(slc))
        ref = si.twisted_constant(slc.lam, slc.n) ** 2 * slc.norm_sq
        worst = max(worst, abs(hs - ref) / max(ref, EPS_FLOOR))
    tol = config.tol("plancherel")
    return VerificationReport.from_error("sigma_band_capture", worst, tol, {"index": index})


def _pw_point(config, H=None, s=None, theta=0.7):
    n = config.n
    im = np.asarray(config.pw_im, dtype=float)
    z = np.full(n, im[0]) * 1j
    w = np.full(n, im[1]) * 1j
    return si.ComplexGroupPoint(z, w, 0.3 + 1j * (config.pw_s if s is None else s),
                                np.full(config.d, theta),
                                np.asarray(config.pw_H if H is None else H, dtype=float))


def _block(config, pi, nu, stream):
    return lemma_block(config, pi, nu, make_rng(config.seed, 400, stream))


def _check_pw_block(config, pi, nu, stream):
    f = _block(config, pi, nu, stream)
    p = _pw_point(config)
    rep = si.paley_wiener_check(f, p, tol=config.tol("paley_wiener"))
    lem = si.lemma_display_rhs(f, p)
    params = {**rep.params, "pi": list(pi), "nu": list(nu),
              "lemma_display_rel_err": abs(lem - rep.rhs.real) / max(lem, EPS_FLOOR)}
    ok = rep.passed and params["lemma_display_rel_err"] <= config.tol("paley_wiener")
    return dataclasses.replace(rep, identity_name="paley_wiener_lemma_block", params=params, passed=ok)


def _check_pw_sum(config, b1, b2, average_k):
    """Two-block sum: identity and vanishing cross term LHS(f1+f2) - LHS(f1) - LHS(f2)."""
    f1, f2 = _block(config, *b1, 1), _block(config, *b2, 2)
    p = _pw_point(config)
    lhs = [si.paley_wiener_lhs(g, p, average_k=average_k) for g in (f1, f2, f1 + f2)]
    cross = abs(lhs[2] - lhs[0] - lhs[1]) / (lhs[0] + lhs[1])
    rep = si.paley_wiener_check(f1 + f2, p, tol=config.tol("paley_wiener"))
    ok = cross <= config.tol("orthogonality") and (average_k or rep.passed)
    name = "paley_wiener_block_orthogonality" + ("_k_averaged" if average_k else "")
    return VerificationReport.compare(
        name, lhs[2], lhs[0] + lhs[1], config.tol("orthogonality"),
        {"block1": [list(x) for x in b1], "block2": [list(x) for x in b2], "cross_over_diagonal": cross,
         "identity_rel_err": rep.rel_err, "average_k": average_k}, passed=ok)


def _check_pw_identity_point(config, index):
    f = make_test_function(config, "random_band", index)
    p = si.ComplexGroupPoint.identity(config.n, config.d)
    rep = si.paley_wiener_check(f, p, tol=config.tol("paley_wiener"))
    return dataclasses.replace(rep, identity_name="paley_wiener_identity_point",
                               params={**rep.params, "norm_sq": f.norm_sq})


def _check_pw_sweep(config, index, n_steps=5):
    """Errors across |H| up to the configured bound stay within tolerance."""
    f = make_test_function(config, "random_band", index)
    Hmax = np.asarray(config.pw_H, dtype=float)
    errs, lhs, rhs = [], [], []
    for k in range(n_steps + 1):
        rep = si.paley_wiener_check(f, _pw_point(config, H=Hmax * k / n_steps),
                                    tol=config.tol("paley_wiener"))
        errs.append(rep.rel_err)
        lhs.append(rep.lhs.real)
        rhs.append(rep.rhs.real)
    worst = max(errs)
    return VerificationReport.compare("paley_wiener_H_sweep", lhs[-1], rhs[-1], config.tol("paley_wiener"),
                                      {"rel_errs": errs, "lhs": lhs, "rhs": rhs},
                                      passed=worst <= config.tol("paley_wiener"))


def _check_unitarity(config, index):
    f = make_test_function(config, "random_band", index)
    rng = make_rng(config.seed, 500, index)
    worst = 0.0
    for slc in f.slices[:2]:
        for s in si.sigma_band(slc)[:3]:
            fm = si.fourier_transform_slice(slc, s)
            x, u = rng.uniform(-1, 1, config.n), rng.uniform(-1, 1, config.n)
            th = rng.uniform(0, 2 * np.pi, config.d)
            rep = si.rho_unitarity_check(fm, config.n, x, u, float(rng.uniform(-1, 1)), th)
            worst = max(worst, rep.rel_err)
    tol = config.tol("unitarity")
    return VerificationReport.from_error("rho_unitarity", worst, tol, {"index": index})


def _check_metaplectic(lam, n, seed, stream, tol):
    rng = make_rng(seed, 600, n, stream)
    return si.metaplectic_check(lam, n, rng.uniform(-1, 1, n), rng.uniform(-1, 1, n),
                                rng.uniform(0, 2 * np.pi, n), tol=tol)


def _check_weight_probe(t, single):
    return tt.nonnegative_weight_probe(t, single_lambda=single)


def build_checks(config: RunConfig, suite: str) -> list[tuple[str, Callable[[], VerificationReport]]]:
    if suite == "all":
        return [c for s in SUITES for c in build_checks(config, s)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    c = config
    checks: list[tuple[str, Callable]] = []
    if suite == "orthonormality":
        for n in (1, 2):
            for lam in c.gram_lambdas:
                checks.append(("orthonormality", partial(gram_report, lam, n, 6, c.tol("gram"))))
        checks.append(("orthonormality", partial(laguerre_report, c.tol("laguerre"))))
        checks.append(("orthonormality", partial(phi00_report, 1.3, c.tol("gram"))))
        for n in (1, 2):
            for i, lam in enumerate((1.0, -2.0)):
                checks.append(("orthonormality", partial(_check_metaplectic, lam, n, c.seed, i,
                                                         c.tol("metaplectic"))))
    elif suite == "heat":
        pts = [(0.3, -0.2), (-0.8, 0.5), (1.1, 0.9)]
        for i, lam in enumerate(c.heat_lambdas):
            for j, t in enumerate(c.heat_times):
                checks.append(("heat", partial(_check_heat, lam, t, min(c.M_trunc, 3), c.seed,
                                               100 * i + j, pts, c.tol("heat"))))
    elif suite == "bergman":
        lams, _, _ = c.lambda_grid()
        for i in range(c.n_random_slices):
            lam = float(lams[(3 * i) % len(lams)])
            checks.append(("bergman", partial(_check_heat_isometry, lam, c.t, c.M_trunc, c.seed, i,
                                              c.tol("bergman"))))
        if c.n == 1:
            for i in range(c.n_random):
                checks.append(("bergman", partial(_check_direct_integral, c, i)))
        checks.append(("bergman", partial(_check_weight_probe, c.t, False)))
        checks.append(("bergman", partial(_check_weight_probe, c.t, True)))
    elif suite == "gutzmer":
        R = c.gutzmer_radius
        if c.M_trunc == 0:
            checks.append(("gutzmer", partial(_check_gutzmer, c.gutzmer_lambdas[0], 1, 0, c.seed, 0,
                                              [0.0], [0.0], c.tol("gutzmer"))))
        else:
            rng = make_rng(c.seed, 301)
            for i in range(c.n_random):
                for lam in c.gutzmer_lambdas:
                    rad, ang = R * math.sqrt(rng.uniform()), rng.uniform(0, 2 * np.pi)
                    checks.append(("gutzmer", partial(_check_gutzmer, lam, 1, c.M_trunc, c.seed, i,
                                                      [rad * math.cos(ang)], [rad * math.sin(ang)],
                                                      c.tol("gutzmer"))))
            checks.append(("gutzmer", partial(_check_gutzmer, c.gutzmer_lambdas[0], 2, min(c.M_trunc, 2),
                                              c.seed, 0, [0.3, -0.2], [0.1, 0.25], c.tol("gutzmer"))))
    elif suite == "poisson":
        if c.n != 1:
            return checks
        combos = [(c.r, c.H, c.s), (0.0, tuple(0.0 for _ in c.H), 0.0),
                  (c.r / 2, tuple(-h for h in c.H), -c.s), (c.r, tuple(0.25 for _ in c.H), 0.0)]
        for i, (r, H, s) in enumerate(combos):
            checks.append(("poisson", partial(_check_poisson, c, i, r, H, s)))
    elif suite == "plancherel":
        if c.d != c.n:
            return checks
        for i in range(c.n_random):
            checks.append(("plancherel", partial(_check_plancherel, c, i)))
        checks.append(("plancherel", partial(_check_polarization, c)))
        checks.append(("plancherel", partial(_check_band_capture, c, 0)))
    elif suite == "paley_wiener":
        if c.d != c.n:
            return checks
        z = (0,) * c.d
        one = (1,) + (0,) * (c.d - 1)
        neg = (-1,) + (0,) * (c.d - 1)
        blocks = [(one, one), (z, one), (one, z), (neg, z)]
        for k, (pi, nu) in enumerate(blocks):
            checks.append(("paley_wiener", partial(_check_pw_block, c, pi, nu, 10 + k)))
        checks.append(("paley_wiener", partial(_check_pw_sum, c, (one, one), (z, one), False)))
        checks.append(("paley_wiener", partial(_check_pw_sum, c, (neg, z), (one, neg), False)))
        checks.append(("paley_wiener", partial(_check_pw_sum, c, (one, one), (one, z), True)))
        checks.append(("paley_wiener", partial(_check_pw_identity_point, c, 0)))
        checks.append(("paley_wiener", partial(_check_pw_sweep, c, 1)))
        checks.append(("paley_wiener", partial(_check_unitarity, c, 0)))
    return checks


# ---------------------------------------------------------------- running

@dataclass
class SuiteResult:
    suite: str
    config: RunConfig
    reports: list[VerificationReport]
    wall_ms: list[float]
    errors: list[str | None]

    @property
    def overall_pass(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json(self, timing: bool = False) -> str:
        rows = []
        for r, ms, err in zip(self.reports, self.wall_ms, self.errors):
            row = r.to_json()
            row["wall_ms"] = round(ms, 3) if timing else None
            if err is not None:
                row["error"] = err
            rows.append(row)
        doc = {"suite": self.suite, "config": self.config.to_dict(), "overall_pass": self.overall_pass,
               "reports": rows}
        return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _run_one(item):
    label, fn = item
    t0 = time.perf_counter()
    try:
        rep, err = fn(), None
    except Exception as exc:  # keep partial results; the failing check is reported
        rep = VerificationReport.compare(f"{label}:error", math.nan, math.nan, 0.0,
                                         {"exception": type(exc).__name__}, passed=False)
        err = f"{type(exc).__name__}: {exc}"
    return rep, (time.perf_counter() - t0) * 1e3, err


def run_suite(config: RunConfig, suite: str, workers: int = 1, golden: str | os.PathLike | None = None,
              check_golden: bool = True) -> SuiteResult:
    """Run every check of ``suite`` ('all' for every suite); results keep submission order."""
    config.validate()
    items = build_checks(config, suite)
    if check_golden:
        items = [("golden", partial(golden_report, golden))] + items
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, items))
    else:
        results = [_run_one(it) for it in items]
    reports = [r for r, _, _ in results]
    return SuiteResult(suite, config, reports, [ms for _, ms, _ in results], [e for _, _, e in results])


def golden_report(path=None) -> VerificationReport:
    """All golden-constant drifts folded into one report (one oracle run)."""
    reps = drift_reports(path)
    worst = max(reps, key=lambda r: (not r.passed, r.rel_err))
    return VerificationReport.compare(
        "golden_constants", worst.lhs, worst.rhs, DRIFT_TOL,
        {"checked": [r.identity_name for r in reps], "worst": worst.identity_name,
         "max_rel_drift": max(r.rel_err for r in reps)},
        passed=all(r.passed for r in reps))
