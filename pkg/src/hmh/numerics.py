"""Quadrature rules, multi-index enumeration and verification reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.special import roots_hermite, roots_legendre

EPS_FLOOR = 1e-300
MAX_RULE_POINTS = 512


class QuadratureError(RuntimeError):
    """Two quadrature rules of different size disagree beyond tolerance."""


class RuleKind(str, Enum):
    GAUSS_HERMITE = "GaussHermite"
    GAUSS_LEGENDRE = "GaussLegendre"
    PERIODIC_TRAPEZOID = "PeriodicTrapezoid"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind
    domain: tuple[float, float]

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size < 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length >= 1")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex:
        """Apply the rule to samples taken at ``self.nodes`` (last axis)."""
        return np.asarray(values) @ self.weights


def _check_size(n_points: int):
    if not isinstance(n_points, (int, np.integer)) or not 1 <= n_points <= MAX_RULE_POINTS:
        raise ValueError(f"n_points must be an integer in [1, {MAX_RULE_POINTS}], got {n_points!r}")


def gauss_hermite_rule(n_points: int) -> QuadratureRule:
    """Gauss rule for the weight exp(-x^2) on the real line."""
    _check_size(n_points)
    x, w = roots_hermite(int(n_points))
    # enforce exact symmetry so odd moments vanish to rounding
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, RuleKind.GAUSS_HERMITE, (-math.inf, math.inf))


def gauss_legendre_rule(n_points: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    _check_size(n_points)
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x, w = roots_legendre(int(n_points))
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    half = 0.5 * (b - a)
    return QuadratureRule(0.5 * (a + b) + half * x, half * w, RuleKind.GAUSS_LEGENDRE, (a, b))


def periodic_trapezoid_rule(n_points: int) -> QuadratureRule:
    """Equispaced rule on [0, 2pi); exact for trigonometric polynomials of degree < N."""
    if not isinstance(n_points, (int, np.integer)) or n_points < 1:
        raise ValueError(f"n_points must be a positive integer, got {n_points!r}")
    n = int(n_points)
    return QuadratureRule(2 * np.pi * np.arange(n) / n, np.full(n, 2 * np.pi / n),
                          RuleKind.PERIODIC_TRAPEZOID, (0.0, 2 * np.pi))


def gaussian_grid(n_points: int, center, scale) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Hermite grid for plain Lebesgue integrals over R^D.

    The integrand is assumed to carry a Gaussian envelope roughly like
    exp(-|(x - center)/scale|^2); the rule weight exp(-eta^2) is divided
    back out, so the returned weights integrate g(x) dx directly.

    Returns ``(nodes, weights)`` with shapes ``(N**D, D)`` and ``(N**D,)``.
    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    scale = np.broadcast_to(np.asarray(scale, dtype=float), center.shape)
    rule = gauss_hermite_rule(n_points)
    dim = center.size
    eta = np.stack(np.meshgrid(*([rule.nodes] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    w1 = rule.weights * np.exp(rule.nodes ** 2)
    wgrid = np.stack(np.meshgrid(*([w1] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    return center + scale * eta, np.prod(wgrid * scale, axis=1)


def checked(compute, n_points: int, rtol: float, extra: int = 8, label: str = "quadrature"):
    """Run ``compute(N)`` and ``compute(N + extra)``; raise if they disagree."""
    a = compute(n_points)
    b = compute(n_points + extra)
    diff = np.max(np.abs(np.asarray(b) - np.asarray(a)))
    size = max(np.max(np.abs(a)), np.max(np.abs(b)), EPS_FLOOR)
    if diff > rtol * size:
        raise QuadratureError(
            f"{label}: rules with {n_points} and {n_points + extra} nodes differ by "
            f"{diff / size:.3e} relative (tolerance {rtol:.1e})")
    return b


# ---------------------------------------------------------------- multi-indices

def degree(alpha) -> int:
    return int(sum(alpha))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_indices(n: int, max_total_degree: int) -> list[tuple[int, ...]]:
    """All alpha in N^n with |alpha| <= M, graded, lexicographically descending per degree."""
    if n < 1:
        raise ValueError("dimension n must be >= 1")
    if max_total_degree < 0:
        return []
    out = []
    for m in range(max_total_degree + 1):
        out.extend(_compositions(m, n))
    return out


def indices_of_degree(n: int, m: int) -> list[tuple[int, ...]]:
    return list(_compositions(m, n)) if m >= 0 else []


# ---------------------------------------------------------------- reports

def rel_err(lhs: complex, rhs: complex) -> float:
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), EPS_FLOOR))


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    params: dict[str, Any] = field(default_factory=dict)
    passed: bool = False

    @classmethod
    def compare(cls, identity_name: str, lhs, rhs, tol: float, params=None,
                passed: bool | None = None) -> "VerificationReport":
        lhs, rhs = complex(lhs), complex(rhs)
        r = rel_err(lhs, rhs)
        ok = r <= tol if passed is None else bool(passed)
        p = dict(params or {})
        p.setdefault("tolerance", tol)
        return cls(identity_name, lhs, rhs, float(abs(lhs - rhs)), r, p, bool(ok))

    @classmethod
    def from_error(cls, identity_name: str, err: float, tol: float, params=None) -> "VerificationReport":
        """Report for a check that already produced a normalised error (target 0)."""
        p = dict(params or {})
        p.setdefault("tolerance", tol)
        err = float(err)
        return cls(identity_name, complex(err), 0j, err, err, p, bool(err <= tol))

    def to_json(self) -> dict[str, Any]:
        return {
            "identity": self.identity_name,
            "lhs_re": self.lhs.real, "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real, "rhs_im": self.rhs.imag,
            "abs_err": self.abs_err, "rel_err": self.rel_err,
            "params": _jsonable(self.params),
            "passed": self.passed,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj
