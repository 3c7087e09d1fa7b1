"""Extremal analysis of the quartic that controls the conformally flat case.

For a traceless spectrum l (sum l_i = 0) and a real S,

    f(S, l) = S^2 |l|^2 / (n(n-1)) + 2 S sum(l^3) / (n-2) + |l|^4

is nonnegative.  As a quadratic in S this reduces to the cubic bound
``|sum l^3| <= (n-2)/sqrt(n(n-1))`` on the unit sphere inside the hyperplane
sum l = 0.  The critical points of the cubic there are enumerated in closed
form, and :func:`optimize_g` is a separate numerical check that shares no code
with the enumeration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .curvature import SeedLike, trial_rng
from .errors import InvalidDimensionError, PreconditionError

__all__ = [
    "CriticalPoint",
    "OptimizeResult",
    "Equality",
    "f_quartic",
    "g_cubic",
    "enumerate_critical",
    "optimize_g",
    "sharp_bound",
    "equality_case_ii",
    "classify_equality",
    "random_constrained",
]

CONSTRAINT_TOL = 1e-12
CLASSIFY_TOL = 1e-8


class Equality(str, enum.Enum):
    CASE_I = "case_i"
    CASE_II = "case_ii"
    NONE = "none"


def _traceless(lam, tol: float = CONSTRAINT_TOL) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1:
        raise PreconditionError("spectrum must be a 1-d array")
    if abs(lam.sum()) > tol * (1.0 + np.abs(lam).sum()):
        raise PreconditionError(f"spectrum must sum to zero (sum = {lam.sum():.3e})")
    return lam


def _check_n(n: int) -> int:
    if int(n) != n or n < 3:
        raise InvalidDimensionError(f"need an integer n >= 3, got {n!r}")
    return int(n)


def g_cubic(lam) -> float:
    return float(np.sum(np.asarray(lam, dtype=float) ** 3))


def f_quartic(S, lam):
    """The quartic in (S, lam); rows of a 2-d ``lam`` are evaluated against an array ``S``."""
    lam = np.asarray(lam, dtype=float)
    total = np.abs(lam.sum(axis=-1))
    if np.any(total > CONSTRAINT_TOL * (1.0 + np.abs(lam).sum(axis=-1))):
        raise PreconditionError(f"spectrum must sum to zero (|sum| up to {np.max(total):.3e})")
    n = lam.shape[-1]
    s2 = np.sum(lam**2, axis=-1)
    g = np.sum(lam**3, axis=-1)
    out = S**2 * s2 / (n * (n - 1)) + 2.0 * S * g / (n - 2) + s2**2
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class CriticalPoint:
    """Critical configuration with ``n - i`` positive and ``i`` negative entries."""

    i: int
    pattern: np.ndarray
    mu: float
    lam: np.ndarray
    g: float


def enumerate_critical(n: int) -> list[CriticalPoint]:
    """Closed-form critical points of sum(l^3) on {sum l = 0, sum l^2 = 1}.

    Stationarity gives 3 l_j^2 - 3/n - 2 mu l_j = 0, so each entry is one of
    the two roots (mu +/- sqrt(mu^2 + 9/n)) / 3.  With i entries on the
    negative root the constraints fix both roots.  Index i and n - i are
    mirror images (l -> -l), so the list already contains both signs.
    """
    n = _check_n(n)
    out = []
    for i in range(1, n):
        pos = math.sqrt(i / (n * (n - i)))
        neg = -math.sqrt((n - i) / (n * i))
        lam = np.array([pos] * (n - i) + [neg] * i)
        pattern = np.array([1] * (n - i) + [-1] * i)
        # the roots sum to 2 mu / 3
        mu = 1.5 * (pos + neg)
        g = -(n - 2 * i) / math.sqrt(n * (n - i) * i)
        out.append(CriticalPoint(i=i, pattern=pattern, mu=mu, lam=lam, g=g))
    return out


def sharp_bound(n: int) -> float:
    n = _check_n(n)
    return (n - 2) / math.sqrt(n * (n - 1))


@dataclass(frozen=True)
class OptimizeResult:
    lam: np.ndarray
    value: float
    # every start that converged, as (point, value, projected-gradient norm)
    critical: list[tuple[np.ndarray, float, float]]
    starts: int


def _retract(x: np.ndarray) -> np.ndarray:
    x = x - x.mean(axis=-1, keepdims=True)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def _riemannian_grad(x: np.ndarray) -> np.ndarray:
    g = 3.0 * x**2
    g = g - g.mean(axis=-1, keepdims=True)
    return g - np.sum(g * x, axis=-1, keepdims=True) * x


def optimize_g(
    n: int,
    seed: SeedLike = 0,
    direction: Literal["min", "max"] = "min",
    starts: int = 50,
    step: float = 0.05,
    gtol: float = 1e-10,
    max_iter: int = 20000,
) -> OptimizeResult:
    """Multi-start projected gradient descent (or ascent) of sum(l^3) on the constraint set."""
    n = _check_n(n)
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    sign = -1.0 if direction == "min" else 1.0
    rng = trial_rng(seed)
    x = _retract(rng.standard_normal((starts, n)))
    active = np.ones(starts, dtype=bool)
    gnorm = np.full(starts, np.inf)
    for _ in range(max_iter):
        if not active.any():
            break
        xa = x[active]
        gr = _riemannian_grad(xa)
        gn = np.linalg.norm(gr, axis=1)
        gnorm[active] = gn
        done = gn <= gtol
        xa = np.where(done[:, None], xa, _retract(xa + sign * step * gr))
        x[active] = xa
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    values = np.sum(x**3, axis=1)
    best = int(np.argmin(values) if direction == "min" else np.argmax(values))
    critical = [(x[k].copy(), float(values[k]), float(gnorm[k])) for k in range(starts) if gnorm[k] <= gtol]
    return OptimizeResult(lam=x[best].copy(), value=float(values[best]), critical=critical, starts=starts)


def equality_case_ii(n: int, a: float) -> tuple[np.ndarray, float]:
    """Spectrum (n-1 equal positive entries, one negative) and S where f vanishes."""
    n = _check_n(n)
    if not (a > 0) or not math.isfinite(a):
        raise PreconditionError(f"a must be a positive finite number, got {a!r}")
    lam = np.full(n, a / math.sqrt(n * (n - 1)))
    lam[-1] = -math.sqrt((n - 1) / n) * a
    S = math.sqrt(n * (n - 1)) * a
    if not (math.isfinite(S) and np.all(np.isfinite(lam))):
        raise PreconditionError("overflow building the equality configuration")
    return lam, S


@dataclass(frozen=True)
class EqualityResult:
    case: Equality
    a: Optional[float] = None


def classify_equality(lam, S: float, tol: float = CLASSIFY_TOL) -> EqualityResult:
    """Decide which equality case, if any, the pair (lam, S) realizes.

    Tolerances are absolute for case (i) and relative to the configuration's
    size for case (ii), so the answer does not change under rescaling.
    """
    lam = _traceless(lam, tol=max(tol, CONSTRAINT_TOL))
    n = lam.size
    if n < 3:
        raise InvalidDimensionError(f"need n >= 3, got {n}")
    if np.max(np.abs(lam)) <= tol:
        return EqualityResult(Equality.CASE_I)
    srt = np.sort(lam)
    a = -srt[0] / math.sqrt((n - 1) / n)
    if a <= 0:
        return EqualityResult(Equality.NONE)
    ref, S_ref = equality_case_ii(n, a)
    size = 1.0 + abs(S_ref)
    if np.max(np.abs(srt[1:] - ref[:-1])) <= tol * size and abs(S - S_ref) <= tol * size:
        return EqualityResult(Equality.CASE_II, a=float(a))
    return EqualityResult(Equality.NONE)


def random_constrained(n: int, count: int, seed: SeedLike) -> np.ndarray:
    """Rows uniformly distributed on {sum l = 0, sum l^2 = 1}."""
    rng = trial_rng(seed)
    return _retract(rng.standard_normal((count, n)))
