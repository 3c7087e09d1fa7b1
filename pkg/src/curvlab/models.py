"""Pointwise data of the three model shrinking solitons.

All three are normalized to Ric + Hess f = g/2 and written in an adapted
orthonormal frame, where curvature and Hessian are constant:

* Gaussian soliton on R^n: flat, f = |x|^2 / 4.
* Round sphere S^n with radius^2 = 2(n-1): Einstein, f constant.
* Round cylinder S^(n-1) x R with radius^2 = 2(n-2), the line last: f = t^2 / 4.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curvature import CurvOp, conjugate, identity_op, norm, ricci, scalar, sigma2, zero_op
from .decomposition import decompose, wedge
from .errors import InvalidDimensionError, PreconditionError
from .extremal import CLASSIFY_TOL, Equality, classify_equality

__all__ = [
    "ModelSoliton",
    "ModelClass",
    "gaussian",
    "round_sphere",
    "round_cylinder",
    "soliton_residual",
    "ricci_ratio",
    "scaling_check",
    "classify_model",
    "rotate_model",
]


@dataclass(frozen=True)
class ModelSoliton:
    name: str
    n: int
    ric: np.ndarray
    hess_f: np.ndarray
    S: float
    R: CurvOp
    potential_note: str


def _check(n: int, least: int) -> int:
    if int(n) != n or n < least:
        raise InvalidDimensionError(f"dimension must be an integer >= {least}, got {n!r}")
    return int(n)


def gaussian(n: int) -> ModelSoliton:
    n = _check(n, 2)
    return ModelSoliton(
        name="gaussian",
        n=n,
        ric=np.zeros((n, n)),
        hess_f=0.5 * np.eye(n),
        S=0.0,
        R=zero_op(n),
        potential_note="f = |x|^2/4",
    )


def round_sphere(n: int, radius2: Optional[float] = None) -> ModelSoliton:
    """Round sphere; ``radius2`` other than 2(n-1) gives a non-soliton for testing."""
    n = _check(n, 2)
    if radius2 is None:
        radius2 = 2.0 * (n - 1)
    K = 1.0 / radius2
    rho = (n - 1) / radius2
    return ModelSoliton(
        name="sphere",
        n=n,
        ric=rho * np.eye(n),
        hess_f=np.zeros((n, n)),
        S=n * rho,
        R=K * identity_op(n),
        potential_note="f constant",
    )


def round_cylinder(n: int) -> ModelSoliton:
    n = _check(n, 3)
    K = 1.0 / (2.0 * (n - 2))
    P = np.diag([1.0] * (n - 1) + [0.0])
    line = np.diag([0.0] * (n - 1) + [1.0])
    return ModelSoliton(
        name="cylinder",
        n=n,
        ric=0.5 * P,
        hess_f=0.5 * line,
        S=0.5 * (n - 1),
        R=K * wedge(P, P),
        potential_note="f = t^2/4 + const, t the line coordinate",
    )


def rotate_model(m: ModelSoliton, O: np.ndarray) -> ModelSoliton:
    """The same model written in the rotated frame O."""
    O = np.asarray(O, dtype=float)
    return ModelSoliton(
        name=m.name,
        n=m.n,
        ric=O @ m.ric @ O.T,
        hess_f=O @ m.hess_f @ O.T,
        S=m.S,
        R=conjugate(m.R, O),
        potential_note=m.potential_note,
    )


def soliton_residual(m: ModelSoliton) -> float:
    """max |Ric + Hess f - g/2| over all entries."""
    return float(np.max(np.abs(m.ric + m.hess_f - 0.5 * np.eye(m.n))))


def ricci_ratio(R: CurvOp) -> float:
    """|Ric|^2 / S^2."""
    S = scalar(R)
    if S == 0.0:
        raise PreconditionError("ratio |Ric|^2/S^2 is undefined when S = 0")
    return sigma2(R) / S**2


def scaling_check(R: CurvOp, tau: float) -> float:
    """Change in |Ric|^2/S^2 when the metric is scaled by tau (curvature by 1/tau)."""
    if not tau > 0:
        raise PreconditionError(f"tau must be positive, got {tau!r}")
    return abs(ricci_ratio(R) - ricci_ratio(R / tau))


class ModelClass(str, enum.Enum):
    FLAT = "flat"
    CASE_I = "case_i"
    CASE_II = "case_ii"
    NONE = "none"


@dataclass(frozen=True)
class ModelClassification:
    kind: ModelClass
    a: Optional[float] = None
    S: Optional[float] = None


def classify_model(m: ModelSoliton, tol: float = CLASSIFY_TOL) -> ModelClassification:
    """flat, or the equality case realized by the traceless Ricci spectrum of R."""
    if norm(m.R) <= tol:
        return ModelClassification(ModelClass.FLAT, S=0.0)
    d = decompose(m.R)
    res = classify_equality(d.lam, d.S, tol=tol)
    kind = {
        Equality.CASE_I: ModelClass.CASE_I,
        Equality.CASE_II: ModelClass.CASE_II,
        Equality.NONE: ModelClass.NONE,
    }[res.case]
    return ModelClassification(kind, a=res.a, S=d.S)
