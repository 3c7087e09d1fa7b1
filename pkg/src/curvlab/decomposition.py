"""Wedge products of symmetric 2-tensors and the O(n)-irreducible splitting.

``R = R_I + R_Ric0 + R_W`` with

* ``R_I = S / (n(n-1)) * I``
* ``R_Ric0 = 2 / (n-2) * Ric0 ^ id``
* ``R_W`` the remainder, which is totally trace free.

The wedge is ``(A ^ B)(x ^ y) = (Ax ^ By + Bx ^ Ay) / 2``.  That choice is the
one for which ``id ^ id = I`` and ``|A ^ id|^2 = (n-2)/4 |A|^2`` for traceless
A; :func:`check_wedge_convention` asserts both on import.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curvature import (
    CurvOp,
    b_product,
    bianchi_project,
    identity_op,
    magnitude,
    norm,
    op_from_tensor,
    ricci,
    sharp,
    to_riemann,
    zero_op,
)
from .errors import InvalidDimensionError, PreconditionError, ShapeError
from .lie import build_frame
from .residuals import IdentityResiduals, Residual

__all__ = [
    "wedge",
    "traceless",
    "Decomposition",
    "decompose",
    "weyl_free",
    "bw_residuals",
    "check_wedge_convention",
]

WEYL3_TOL = 1e-9


def _sym(A: np.ndarray, name: str) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"{name} must be a square matrix, got shape {A.shape}")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-9 * (1.0 + np.max(np.abs(A), initial=0.0)):
        raise ShapeError(f"{name} must be symmetric")
    return A


def wedge(A: np.ndarray, B: np.ndarray) -> CurvOp:
    """The operator X -> (A X B + B X A) / 2 on antisymmetric matrices X."""
    A = _sym(A, "A")
    B = _sym(B, "B")
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    n = A.shape[0]
    frame = build_frame(n)
    Phi = frame.basis
    Y = A @ Phi @ B + B @ Phi @ A
    # matrix entries <phi_a, Y_b / 2> with <X, Z> = -tr(XZ)/2
    M = -0.25 * Phi.reshape(frame.N, n * n) @ Y.transpose(0, 2, 1).reshape(frame.N, n * n).T
    return CurvOp(frame, M)


def traceless(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return A - np.trace(A) / A.shape[0] * np.eye(A.shape[0])


@dataclass(frozen=True)
class Decomposition:
    """Irreducible parts of a curvature operator and the scalars built from them.

    ``lam`` holds the eigenvalues of the traceless Ricci tensor, ascending.
    """

    S: float
    lam: np.ndarray
    sigma2: float
    sigma_tilde2: float
    ric: np.ndarray
    ric0: np.ndarray
    R_I: CurvOp
    R_ric0: CurvOp
    R_W: CurvOp

    @property
    def parts(self) -> tuple[CurvOp, CurvOp, CurvOp]:
        return self.R_I, self.R_ric0, self.R_W

    @property
    def n(self) -> int:
        return self.R_I.n


def decompose(R: CurvOp) -> Decomposition:
    """Split R into trace, traceless-Ricci and Weyl parts.

    In dimension 3 the remainder is checked to vanish and the Weyl part is set
    to zero.
    """
    n = R.n
    if n < 3:
        raise InvalidDimensionError(f"decomposition needs n >= 3, got {n}")
    ric = ricci(R)
    S = float(np.trace(ric))
    ric0 = traceless(ric)
    R_I = (S / (n * (n - 1))) * identity_op(n)
    R_ric0 = (2.0 / (n - 2)) * wedge(ric0, np.eye(n))
    R_W = R - R_I - R_ric0
    if n == 3:
        if norm(R_W) > WEYL3_TOL * (1.0 + norm(R)):
            raise PreconditionError("three-dimensional input has a nonzero remainder; not a curvature operator")
        R_W = zero_op(3)
    lam = np.linalg.eigvalsh(ric0)
    return Decomposition(
        S=S,
        lam=lam,
        sigma2=float(np.sum(ric**2)),
        sigma_tilde2=float(np.sum(ric0**2)),
        ric=ric,
        ric0=ric0,
        R_I=R_I,
        R_ric0=R_ric0,
        R_W=R_W,
    )


def weyl_free(n: int, a: float, T0: np.ndarray, b: float = 1.0) -> CurvOp:
    """a I + b T0 ^ id, a locally conformally flat operator for traceless T0."""
    return a * identity_op(n) + b * wedge(T0, np.eye(n))


def _project(X: CurvOp, part: str) -> CurvOp:
    """Orthogonal projection of a (possibly non-Bianchi) operator onto one summand."""
    n = X.n
    ric = ricci(X)
    if part == "I":
        return (np.trace(ric) / (n * (n - 1))) * identity_op(n)
    if part == "ric0":
        return (2.0 / (n - 2)) * wedge(traceless(ric), np.eye(n))
    if part == "W":
        if n == 3:
            return zero_op(3)
        rem = X - _project(X, "I") - _project(X, "ric0")
        return op_from_tensor(bianchi_project(to_riemann(rem)))
    raise ValueError(part)


def _membership(name: str, X: CurvOp, parts: tuple[str, ...]) -> Residual:
    inside = zero_op(X.n)
    for p in parts:
        inside = inside + _project(X, p)
    return Residual(name, norm(X), norm(inside), norm(X - inside))


def _matrix_residual(name: str, lhs: CurvOp, rhs: CurvOp) -> Residual:
    return Residual(name, norm(lhs), norm(rhs), norm(lhs - rhs))


def bw_residuals(R: CurvOp, other: Optional[CurvOp] = None) -> IdentityResiduals:
    """Residuals of R + R#I = Ric(R) ^ id, the closure table of the bilinear form
    B(X, Y) = XY + YX + 2 X#Y on the three summands, and the two wedge-square
    expansions of the traceless Ricci part.

    ``other`` supplies the second argument for the closures B(I1, I2) and
    B(W1, W2); by default R is paired with itself.
    """
    n = R.n
    if n < 3:
        raise InvalidDimensionError(f"needs n >= 3, got {n}")
    d = decompose(R)
    d2 = d if other is None else decompose(other)
    I = identity_op(n)
    idn = np.eye(n)
    out = IdentityResiduals(scale=magnitude(R))

    out.add(_matrix_residual("bw1", R + sharp(R, I), wedge(d.ric, idn)))

    # R_I is scaled to unit size when zero so the closure checks are not vacuous
    RI = d.R_I if norm(d.R_I) > 0 else I
    RI2 = d2.R_I if norm(d2.R_I) > 0 else I
    R0, W, W2 = d.R_ric0, d.R_W, d2.R_W
    out.add(Residual("closure_I_W", 0.0, norm(b_product(RI, W)), norm(b_product(RI, W))))
    out.add(_membership("closure_I_I", b_product(RI, RI2), ("I",)))
    out.add(_membership("closure_W_W", b_product(W, W2), ("W",)))
    out.add(_membership("closure_I_ric0", b_product(RI, R0), ("ric0",)))
    out.add(_membership("closure_ric0_W", b_product(R0, W), ("ric0",)))

    st2 = d.sigma_tilde2
    ric0_sq0 = traceless(d.ric0 @ d.ric0)
    eq1_rhs = (
        (1.0 / (n - 2)) * wedge(d.ric0, d.ric0)
        - (2.0 / (n - 2) ** 2) * wedge(ric0_sq0, idn)
        + (st2 / (n * (n - 2))) * I
    )
    out.add(_matrix_residual("eq1", 0.5 * b_product(R0, R0), eq1_rhs))

    X = wedge(d.ric0, d.ric0)
    X_W = _project(X, "W")
    eq2_rhs = (-st2 / (n * (n - 1))) * I - (2.0 / (n - 2)) * wedge(ric0_sq0, idn) + X_W
    out.add(_matrix_residual("eq2", X, eq2_rhs))
    return out


def check_wedge_convention(n: int = 4, tol: float = 1e-12) -> None:
    """Pin the wedge normalization against the two inner products it must produce."""
    idn = np.eye(n)
    I = identity_op(n)
    if norm(wedge(idn, idn) - I) > tol:
        raise AssertionError("id ^ id must be the identity on 2-vectors")
    a = np.arange(1.0, n + 1.0)
    a -= a.mean()
    A = np.diag(a)
    got = norm(wedge(A, idn)) ** 2
    want = (n - 2) / 4.0 * np.sum(a**2)
    if abs(got - want) > tol * (1.0 + want):
        raise AssertionError(f"|A ^ id|^2 = {got}, expected {want}")


check_wedge_convention()
