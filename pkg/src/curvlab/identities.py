"""Pointwise curvature identities, evaluated with both sides computed separately.

Left-hand sides are full tensor contractions of the parts of R against the
reaction term Q(R) = R^2 + R#R.  Right-hand sides are assembled only from the
scalar invariants S, |Ric|^2, |Ric0|^2, tr(Ric0^3), tri(R_W) and the
Weyl/Ricci coupling W_ijkl Ric0_ik Ric0_jl.
"""

from __future__ import annotations

import numpy as np

from .curvature import (
    CurvOp,
    magnitude,
    norm,
    op_from_tensor,
    q_operator,
    to_riemann,
    tri,
)
from .decomposition import Decomposition, decompose
from .errors import InvalidDimensionError, PreconditionError, ShapeError
from .residuals import IdentityResiduals, Residual, scalar_residual

__all__ = [
    "weyl_ricci_coupling",
    "cubic_trace",
    "huisken_residuals",
    "sum_consistency",
    "main_identity_residual",
    "lcf_gap",
    "lcf_closed_form",
    "hamilton_p",
    "reconstruct_3d",
    "dim3_equivalence_residual",
]

LCF_TOL = 1e-9


def weyl_ricci_coupling(d: Decomposition) -> float:
    """W_ijkl Ric0_ik Ric0_jl; equals sum_ij W_ijij l_i l_j in the Ric0 eigenframe."""
    if d.n == 3:
        return 0.0
    W = to_riemann(d.R_W)
    # contract (i, k) first, leaving a (j, l) matrix
    WR = np.tensordot(W, d.ric0, axes=([0, 2], [0, 1]))
    return float(np.sum(WR * d.ric0))


def cubic_trace(d: Decomposition) -> float:
    """sum of cubes of the Ric0 eigenvalues, as tr(Ric0^3)."""
    r = d.ric0
    return float(np.einsum("ij,jk,ki->", r, r, r))


def huisken_residuals(R: CurvOp) -> IdentityResiduals:
    """Contractions of the three irreducible parts against Q(R)."""
    n = R.n
    d = decompose(R)
    QT = to_riemann(q_operator(R))
    S, s2, st2 = d.S, d.sigma2, d.sigma_tilde2
    l3 = cubic_trace(d)
    wl = weyl_ricci_coupling(d)
    triW = tri(d.R_W)

    out = IdentityResiduals(scale=magnitude(R))
    lhs1 = np.sum(to_riemann(d.R_I) * QT)
    out.add(scalar_residual("hu1", lhs1, 2.0 / (n * (n - 1)) * S * s2))
    lhs2 = np.sum(to_riemann(d.R_ric0) * QT)
    rhs2 = 4.0 / (n * (n - 1)) * S * st2 - 8.0 / (n - 2) ** 2 * l3 + 4.0 / (n - 2) * wl
    out.add(scalar_residual("hu2", lhs2, rhs2))
    lhs3 = np.sum(to_riemann(d.R_W) * QT)
    out.add(scalar_residual("hu3", lhs3, 2.0 * triW + 2.0 / (n - 2) * wl))
    return out


def sum_consistency(R: CurvOp) -> Residual:
    """hu1 + hu2 + hu3 left sides against R_ijkl Q_ijkl = 2 tri(R)."""
    h = huisken_residuals(R)
    total = h["hu1"].lhs + h["hu2"].lhs + h["hu3"].lhs
    return scalar_residual("sum_consistency", total, 2.0 * tri(R))


def main_identity_residual(R: CurvOp) -> IdentityResiduals:
    """2 tri(R) S - |Ric|^2 |R_ijkl|^2 against its expansion in irreducible parts."""
    n = R.n
    d = decompose(R)
    S, s2, st2 = d.S, d.sigma2, d.sigma_tilde2
    T = to_riemann(R)
    lhs = 2.0 * tri(R) * S - s2 * np.sum(T**2)
    rhs = (
        -4.0 * norm(d.R_W) ** 2 * s2
        + 2.0 * S * tri(d.R_W)
        - 4.0 * S**2 * st2 / (n * (n - 1) * (n - 2))
        - 4.0 * st2**2 / (n - 2)
        - 8.0 * S * cubic_trace(d) / (n - 2) ** 2
        + 6.0 * S * weyl_ricci_coupling(d) / (n - 2)
    )
    out = IdentityResiduals(scale=magnitude(R))
    out.add(scalar_residual("hu_main", lhs, rhs))
    return out


def lcf_closed_form(R: CurvOp) -> float:
    """-4/(n-2) (S^2 |Ric0|^2 / (n(n-1)) + |Ric0|^4 + 2 S tr(Ric0^3) / (n-2))."""
    n = R.n
    d = decompose(R)
    S, st2 = d.S, d.sigma_tilde2
    return -4.0 / (n - 2) * (S**2 * st2 / (n * (n - 1)) + st2**2 + 2.0 * S * cubic_trace(d) / (n - 2))


def lcf_gap(R: CurvOp, tol: float = LCF_TOL) -> float:
    """2 tri(R) S - |Ric|^2 |R_ijkl|^2 for a Weyl-free R.

    Nonpositive whenever S >= 0.  Raises PreconditionError if R has a Weyl
    part larger than ``tol`` relative to |R|.
    """
    d = decompose(R)
    w = norm(d.R_W)
    if w > tol * (1.0 + norm(R)):
        raise PreconditionError(f"operator is not locally conformally flat (|R_W| = {w:.3e})")
    T = to_riemann(R)
    return 2.0 * tri(R) * d.S - d.sigma2 * float(np.sum(T**2))


def hamilton_p(mu: float, nu: float, lam: float) -> float:
    """Hamilton's pinching quantity of three Ricci eigenvalues."""
    return 0.5 * (
        (mu + nu - lam) ** 2 * (mu - nu) ** 2
        + (lam + nu - mu) ** 2 * (lam - nu) ** 2
        + (lam + mu - nu) ** 2 * (lam - mu) ** 2
    )


def _ric3(ric: np.ndarray) -> np.ndarray:
    ric = np.asarray(ric, dtype=float)
    if ric.shape != (3, 3):
        raise InvalidDimensionError(f"three-dimensional Ricci tensor required, got shape {ric.shape}")
    if np.max(np.abs(ric - ric.T)) > 1e-12 * (1.0 + np.max(np.abs(ric))):
        raise ShapeError("Ricci tensor must be symmetric")
    return ric


def reconstruct_3d(ric: np.ndarray) -> np.ndarray:
    """The unique 3-dimensional curvature tensor with the given Ricci tensor."""
    ric = _ric3(ric)
    g = np.eye(3)
    S = np.trace(ric)
    return (
        np.einsum("ik,jl->ijkl", g, ric)
        + np.einsum("jl,ik->ijkl", g, ric)
        - np.einsum("il,jk->ijkl", g, ric)
        - np.einsum("jk,il->ijkl", g, ric)
        - 0.5 * S * (np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g))
    )


def dim3_equivalence_residual(ric: np.ndarray) -> float:
    """|4(S C - |Ric|^4) + 4P| with C = R_ijkl Ric_jl Ric_ik, P from the eigenvalues.

    In dimension 3, S C - |Ric|^4 = -P exactly, so the reaction term
    4(S C - |Ric|^4)/S^3 of the |Ric|^2/S^2 evolution is -4P/S^3.
    """
    ric = _ric3(ric)
    T = reconstruct_3d(ric)
    S = float(np.trace(ric))
    s2 = float(np.sum(ric**2))
    C = float(np.einsum("ijkl,jl,ik->", T, ric, ric))
    mu, nu, lam = np.linalg.eigvalsh(ric)
    return abs(4.0 * (S * C - s2**2) + 4.0 * hamilton_p(mu, nu, lam))
