"""Algebraic curvature operators on 2-vectors.

A :class:`CurvOp` stores the symmetric N x N matrix ``M`` with
``M[(ij), (kl)] = R_ijkl`` for ordered pairs i < j, k < l, so that
``R(e_i ^ e_j) = 1/2 sum_kl R_ijkl e_k ^ e_l``.  With this sign convention
the unit sphere has ``R_ijij = 1`` and its operator is the identity.

Everything is done in an orthonormal frame; the metric is the identity
matrix.  Operator inner products are Frobenius over the 2-vector basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import InvalidRotationError, MalformedTensorError, ShapeError
from .lie import Lambda2Frame, build_frame

__all__ = [
    "CurvOp",
    "SeedLike",
    "trial_rng",
    "to_riemann",
    "op_from_tensor",
    "op_from_matrix",
    "identity_op",
    "zero_op",
    "pair_symmetry_residual",
    "bianchi_residual",
    "bianchi_project",
    "ricci",
    "scalar",
    "sigma2",
    "inner",
    "norm",
    "tensor_norm2",
    "magnitude",
    "sharp",
    "b_product",
    "q_operator",
    "tri",
    "ricci_quadratic",
    "tachibana_gap",
    "random_curv",
    "random_nonneg_curv",
    "conjugate",
]

SYMMETRY_TOL = 1e-9

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def trial_rng(seed: SeedLike, *keys: int) -> np.random.Generator:
    """Counter-based generator: the stream depends only on ``seed`` and ``keys``.

    ``trial_rng(42, n, k)`` gives trial ``k`` in dimension ``n`` the same draws
    regardless of which other trials ran, or in what order.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("keys cannot be combined with an existing Generator")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        ss = np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + keys)
    else:
        ss = np.random.SeedSequence(int(seed), spawn_key=keys)
    return np.random.default_rng(ss)


@dataclass(frozen=True, eq=False)
class CurvOp:
    """Symmetric operator on 2-vectors of R^n, expressed in the lexicographic frame."""

    frame: Lambda2Frame
    M: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        N = self.frame.N
        if M.shape != (N, N):
            raise ShapeError(f"operator on 2-vectors of R^{self.frame.n} must be {N}x{N}, got {M.shape}")
        asym = np.max(np.abs(M - M.T), initial=0.0)
        if asym > SYMMETRY_TOL * (1.0 + np.max(np.abs(M), initial=0.0)):
            raise MalformedTensorError(f"operator matrix is not symmetric (max asymmetry {asym:.3e})")
        M = 0.5 * (M + M.T)
        M.flags.writeable = False
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def N(self) -> int:
        return self.frame.N

    def to_riemann(self) -> np.ndarray:
        return to_riemann(self)

    def _check(self, other: "CurvOp"):
        if not isinstance(other, CurvOp):
            return NotImplemented
        if other.frame.n != self.frame.n:
            raise ShapeError(f"frame mismatch: n={self.frame.n} vs n={other.frame.n}")

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CurvOp(self.frame, self.M + other.M)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CurvOp(self.frame, self.M - other.M)

    def __neg__(self):
        return CurvOp(self.frame, -self.M)

    def __mul__(self, t):
        if isinstance(t, CurvOp):
            return NotImplemented
        return CurvOp(self.frame, float(t) * self.M)

    __rmul__ = __mul__

    def __truediv__(self, t):
        return CurvOp(self.frame, self.M / float(t))


def _same_frame(*ops: CurvOp) -> Lambda2Frame:
    n = ops[0].frame.n
    for op in ops[1:]:
        if op.frame.n != n:
            raise ShapeError(f"frame mismatch: n={n} vs n={op.frame.n}")
    return ops[0].frame


def op_from_matrix(M: np.ndarray, n: Optional[int] = None) -> CurvOp:
    """Wrap an N x N symmetric matrix; ``n`` is inferred from N when omitted."""
    M = np.asarray(M, dtype=float)
    if n is None:
        N = M.shape[0]
        n = int(round((1 + np.sqrt(1 + 8 * N)) / 2))
    return CurvOp(build_frame(n), M)


def identity_op(n: int) -> CurvOp:
    frame = build_frame(n)
    return CurvOp(frame, np.eye(frame.N))


def zero_op(n: int) -> CurvOp:
    frame = build_frame(n)
    return CurvOp(frame, np.zeros((frame.N, frame.N)))


def to_riemann(R: CurvOp) -> np.ndarray:
    """All n^4 components R_ijkl, filled in by the pair antisymmetries."""
    n, N = R.n, R.N
    B = R.frame.basis.reshape(N, n * n)
    return (B.T @ R.M @ B).reshape(n, n, n, n)


def pair_symmetry_residual(T: np.ndarray) -> float:
    """Largest violation of R_ijkl = -R_jikl = -R_ijlk = R_klij."""
    T = np.asarray(T, dtype=float)
    return float(
        max(
            np.max(np.abs(T + T.transpose(1, 0, 2, 3)), initial=0.0),
            np.max(np.abs(T + T.transpose(0, 1, 3, 2)), initial=0.0),
            np.max(np.abs(T - T.transpose(2, 3, 0, 1)), initial=0.0),
        )
    )


def _check_tensor(T: np.ndarray) -> np.ndarray:
    T = np.asarray(T, dtype=float)
    if T.ndim != 4 or len(set(T.shape)) != 1:
        raise ShapeError(f"expected an n x n x n x n array, got shape {T.shape}")
    if T.shape[0] < 2:
        raise ShapeError("dimension must be at least 2")
    resid = pair_symmetry_residual(T)
    if resid > SYMMETRY_TOL * (1.0 + np.max(np.abs(T))):
        raise MalformedTensorError(f"tensor violates pair symmetries (residual {resid:.3e})")
    return T


def op_from_tensor(T: np.ndarray) -> CurvOp:
    """Pack a pair-symmetric 4-tensor into its operator on 2-vectors."""
    T = _check_tensor(T)
    frame = build_frame(T.shape[0])
    i, j = np.array(frame.pairs).T
    M = T[i[:, None], j[:, None], i[None, :], j[None, :]]
    return CurvOp(frame, M)


def _bianchi_sum(T: np.ndarray) -> np.ndarray:
    # T_ijkl + T_iklj + T_iljk
    return T + T.transpose(0, 2, 3, 1) + T.transpose(0, 3, 1, 2)


def bianchi_residual(R: Union[CurvOp, np.ndarray]) -> float:
    T = to_riemann(R) if isinstance(R, CurvOp) else np.asarray(R, dtype=float)
    return float(np.max(np.abs(_bianchi_sum(T)), initial=0.0))


def bianchi_project(T: np.ndarray) -> np.ndarray:
    """Remove the 4-form part: T - (T_ijkl + T_iklj + T_iljk)/3."""
    T = _check_tensor(T)
    return T - _bianchi_sum(T) / 3.0


def ricci(R: CurvOp) -> np.ndarray:
    """Ric_ik = sum_j R_ijkj."""
    return np.einsum("ijkj->ik", to_riemann(R))


def scalar(R: CurvOp) -> float:
    return float(np.trace(ricci(R)))


def sigma2(R: CurvOp) -> float:
    """|Ric|^2."""
    return float(np.sum(ricci(R) ** 2))


def inner(A: CurvOp, B: CurvOp) -> float:
    _same_frame(A, B)
    return float(np.sum(A.M * B.M))


def norm(R: CurvOp) -> float:
    return float(np.sqrt(inner(R, R)))


def tensor_norm2(R: CurvOp) -> float:
    """sum_ijkl R_ijkl^2, which equals 4 <R, R>."""
    return float(np.sum(to_riemann(R) ** 2))


def magnitude(R: CurvOp) -> float:
    """Normalizer |R|^3 (1 + |S|) for cubic and quartic curvature expressions."""
    return norm(R) ** 3 * (1.0 + abs(scalar(R)))


def sharp(A: CurvOp, B: CurvOp) -> CurvOp:
    """(A # B)_ab = 1/2 c_agh c_bdt A_gd B_ht."""
    frame = _same_frame(A, B)
    c = frame.c
    X = np.tensordot(c, A.M, axes=([1], [0]))  # X[a, h, d] = c_agh A_gd
    Y = np.tensordot(c, B.M, axes=([2], [0]))  # Y[b, d, h] = c_bdt B_th
    M = 0.5 * np.tensordot(X, Y, axes=([1, 2], [2, 1]))
    return CurvOp(frame, M)


def b_product(A: CurvOp, B: CurvOp) -> CurvOp:
    """AB + BA + 2 A#B."""
    frame = _same_frame(A, B)
    AB = A.M @ B.M
    return CurvOp(frame, AB + AB.T + 2.0 * sharp(A, B).M)


def q_operator(R: CurvOp) -> CurvOp:
    """Reaction term R^2 + R#R of the curvature evolution."""
    return CurvOp(R.frame, R.M @ R.M + sharp(R, R).M)


def tri(A: CurvOp, B: Optional[CurvOp] = None, C: Optional[CurvOp] = None) -> float:
    """tr((AB + BA + 2A#B) C); ``tri(R)`` means ``tri(R, R, R)``."""
    if B is None and C is None:
        B = C = A
    elif B is None or C is None:
        raise TypeError("tri takes one or three operators")
    _same_frame(A, B, C)
    return float(np.sum(b_product(A, B).M * C.M))


def ricci_quadratic(R: CurvOp) -> float:
    """Ric(R, R) = Ric_ip R_ijkl R_pjkl."""
    T = to_riemann(R)
    n = R.n
    Ric = np.einsum("ijkj->ik", T)
    F = T.reshape(n, n**3)
    return float(np.sum(Ric * (F @ F.T)))


def tachibana_gap(R: CurvOp) -> float:
    """-2 tri(R) + Ric(R, R); nonnegative whenever R >= 0."""
    return -2.0 * tri(R) + ricci_quadratic(R)


def random_curv(n: int, seed: SeedLike, scale: float = 1.0) -> CurvOp:
    """Gaussian symmetric matrix pushed through the Bianchi projection."""
    frame = build_frame(n)
    rng = trial_rng(seed)
    X = rng.standard_normal((frame.N, frame.N)) * scale
    X = 0.5 * (X + X.T)
    T = to_riemann(CurvOp(frame, X))
    return op_from_tensor(bianchi_project(T))


def random_nonneg_curv(n: int, seed: SeedLike, terms: Optional[int] = None) -> CurvOp:
    """Nonnegative combination of wedge squares A ^ A of random PSD matrices.

    Each A ^ A is the second exterior power of A, hence PSD, and satisfies the
    first Bianchi identity, so the sum is a nonnegative curvature operator.
    """
    from .decomposition import wedge

    frame = build_frame(n)
    rng = trial_rng(seed)
    if terms is None:
        terms = int(rng.integers(1, n + 2))
    M = np.zeros((frame.N, frame.N))
    for _ in range(terms):
        rank = int(rng.integers(1, n + 1))
        G = rng.standard_normal((n, rank))
        A = G @ G.T
        M += rng.uniform(0.0, 1.0) * wedge(A, A).M
    return CurvOp(frame, M)


def conjugate(R: CurvOp, O: np.ndarray, tol: float = 1e-10) -> CurvOp:
    """Rotate the frame: R_ijkl -> O_ia O_jb O_kc O_ld R_abcd.

    Computed as L M L^T with L the induced action X -> O X O^T on 2-vectors.
    """
    O = np.asarray(O, dtype=float)
    n = R.n
    if O.shape != (n, n):
        raise ShapeError(f"rotation must be {n}x{n}, got {O.shape}")
    err = np.max(np.abs(O.T @ O - np.eye(n)))
    if err > tol:
        raise InvalidRotationError(f"matrix is not orthogonal (|O^T O - I| = {err:.3e})")
    frame = R.frame
    rotated = O @ frame.basis @ O.T
    L = -0.5 * frame.basis.reshape(frame.N, -1) @ rotated.transpose(0, 2, 1).reshape(frame.N, -1).T
    return CurvOp(frame, L @ R.M @ L.T)
