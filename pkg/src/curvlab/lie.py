"""The Lie algebra so(n) identified with the space of 2-vectors on R^n.

The basis vector e_i ^ e_j (i < j) is the antisymmetric matrix with +1 at
(i, j) and -1 at (j, i).  Pairs are ordered lexicographically and every other
module addresses 2-vector coordinates through :class:`Lambda2Frame`.
Indices are 0-based in storage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidDimensionError, ShapeError

__all__ = ["Lambda2Frame", "build_frame", "so_inner", "basis_matrix"]


@dataclass(frozen=True, eq=False)
class Lambda2Frame:
    """Orthonormal basis of 2-vectors together with the so(n) structure constants.

    Attributes:
        n: ambient dimension.
        pairs: index pairs (i, j), i < j, in lexicographic order.
        basis: array of shape (N, n, n); ``basis[a]`` is the matrix of pair ``a``.
        c: structure constants, ``[phi_a, phi_b] = sum_g c[a, b, g] phi_g``.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]
    basis: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.pairs)

    @property
    def index(self) -> dict[tuple[int, int], int]:
        return {p: a for a, p in enumerate(self.pairs)}

    def to_matrix(self, x: np.ndarray) -> np.ndarray:
        """Antisymmetric n x n matrix of the 2-vector with coordinates ``x``."""
        return np.tensordot(np.asarray(x, dtype=float), self.basis, axes=1)

    def from_matrix(self, A: np.ndarray) -> np.ndarray:
        """Coordinates of an antisymmetric matrix in the orthonormal basis."""
        A = np.asarray(A, dtype=float)
        if A.shape != (self.n, self.n):
            raise ShapeError(f"expected a {self.n}x{self.n} matrix, got {A.shape}")
        i, j = np.array(self.pairs).T
        return A[i, j].copy()

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Lie bracket in coordinates, via the structure constants."""
        return np.einsum("abg,a,b->g", self.c, x, y)


def basis_matrix(n: int, i: int, j: int) -> np.ndarray:
    """E_ij - E_ji as a dense n x n array."""
    E = np.zeros((n, n))
    E[i, j] = 1.0
    E[j, i] = -1.0
    return E


def so_inner(A: np.ndarray, B: np.ndarray) -> float:
    """The invariant inner product -tr(AB)/2 on antisymmetric matrices."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"incompatible shapes {A.shape} and {B.shape}")
    return -0.5 * float(np.einsum("ij,ji->", A, B))


@lru_cache(maxsize=None)
def build_frame(n: int) -> Lambda2Frame:
    """Build (and cache) the 2-vector frame of R^n.

    Structure constants come from explicit matrix commutators of the basis
    matrices, paired against the basis with ``so_inner``.
    """
    if int(n) != n or n < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    pairs = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    basis = np.stack([basis_matrix(n, i, j) for i, j in pairs])
    prod = np.einsum("aij,bjk->abik", basis, basis)
    comm = prod - prod.transpose(1, 0, 2, 3)
    # <X, phi_g> = -tr(X phi_g) / 2
    c = -0.5 * np.einsum("abij,gji->abg", comm, basis)
    basis.flags.writeable = False
    c.flags.writeable = False
    return Lambda2Frame(n=n, pairs=pairs, basis=basis, c=c)
