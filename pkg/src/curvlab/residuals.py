"""Residual bookkeeping shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Residual:
    """Both sides of an identity and how far apart they are.

    For matrix-valued identities ``lhs`` and ``rhs`` hold the norms of the two
    sides and ``absolute`` the norm of their difference.
    """

    name: str
    lhs: float
    rhs: float
    absolute: float

    @property
    def relative(self) -> float:
        return self.absolute / (1.0 + max(abs(self.lhs), abs(self.rhs)))


def scalar_residual(name: str, lhs: float, rhs: float) -> Residual:
    return Residual(name, float(lhs), float(rhs), abs(float(lhs) - float(rhs)))


@dataclass
class IdentityResiduals:
    """Named residuals for one input operator, plus its magnitude normalizer."""

    scale: float
    items: dict[str, Residual] = field(default_factory=dict)

    def add(self, r: Residual) -> Residual:
        self.items[r.name] = r
        return r

    def __getitem__(self, name: str) -> Residual:
        return self.items[name]

    def __iter__(self):
        return iter(self.items.values())

    def __len__(self):
        return len(self.items)

    def max_relative(self) -> float:
        return max((r.relative for r in self.items.values()), default=0.0)
