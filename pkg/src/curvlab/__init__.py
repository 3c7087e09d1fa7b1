"""Numerical laboratory for algebraic curvature operators on 2-vectors of R^n."""

__version__ = "0.1.0"

from .curvature import (  # noqa: E402
    CurvOp,
    bianchi_project,
    conjugate,
    identity_op,
    op_from_tensor,
    q_operator,
    random_curv,
    random_nonneg_curv,
    ricci,
    scalar,
    sharp,
    tachibana_gap,
    to_riemann,
    tri,
)
from .decomposition import Decomposition, bw_residuals, decompose, wedge  # noqa: E402
from .lie import Lambda2Frame, build_frame, so_inner  # noqa: E402
