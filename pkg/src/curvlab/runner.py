"""Batch verification: run suites of randomized checks and assemble a report.

Each check maps (dimension, generator) to a nonnegative residual; the record
keeps the worst residual over all trials and passes iff it is within the
threshold.  Trial k of check c in dimension n draws from
``trial_rng(seed, suite_index, check_index, n, k)`` so results do not depend
on which other suites or dimensions were selected.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from . import curvature as cv
from . import decomposition as dc
from . import extremal as ex
from . import identities as ids
from . import models as md
from .lie import build_frame, so_inner

__all__ = ["SUITES", "RunConfig", "Record", "Report", "UsageError", "run", "emit", "check_names"]

MIN_DIM, MAX_DIM = 3, 12


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    threshold: float
    fn: Callable[[int, np.random.Generator], float]
    randomized: bool = True
    min_dim: int = MIN_DIM
    max_dim: int = MAX_DIM
    # when set, fn returns a dict of residuals and each part is its own record
    parts: Optional[tuple[str, ...]] = None

    @property
    def record_names(self) -> tuple[str, ...]:
        return self.parts or (self.name,)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


def _random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, Rr = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(Rr))


def _random_traceless(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((n, n))
    return dc.traceless(0.5 * (X + X.T))


def _random_lcf(n: int, rng: np.random.Generator) -> cv.CurvOp:
    """a I + b T0 ^ id with a > 0, hence S > 0."""
    return dc.weyl_free(n, rng.uniform(0.05, 2.0), _random_traceless(n, rng), rng.uniform(-2.0, 2.0))


# lie ---------------------------------------------------------------------


def _lie_antisymmetry(n, rng):
    c = build_frame(n).c
    return float(max(np.abs(c + c.transpose(1, 0, 2)).max(), np.abs(c + c.transpose(0, 2, 1)).max()))


def _lie_commutator(n, rng):
    f = build_frame(n)
    x, y = rng.standard_normal((2, f.N))
    X, Y = f.to_matrix(x), f.to_matrix(y)
    return float(np.abs(f.to_matrix(f.bracket(x, y)) - (X @ Y - Y @ X)).max())


def _lie_jacobi(n, rng):
    f = build_frame(n)
    x, y, z = rng.standard_normal((3, f.N))
    b = f.bracket
    return float(np.abs(b(b(x, y), z) + b(b(y, z), x) + b(b(z, x), y)).max())


def _lie_self_adjoint(n, rng):
    f = build_frame(n)
    x, y, z = rng.standard_normal((3, f.N))
    lhs = so_inner(f.to_matrix(f.bracket(x, y)), f.to_matrix(z))
    rhs = -so_inner(f.to_matrix(f.bracket(z, y)), f.to_matrix(x))
    return _rel(lhs, rhs)


def _lie_orthonormal(n, rng):
    f = build_frame(n)
    G = -0.5 * np.einsum("aij,bji->ab", f.basis, f.basis)
    return float(np.abs(G - np.eye(f.N)).max())


# curvature ---------------------------------------------------------------


def _cv_norm_bridge(n, rng):
    R = cv.random_curv(n, rng)
    return _rel(cv.tensor_norm2(R), 4.0 * cv.inner(R, R))


def _cv_bianchi(n, rng):
    R = cv.random_curv(n, rng)
    return cv.bianchi_residual(R) / (1.0 + cv.norm(R))


def _cv_projector(n, rng):
    X = rng.standard_normal((build_frame(n).N,) * 2)
    T = cv.to_riemann(cv.op_from_matrix(X + X.T, n))
    P1 = cv.bianchi_project(T)
    P2 = cv.bianchi_project(P1)
    idem = np.abs(P2 - P1).max() / (1.0 + np.abs(P1).max())
    grow = max(0.0, np.linalg.norm(P1) - np.linalg.norm(T)) / (1.0 + np.linalg.norm(T))
    return float(max(idem, grow))


def _cv_sharp_commutes(n, rng):
    A, B = cv.random_curv(n, rng), cv.random_curv(n, rng)
    return float(np.abs(cv.sharp(A, B).M - cv.sharp(B, A).M).max())


def _cv_tri_symmetry(n, rng):
    A, B, C = (cv.random_curv(n, rng) for _ in range(3))
    vals = [cv.tri(A, B, C), cv.tri(A, C, B), cv.tri(B, A, C), cv.tri(B, C, A), cv.tri(C, A, B), cv.tri(C, B, A)]
    return (max(vals) - min(vals)) / (1.0 + max(abs(v) for v in vals))


def _cv_tachibana(n, rng):
    R = cv.random_nonneg_curv(n, rng)
    return max(0.0, -cv.tachibana_gap(R)) / (1.0 + cv.magnitude(R))


def _cv_nonneg(n, rng):
    R = cv.random_nonneg_curv(n, rng)
    return max(0.0, -float(np.linalg.eigvalsh(R.M)[0])) / (1.0 + cv.norm(R))


def _cv_conjugation(n, rng):
    R = cv.random_curv(n, rng)
    R2 = cv.conjugate(R, _random_orthogonal(n, rng))
    fns = (cv.scalar, cv.sigma2, cv.tri, cv.tensor_norm2, cv.tachibana_gap)
    return max(_rel(f(R), f(R2)) for f in fns)


# decomposition -----------------------------------------------------------


def _dc_reconstruct(n, rng):
    R = cv.random_curv(n, rng)
    d = dc.decompose(R)
    return cv.norm(d.R_I + d.R_ric0 + d.R_W - R) / (1.0 + cv.norm(R))


def _dc_orthogonal(n, rng):
    R = cv.random_curv(n, rng)
    d = dc.decompose(R)
    a, b, c = d.parts
    return max(abs(cv.inner(a, b)), abs(cv.inner(a, c)), abs(cv.inner(b, c))) / (1.0 + cv.inner(R, R))


def _dc_traces(n, rng):
    d = dc.decompose(cv.random_curv(n, rng))
    w = np.abs(cv.ricci(d.R_W)).max()
    t = abs(np.trace(cv.ricci(d.R_ric0)))
    return float(max(w, t)) / (1.0 + abs(d.S))


def _dc_norm_identity(n, rng):
    R = cv.random_curv(n, rng)
    d = dc.decompose(R)
    rhs = d.S**2 / (2 * n * (n - 1)) + d.sigma_tilde2 / (n - 2) + cv.norm(d.R_W) ** 2
    return max(_rel(cv.inner(R, R), rhs), _rel(d.sigma2, d.S**2 / n + d.sigma_tilde2))


def _dc_weyl_free(n, rng):
    R = _random_lcf(n, rng)
    return cv.norm(dc.decompose(R).R_W) / (1.0 + cv.norm(R))


def _bw(n, rng):
    res = dc.bw_residuals(cv.random_curv(n, rng), cv.random_curv(n, rng))
    return {r.name: r.relative for r in res}


# identities --------------------------------------------------------------


def _hu(n, rng):
    R = cv.random_curv(n, rng)
    out = {r.name: r.relative for r in ids.huisken_residuals(R)}
    out["sum_consistency"] = ids.sum_consistency(R).relative
    return out


def _id_main(n, rng):
    return ids.main_identity_residual(cv.random_curv(n, rng))["hu_main"].relative


def _id_lcf_sign(n, rng):
    R = _random_lcf(n, rng)
    return max(0.0, ids.lcf_gap(R)) / (1.0 + cv.magnitude(R))


def _id_lcf_closed(n, rng):
    R = _random_lcf(n, rng)
    return _rel(ids.lcf_gap(R), ids.lcf_closed_form(R))


def _id_conjugation(n, rng):
    R = cv.random_curv(n, rng)
    O = _random_orthogonal(n, rng)
    a = ids.main_identity_residual(R)["hu_main"]
    b = ids.main_identity_residual(cv.conjugate(R, O))["hu_main"]
    return max(_rel(a.lhs, b.lhs), _rel(a.rhs, b.rhs))


def _id_dim3(n, rng):
    X = rng.standard_normal((3, 3))
    ric = 0.5 * (X + X.T)
    return ids.dim3_equivalence_residual(ric) / (1.0 + np.trace(ric) ** 4)


def _id_hamilton_p(n, rng):
    mu, nu, lam = rng.standard_normal(3)
    vals = [ids.hamilton_p(*p) for p in ((mu, nu, lam), (nu, lam, mu), (lam, mu, nu), (nu, mu, lam))]
    neg = max(0.0, -min(vals))
    return (max(vals) - min(vals) + neg) / (1.0 + max(vals))


# extremal ----------------------------------------------------------------


def _ex_optimizer(n, rng):
    res = ex.optimize_g(n, rng, "min")
    hi = ex.optimize_g(n, rng, "max")
    return max(abs(res.value + ex.sharp_bound(n)), abs(hi.value - ex.sharp_bound(n)))


def _ex_completeness(n, rng):
    res = ex.optimize_g(n, rng, "min")
    gs = np.array([cp.g for cp in ex.enumerate_critical(n)])
    if not res.critical:
        return math.inf
    return float(max(np.abs(gs - v).min() for _, v, _ in res.critical))


def _ex_f_nonneg(n, rng):
    lam = ex.random_constrained(n, 1000, rng) * rng.uniform(0.0, 3.0, size=(1000, 1))
    S = rng.uniform(-10.0, 10.0, size=1000)
    st2 = np.sum(lam**2, axis=1)
    return float(max(0.0, np.max(-ex.f_quartic(S, lam) / ((1 + S * S) * (1 + st2) ** 2))))


def _ex_lagrange(n, rng):
    worst = 0.0
    for cp in ex.enumerate_critical(n):
        lam = cp.lam
        worst = max(
            worst,
            np.abs(3 * lam**2 - 3.0 / n - 2 * cp.mu * lam).max(),
            abs(lam.sum()),
            abs(np.sum(lam**2) - 1),
            abs(ex.g_cubic(lam) - cp.g),
        )
    return float(worst)


def _ex_bound(n, rng):
    gs = [cp.g for cp in ex.enumerate_critical(n)]
    return max(abs(max(abs(g) for g in gs) - ex.sharp_bound(n)), abs(min(gs) + max(gs)))


def _ex_equality(n, rng):
    worst = 0.0
    for a in (1e-3, 1.0, 1e3):
        lam, S = ex.equality_case_ii(n, a)
        f = ex.f_quartic(S, lam)
        scale = (1 + S * S) * (1 + float(np.sum(lam**2))) ** 2
        worst = max(worst, abs(f) / scale)
        if ex.classify_equality(lam, S).case is not ex.Equality.CASE_II:
            worst = math.inf
    return worst


# models ------------------------------------------------------------------

_MODELS = {"gaussian": md.gaussian, "sphere": md.round_sphere, "cylinder": md.round_cylinder}
_EXPECTED = {"gaussian": md.ModelClass.FLAT, "sphere": md.ModelClass.CASE_I, "cylinder": md.ModelClass.CASE_II}


def _md_residual(n, rng):
    worst = 0.0
    for make in _MODELS.values():
        m = make(n)
        worst = max(worst, md.soliton_residual(m), float(np.abs(cv.ricci(m.R) - m.ric).max()))
    return worst


def _md_classify(n, rng):
    worst = 0.0
    for name, make in _MODELS.items():
        c = md.classify_model(make(n))
        if c.kind is not _EXPECTED[name]:
            return math.inf
        if c.a is not None:
            worst = max(worst, abs(c.S - math.sqrt(n * (n - 1)) * c.a))
    return worst


def _md_classify_rotated(n, rng):
    O = _random_orthogonal(n, rng)
    for name, make in _MODELS.items():
        if md.classify_model(md.rotate_model(make(n), O)).kind is not _EXPECTED[name]:
            return math.inf
    return 0.0


def _md_borderline(n, rng):
    worst = 0.0
    for name in ("sphere", "cylinder"):
        R = _MODELS[name](n).R
        worst = max(worst, abs(ids.lcf_gap(R)), abs(cv.tachibana_gap(R)), cv.norm(dc.decompose(R).R_W))
    return worst


def _random_positive_scalar(n: int, rng: np.random.Generator) -> cv.CurvOp:
    """Random operator shifted by a multiple of I so S is not a near-cancellation.

    The ratio |Ric|^2/S^2 loses about log10(sum|Ric_ii| / |S|) digits to
    roundoff, so a scale-invariance check at 1e-14 needs S well away from 0.
    """
    return cv.random_curv(n, rng) + rng.uniform(1.0, 3.0) * cv.identity_op(n)


def _md_scaling(n, rng):
    R = _random_positive_scalar(n, rng)
    worst = 0.0
    for tau in (0.1, 10.0, float(rng.uniform(0.5, 2.0))):
        worst = max(worst, md.scaling_check(R, tau) / md.ricci_ratio(R))
        worst = max(worst, md.scaling_check(md.round_cylinder(n).R, tau))
    return worst


SUITES: dict[str, list[Check]] = {
    "lie": [
        Check("antisymmetry", 0.0, _lie_antisymmetry, randomized=False),
        Check("orthonormal_basis", 0.0, _lie_orthonormal, randomized=False),
        Check("bracket_is_commutator", 1e-12, _lie_commutator),
        Check("jacobi", 1e-12, _lie_jacobi),
        Check("self_adjoint", 1e-12, _lie_self_adjoint),
    ],
    "curvature": [
        Check("norm_bridge", 1e-12, _cv_norm_bridge),
        Check("bianchi_clean", 1e-12, _cv_bianchi),
        Check("bianchi_projector", 1e-12, _cv_projector),
        Check("sharp_commutes", 1e-12, _cv_sharp_commutes),
        Check("tri_symmetric", 1e-10, _cv_tri_symmetry),
        Check("nonneg_generator", 1e-12, _cv_nonneg),
        Check("tachibana", 1e-10, _cv_tachibana),
        Check("conjugation_invariance", 1e-10, _cv_conjugation),
    ],
    "decomposition": [
        Check("reconstruction", 1e-12, _dc_reconstruct),
        Check("orthogonality", 1e-10, _dc_orthogonal),
        Check("trace_conditions", 1e-10, _dc_traces),
        Check("norm_identities", 1e-10, _dc_norm_identity),
        Check("weyl_free_inputs", 1e-12, _dc_weyl_free),
        Check(
            "bw_lemma",
            1e-9,
            _bw,
            parts=("bw1", "closure_I_W", "closure_I_I", "closure_W_W", "closure_I_ric0", "closure_ric0_W", "eq1", "eq2"),
        ),
    ],
    "identities": [
        Check("huisken", 1e-9, _hu, parts=("hu1", "hu2", "hu3", "sum_consistency")),
        Check("hu_main", 1e-9, _id_main),
        Check("lcf_gap_sign", 1e-12, _id_lcf_sign),
        Check("lcf_closed_form", 1e-9, _id_lcf_closed),
        Check("conjugation_invariance", 1e-9, _id_conjugation),
        Check("hamilton_p_symmetric", 1e-12, _id_hamilton_p),
        Check("dim3_equivalence", 1e-9, _id_dim3, max_dim=3),
    ],
    "extremal": [
        Check("closed_form_bound", 1e-14, _ex_bound, randomized=False),
        Check("lagrange_system", 1e-12, _ex_lagrange, randomized=False),
        Check("optimizer_agreement", 1e-6, _ex_optimizer, randomized=False),
        Check("critical_completeness", 1e-6, _ex_completeness, randomized=False),
        Check("f_nonnegative", 1e-12, _ex_f_nonneg),
        Check("equality_case_ii", 1e-12, _ex_equality, randomized=False),
    ],
    "models": [
        Check("soliton_residual", 1e-15, _md_residual, randomized=False),
        Check("classification", 1e-12, _md_classify, randomized=False),
        Check("classification_rotated", 0.0, _md_classify_rotated),
        Check("borderline_equalities", 1e-12, _md_borderline, randomized=False),
        Check("scaling_invariance", 1e-14, _md_scaling),
    ],
}


def check_names() -> set[str]:
    out = set()
    for suite, checks in SUITES.items():
        for c in checks:
            for name in c.record_names:
                out.add(name)
                out.add(f"{suite}.{name}")
    return out


@dataclass
class RunConfig:
    dims: list[int] = field(default_factory=lambda: [3, 4, 5, 6])
    trials: int = 20
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    output_format: str = "json"
    output_path: Optional[str] = None

    def validate(self) -> None:
        if not self.dims:
            raise UsageError("at least one dimension is required")
        bad = [d for d in self.dims if not (MIN_DIM <= d <= MAX_DIM)]
        if bad:
            raise UsageError(f"dimensions must lie in [{MIN_DIM}, {MAX_DIM}], got {bad}")
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise UsageError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
        if self.output_format not in ("json", "markdown"):
            raise UsageError(f"format must be json or markdown, got {self.output_format!r}")
        names = check_names()
        for k, v in self.tolerances.items():
            if k not in names:
                raise UsageError(f"unknown tolerance name {k!r}")
            if not (v >= 0):
                raise UsageError(f"tolerance {k} must be nonnegative")


@dataclass
class Record:
    suite: str
    check: str
    dim: int
    trials: int
    max_rel_residual: float
    threshold: float
    passed: bool

    def as_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class Report:
    records: list[Record]
    config: RunConfig
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failures(self) -> int:
        return sum(not r.passed for r in self.records)

    def as_json(self) -> dict:
        cfg = asdict(self.config)
        return {
            "summary": {
                "pass": self.passed,
                "checks": len(self.records),
                "failures": self.failures,
                "wall_time_s": round(self.wall_time, 3),
            },
            "records": [r.as_json() for r in self.records],
            "provenance": {"seed": self.config.seed, "version": __version__, "config": cfg},
        }


def _threshold(cfg: RunConfig, suite: str, name: str, default: float) -> float:
    tol = cfg.tolerances
    return tol.get(f"{suite}.{name}", tol.get(name, default))


def _evaluate(check: Check, n: int, rng: np.random.Generator) -> dict[str, float]:
    # a crashing check is a failing record, never an aborted run
    try:
        raw = check.fn(n, rng)
    except Exception:
        return {name: math.inf for name in check.record_names}
    if check.parts is None:
        raw = {check.name: raw}
    out = {}
    for name in check.record_names:
        v = float(raw.get(name, math.inf))
        out[name] = v if math.isfinite(v) else math.inf
    return out


def run(config: RunConfig) -> Report:
    config.validate()
    t0 = time.perf_counter()
    records = []
    suite_ids = {name: k for k, name in enumerate(SUITES)}
    for suite in config.suites:
        for ci, check in enumerate(SUITES[suite]):
            for n in config.dims:
                if not (check.min_dim <= n <= check.max_dim):
                    continue
                trials = config.trials if check.randomized else 1
                worst = dict.fromkeys(check.record_names, 0.0)
                for k in range(trials):
                    rng = cv.trial_rng(config.seed, suite_ids[suite], ci, n, k)
                    for name, v in _evaluate(check, n, rng).items():
                        worst[name] = max(worst[name], v)
                for name, w in worst.items():
                    thr = _threshold(config, suite, name, check.threshold)
                    records.append(Record(suite, name, n, trials, w, thr, w <= thr))
    return Report(records=records, config=config, wall_time=time.perf_counter() - t0)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.3e}"


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        data = report.as_json()
        for r in data["records"]:
            # JSON has no infinity; an unbounded residual is reported as null
            if math.isinf(r["max_rel_residual"]):
                r["max_rel_residual"] = None
        return (json.dumps(data, indent=2) + "\n").encode()
    if fmt != "markdown":
        raise UsageError(f"unknown format {fmt!r}")
    lines = [
        "# curvlab verification report",
        "",
        f"**{'PASS' if report.passed else 'FAIL'}**: {len(report.records)} checks, "
        f"{report.failures} failures, seed {report.config.seed}, {report.wall_time:.2f} s",
    ]
    for suite in report.config.suites:
        rows = [r for r in report.records if r.suite == suite]
        lines += ["", f"## {suite}", "", "| check | n | trials | max residual | threshold | pass |", "|---|---|---|---|---|---|"]
        for r in rows:
            lines.append(
                f"| {r.check} | {r.dim} | {r.trials} | {_fmt(r.max_rel_residual)} | {r.threshold:.0e} | {'yes' if r.passed else 'NO'} |"
            )
    return ("\n".join(lines) + "\n").encode()
