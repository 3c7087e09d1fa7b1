"""Command line entry point: ``curvlab verify | extremal | models``.

Exit status is 0 when every check passes, 1 when any check fails and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import curvature as cv
from . import decomposition as dc
from . import extremal as ex
from . import identities as ids
from . import models as md
from .runner import SUITES, RunConfig, UsageError, emit, run


def _dims(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _suites(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number: {value!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"curvlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dims", type=_dims, default=[3, 4, 5, 6], help="comma-separated dimensions in [3, 12]")
    common.add_argument("--format", choices=("json", "markdown"), default="markdown")
    common.add_argument("--out", help="write the report here instead of stdout")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--trials", type=int, default=20, help="random trials per check and dimension")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--suites", type=_suites, default=list(SUITES), help=f"subset of {','.join(SUITES)}")
    v.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE", help="override a check threshold")

    sub.add_parser("extremal", parents=[common], help="print the bound and critical values of sum(l^3)")
    sub.add_parser("models", parents=[common], help="print model soliton data and residuals")
    return p


def _write(data: bytes, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _extremal_table(dims: list[int]) -> dict:
    out = {}
    for n in dims:
        out[str(n)] = {
            "sharp_bound": ex.sharp_bound(n),
            "critical": [
                {"i": cp.i, "g": cp.g, "mu": cp.mu, "lam_pos": float(cp.lam[0]), "lam_neg": float(cp.lam[-1])}
                for cp in ex.enumerate_critical(n)
            ],
        }
    return out


def _models_table(dims: list[int]) -> dict:
    out = {}
    for n in dims:
        rows = {}
        for make in (md.gaussian, md.round_sphere, md.round_cylinder):
            m = make(n)
            c = md.classify_model(m)
            row = {
                "S": m.S,
                "ric_diag": np.diag(m.ric).tolist(),
                "hess_f_diag": np.diag(m.hess_f).tolist(),
                "potential": m.potential_note,
                "soliton_residual": md.soliton_residual(m),
                "tachibana_gap": cv.tachibana_gap(m.R),
                "weyl_norm": cv.norm(dc.decompose(m.R).R_W),
                "class": c.kind.value,
                "a": c.a,
            }
            if m.S:
                row["ricci_ratio"] = md.ricci_ratio(m.R)
                row["lcf_gap"] = ids.lcf_gap(m.R)
            rows[m.name] = row
        out[str(n)] = rows
    return out


def _markdown_extremal(table: dict) -> str:
    lines = ["# Critical values of sum(l^3) on {sum l = 0, |l| = 1}"]
    for n, t in table.items():
        lines += ["", f"## n = {n}  (bound {t['sharp_bound']:.10f})", "", "| i | g | mu |", "|---|---|---|"]
        lines += [f"| {c['i']} | {c['g']:.10f} | {c['mu']:.10f} |" for c in t["critical"]]
    return "\n".join(lines) + "\n"


def _markdown_models(table: dict) -> str:
    lines = ["# Model shrinking solitons"]
    for n, rows in table.items():
        lines += ["", f"## n = {n}", "", "| model | S | class | soliton residual | Tachibana gap | potential |", "|---|---|---|---|---|---|"]
        for name, r in rows.items():
            lines.append(
                f"| {name} | {r['S']:.6g} | {r['class']} | {r['soliton_residual']:.1e} | {r['tachibana_gap']:.1e} | {r['potential']} |"
            )
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = RunConfig(
                dims=args.dims,
                trials=args.trials,
                seed=args.seed,
                tolerances=dict(args.tol),
                suites=args.suites,
                output_format=args.format,
                output_path=args.out,
            )
            report = run(cfg)
            _write(emit(report, args.format), args.out)
            return 0 if report.passed else 1

        bad = [d for d in args.dims if not 3 <= d <= 12]
        if bad:
            raise UsageError(f"dimensions must lie in [3, 12], got {bad}")
        if args.command == "extremal":
            table = _extremal_table(args.dims)
            text = json.dumps(table, indent=2) + "\n" if args.format == "json" else _markdown_extremal(table)
        else:
            table = _models_table(args.dims)
            text = json.dumps(table, indent=2) + "\n" if args.format == "json" else _markdown_models(table)
        _write(text.encode(), args.out)
        return 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"curvlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
