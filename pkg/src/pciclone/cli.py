"""Command-line surface: reports, sweeps, searches, and verification.

Subcommands:

    report    closed-form noise report for counts (N, N', M)
    sweep     noise-vs-asymmetry table for fixed n over several M
    optimize  best conjugate fraction a* for (n, M)
    solve     constrained amplifier search for (alpha, beta, gamma)
    verify    build a machine, sample it, compare with the predictions

Exit codes: 0 success, 1 failed verification, 2 domain error,
3 non-convergence.  The PCICLONE_TOL environment variable overrides the
default tolerance wherever --tol is not given explicitly.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .canonical import commutation_residual, to_symplectic
from .errors import ConvergenceError, DomainError
from .machine import CloningConfig, asymmetry_gain, build_machine, noise_report
from .montecarlo import SampleConfig, compare_to_analytic, simulate
from .optimize import minimize_asymmetry, solve_amplifier

SWEEP_HEADER = "n,M,a,N,Nc,G,n_th,sqrt_n_th"


@dataclass(frozen=True)
class SweepRow:
    """One (M, a) point of the asymmetry sweep; N and Nc are the implied
    replica counts (1-a)n and a*n, possibly non-integral."""

    n: float
    m: float
    a: float
    n_sig: float
    n_con: float
    gain: float
    n_th: float
    sqrt_n_th: float

    def values(self) -> tuple[float, ...]:
        return (
            self.n, self.m, self.a, self.n_sig, self.n_con,
            self.gain, self.n_th, self.sqrt_n_th,
        )

    def to_dict(self) -> dict:
        return dict(zip(SWEEP_HEADER.split(","), self.values()))


def _fmt(value) -> str:
    # 17 significant digits: every float round-trips exactly.
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _resolve_tol(args, fallback: float) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("PCICLONE_TOL")
    if env:
        return float(env)
    return fallback


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _flat_csv(doc: dict) -> str:
    header = ",".join(doc.keys())
    row = ",".join(_fmt(v) for v in doc.values())
    return f"{header}\n{row}"


def _as_count(value: float, label: str, tol: float) -> int:
    rounded = round(value)
    if abs(value - rounded) > tol:
        raise DomainError(f"{label} must be an integer, got {value}")
    return int(rounded)


def _config_from_args(args, tol: float) -> CloningConfig:
    x1, x2, x3 = args.x1, args.x2, args.x3
    if args.split:
        n = _as_count(x1, "n", tol)
        a = x2
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"conjugate fraction must lie in [0, 1], got {a}")
        n_conj = _as_count(a * n, "a*n", tol)
        return CloningConfig(n - n_conj, n_conj, _as_count(x3, "M", tol))
    return CloningConfig(
        _as_count(x1, "N", tol), _as_count(x2, "Nc", tol), _as_count(x3, "M", tol)
    )


def cmd_report(args) -> int:
    tol = _resolve_tol(args, 1e-9)
    doc = noise_report(_config_from_args(args, tol)).to_dict()
    if args.format == "csv":
        _emit(_flat_csv(doc), args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_sweep(args) -> int:
    rows = []
    a_grid = np.linspace(0.0, 1.0, args.a_steps)
    for m in sorted(args.clones):
        for a in a_grid:
            try:
                gain = asymmetry_gain(args.n, m, float(a))
            except DomainError:
                continue  # attenuation corner of the (M, a) plane
            n_th = (gain - 1.0) / m
            rows.append(
                SweepRow(
                    n=float(args.n),
                    m=float(m),
                    a=float(a),
                    n_sig=(1.0 - float(a)) * args.n,
                    n_con=float(a) * args.n,
                    gain=gain,
                    n_th=n_th,
                    sqrt_n_th=math.sqrt(max(n_th, 0.0)),
                )
            )
    if args.format == "json":
        _emit(json.dumps([row.to_dict() for row in rows], indent=2), args.out)
    else:
        lines = [SWEEP_HEADER]
        lines += [",".join(_fmt(v) for v in row.values()) for row in rows]
        _emit("\n".join(lines), args.out)
    return 0


def cmd_optimize(args) -> int:
    result = minimize_asymmetry(args.n, args.m, refine_tol=_resolve_tol(args, 1e-9))
    doc = result.to_dict()
    if args.format == "csv":
        _emit(_flat_csv(doc), args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_solve(args) -> int:
    result = solve_amplifier(
        args.alpha,
        args.beta,
        args.gamma,
        tol=_resolve_tol(args, 1e-10),
        seed=args.seed,
        restarts=args.restarts,
    )
    doc = result.to_dict()
    if args.format == "csv":
        _emit(_flat_csv(doc), args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_verify(args) -> int:
    tol = _resolve_tol(args, 1e-10)
    config = CloningConfig(args.n_sig, args.n_con, args.m)
    transform, layout = build_machine(config)
    residual = commutation_residual(transform)
    symplectic = to_symplectic(transform).residual()
    structural_pass = residual <= tol and symplectic <= tol

    seed = args.seed_pos if args.seed_pos is not None else args.seed
    emp = simulate(
        transform,
        layout,
        SampleConfig(sample_count=args.samples, seed=seed, psi=args.psi),
    )
    summary = compare_to_analytic(emp, noise_report(config), layout)
    passed = structural_pass and summary.passed

    doc = {
        "N": config.n_inputs,
        "Nc": config.n_conj,
        "M": config.m_clones,
        "Mc": config.m_anticlones,
        "samples": args.samples,
        "seed": seed,
        "psi": [args.psi.real, args.psi.imag],
        "commutation_residual": residual,
        "symplectic_residual": symplectic,
        "structural_tol": tol,
        "structural_pass": structural_pass,
        "comparison": summary.to_dict(),
        "passed": passed,
    }
    if args.format == "csv":
        header = "mode,role,z_mean_x,z_mean_p,z_var_x,z_var_p,z_fidelity"
        lines = [header]
        for row in summary.rows:
            d = row.to_dict()
            lines.append(",".join(_fmt(d[k]) for k in header.split(",")))
        _emit("\n".join(lines), args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0 if passed else 1


def _add_common(sub, default_format: str):
    sub.add_argument("--tol", type=float, default=None,
                     help="numeric tolerance (default per command; "
                          "PCICLONE_TOL overrides)")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed")
    sub.add_argument("--out", default=None, help="write output to this path")
    sub.add_argument("--format", choices=("json", "csv"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pciclone",
        description="Coherent-state cloning with phase-conjugate inputs: "
                    "closed-form reports, asymmetry sweeps, amplifier "
                    "search, and sampled verification.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("report", help="noise report for counts (N, Nc, M)")
    p.add_argument("x1", type=float, help="N, or n with --split")
    p.add_argument("x2", type=float, help="Nc, or a with --split")
    p.add_argument("x3", type=float, help="M")
    p.add_argument("--split", action="store_true",
                   help="interpret arguments as (n, a, M) with Nc = a*n")
    _add_common(p, "json")
    p.set_defaults(func=cmd_report)

    p = subs.add_parser("sweep", help="noise vs asymmetry table for fixed n")
    p.add_argument("n", type=float, help="total replica count")
    p.add_argument("clones", type=float, nargs="+", help="clone counts M")
    p.add_argument("--a-steps", type=int, default=1001,
                   help="grid points on a in [0, 1] (default 1001)")
    _add_common(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("optimize", help="best conjugate fraction for (n, M)")
    p.add_argument("n", type=float, help="total replica count")
    p.add_argument("m", type=float, help="clone count M")
    _add_common(p, "json")
    p.set_defaults(func=cmd_optimize)

    p = subs.add_parser("solve", help="amplifier search for (alpha, beta, gamma)")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("gamma", type=float)
    p.add_argument("--restarts", type=int, default=8)
    _add_common(p, "json")
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("verify", help="sample a machine against predictions")
    p.add_argument("n_sig", type=int, help="signal replica count N")
    p.add_argument("n_con", type=int, help="conjugate replica count Nc")
    p.add_argument("m", type=int, help="clone count M")
    p.add_argument("samples", type=int, nargs="?", default=100_000)
    p.add_argument("seed_pos", type=int, nargs="?", default=None,
                   metavar="seed", help="overrides --seed when given")
    p.add_argument("--psi", type=complex, default=1 + 0.5j,
                   help="input amplitude, e.g. '0.8-0.4j'")
    _add_common(p, "json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
