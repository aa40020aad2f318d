"""Batch command-line front end.

Subcommands
===========

coeffs   write the coefficient tables (beta, c, a, and rho when an
         exponent t is given) for one order m as JSON.
verify   run seeded randomized trials of one identity and write a JSON
         line per trial plus a summary line.
norms    evaluate a squared space norm of a polynomial given as an
         expression (see :mod:`radialjet.expressions` for the grammar).
scan     tabulate the degree-by-degree monomial norm ratios between the
         Drury-Arveson and a Besov-Dirichlet norm.

Exit codes: 0 success (verify: all trials passed), 1 at least one failed
trial, 2 parameter error, 3 internal consistency error (two computation
paths disagreed, i.e. a bug).

Identical configurations produce byte-identical output files; output files
are written atomically (write-then-rename).  The environment variable
``RADIAL_JET_THREADS`` caps the number of worker threads used to evaluate
independent trials; results are always emitted in trial order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coefficients import (
    ConsistencyError,
    a_coefficients,
    beta_matrix,
    c_table,
    rho_coefficients,
)
from .expressions import ExpressionError, parse_polynomial
from .identities import (
    verify_fdb_power,
    verify_log_expansion,
    verify_log_identity,
    verify_power_expansion,
    verify_power_identity,
    verify_reciprocal_identity,
    verify_stratum_reduction,
)
from .jets import EXACT, FLOAT, random_pair
from .rationals import format_rational, parse_rational
from .spaces import BesovDirichlet, DruryArveson, equivalence_scan, norm_sq

EXIT_OK = 0
EXIT_TRIAL_FAILURE = 1
EXIT_PARAMETER = 2
EXIT_INTERNAL = 3

THREADS_ENV = "RADIAL_JET_THREADS"

VERIFY_IDS = ("eq1.2", "eq1.3", "eq1.4", "eq3.4", "eq3.6", "eq3.9", "fdb")


@dataclass
class RunConfig:
    """Parameters of one CLI invocation (one subcommand plus its flags)."""

    subcommand: str
    n: int = 2
    m: int = 2
    D: int = 4
    t: Fraction | None = None
    s: Fraction | None = None
    r: int | None = None
    k: int = 2
    nu: int = 2
    identity: str | None = None
    trials: int = 20
    seed: int = 0
    regime: str = EXACT
    tolerance: float | None = None
    space: str = "da"
    expression: str | None = None
    m0: int = 1
    k0: int = 0
    D_max: int = 40
    fmt: str = "json"
    out: str | None = None


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(fn, items: list) -> list:
    workers = _thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_output(text: str, out_path: str | None) -> None:
    if not out_path or out_path == "-":
        sys.stdout.write(text)
        return
    path = Path(out_path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


# -- subcommands ---------------------------------------------------------------


def run_coeffs(cfg: RunConfig) -> int:
    """Write the coefficient-table JSON; exit 0 iff both routes agreed."""
    if cfg.m < 1:
        raise ValueError(f"need m >= 1, got {cfg.m}")
    beta = beta_matrix(cfg.m)
    c = c_table(cfg.m)
    a = a_coefficients(cfg.m)
    table = {
        "m": cfg.m,
        "beta": beta.to_lists(),
        "c": c.to_lists(),
        "a": [format_rational(v) for v in a.a],
        "a0": format_rational(a.a0),
    }
    if cfg.t is not None:
        rho = rho_coefficients(cfg.m, cfg.t)
        table["t"] = format_rational(cfg.t)
        table["rho"] = [format_rational(v) for v in rho.rho]
        table["rho0"] = format_rational(rho.rho0)
    _write_output(json.dumps(table, indent=2) + "\n", cfg.out)
    return EXIT_OK


def _verify_one(cfg: RunConfig, trial_seed: int):
    """All reports for one seeded trial (one per r for the stratified id)."""
    tol = cfg.tolerance
    t = cfg.t
    f, h = random_pair(cfg.n, cfg.D, trial_seed, cfg.regime)
    ident = cfg.identity
    if ident == "eq1.2":
        return [verify_reciprocal_identity(f, h, cfg.m, tol=tol, seed=trial_seed)]
    if ident == "eq1.3":
        return [verify_power_identity(f, h, cfg.m, t, tol=tol, seed=trial_seed)]
    if ident == "eq1.4":
        return [verify_log_identity(f, h, cfg.m, tol=tol, seed=trial_seed)]
    if ident == "eq3.4":
        r_values = [cfg.r] if cfg.r is not None else list(range(1, cfg.m + 1))
        return [
            verify_stratum_reduction(f, h, cfg.m, r, tol=tol, seed=trial_seed)
            for r in r_values
        ]
    if ident == "eq3.6":
        return [verify_power_expansion(f, h, cfg.m, t, tol=tol, seed=trial_seed)]
    if ident == "eq3.9":
        return [verify_log_expansion(f, h, cfg.m, tol=tol, seed=trial_seed)]
    if ident == "fdb":
        return [verify_fdb_power(f, cfg.k, cfg.nu, tol=tol, seed=trial_seed)]
    raise ValueError(f"unknown identity id {ident!r}; choose from {VERIFY_IDS}")


def run_verify(cfg: RunConfig) -> int:
    """Run the trial sweep; JSONL report plus a summary line."""
    if cfg.identity not in VERIFY_IDS:
        raise ValueError(f"unknown identity id {cfg.identity!r}; choose from {VERIFY_IDS}")
    if cfg.trials < 0:
        raise ValueError("need trials >= 0")
    if cfg.identity in ("eq1.3", "eq3.6") and cfg.t is None:
        raise ValueError(f"identity {cfg.identity} needs an exponent --t")
    if cfg.regime not in (EXACT, FLOAT):
        raise ValueError(f"unknown regime {cfg.regime!r}")
    if cfg.identity == "eq3.4" and cfg.r is not None and not 1 <= cfg.r <= cfg.m:
        raise ValueError(f"need 1 <= r <= m, got r={cfg.r}")
    seeds = [cfg.seed + i for i in range(cfg.trials)]
    batches = _ordered_map(lambda s: _verify_one(cfg, s), seeds)
    reports = [rep for batch in batches for rep in batch]
    lines = [rep.to_json_line() for rep in reports]
    passed = sum(1 for rep in reports if rep.passed)
    failed = len(reports) - passed
    summary = {
        "id": cfg.identity,
        "trials": len(reports),
        "passed": passed,
        "failed": failed,
        "summary": True,
    }
    lines.append(json.dumps(summary, separators=(",", ":")))
    _write_output("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if failed == 0 else EXIT_TRIAL_FAILURE


def run_norms(cfg: RunConfig) -> int:
    """Evaluate a squared norm of a polynomial expression."""
    if cfg.expression is None:
        raise ValueError("norms needs an expression --h")
    h = parse_polynomial(cfg.expression, n=cfg.n if cfg.n else None)
    if cfg.space == "da":
        space = DruryArveson(h.n)
    elif cfg.space == "hms":
        if cfg.s is None:
            raise ValueError("the Besov-Dirichlet norm needs --s")
        s = int(cfg.s) if cfg.s.denominator == 1 else cfg.s
        space = BesovDirichlet(h.n, cfg.m, s)
    else:
        raise ValueError(f"unknown space {cfg.space!r}; choose da or hms")
    value = norm_sq(space, h)
    payload = {
        "space": cfg.space,
        "h": cfg.expression,
        "n": h.n,
        "norm_sq": float(value),
    }
    if cfg.space == "hms":
        payload["m"] = cfg.m
        payload["s"] = format_rational(cfg.s)
    if isinstance(value, Fraction):
        payload["norm_sq_rational"] = format_rational(value)
    _write_output(json.dumps(payload, indent=2) + "\n", cfg.out)
    return EXIT_OK


def run_scan(cfg: RunConfig) -> int:
    """Tabulate the norm-equivalence ratio sequence."""
    scan = equivalence_scan(cfg.n, cfg.D_max, cfg.m0, cfg.k0)
    if cfg.fmt == "csv":
        _write_output(scan.to_csv(), cfg.out)
    else:
        _write_output(json.dumps(scan.to_json_dict(), indent=2) + "\n", cfg.out)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radialjet",
        description="Exact commutator-identity verification and ball-space norms.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("coeffs", help="write coefficient tables for one order m")
    p.add_argument("--m", type=int, required=True, help="order (m >= 1)")
    p.add_argument("--t", type=parse_rational, default=None, help='exponent "p/q"')
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("verify", help="randomized identity verification sweep")
    p.add_argument("--id", dest="identity", required=True, choices=VERIFY_IDS)
    p.add_argument("--n", type=int, default=2, help="number of variables")
    p.add_argument("--m", type=int, default=2, help="derivative order")
    p.add_argument("--D", type=int, default=4, help="jet degree cap")
    p.add_argument("--t", type=parse_rational, default=None, help='exponent "p/q"')
    p.add_argument("--r", type=int, default=None, help="stratum depth for eq3.4 (default: all)")
    p.add_argument("--k", type=int, default=2, help="power for fdb")
    p.add_argument("--nu", type=int, default=2, help="derivative order for fdb")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--regime", choices=(EXACT, FLOAT), default=EXACT)
    p.add_argument("--tolerance", type=float, default=None, help="float-regime tolerance")
    p.add_argument("--out", default=None)

    p = sub.add_parser("norms", help="squared norm of a polynomial expression")
    p.add_argument("--space", choices=("da", "hms"), default="da")
    p.add_argument("--h", dest="expression", required=True, help="polynomial expression")
    p.add_argument("--n", type=int, default=0, help="variable count (default: inferred)")
    p.add_argument("--m", type=int, default=1, help="derivative order (hms)")
    p.add_argument("--s", type=parse_rational, default=None, help="weight exponent (hms)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("scan", help="norm-equivalence ratio table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m0", type=int, required=True)
    p.add_argument("--k0", type=int, required=True)
    p.add_argument("--Dmax", dest="D_max", type=int, default=40)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in vars(args):
        if name != "subcommand" and hasattr(cfg, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


_RUNNERS = {
    "coeffs": run_coeffs,
    "verify": run_verify,
    "norms": run_norms,
    "scan": run_scan,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    try:
        return _RUNNERS[cfg.subcommand](cfg)
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, ExpressionError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
