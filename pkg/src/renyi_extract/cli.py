"""Command-line interface.

Subcommands: bound, verify, bucket, sweep, entropy.  Exit status is 0 only
when every certification and bound check passes; config errors exit 2.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time

import numpy as np

from . import bounds as bd
from .config import BUDGET_ENV_VAR, load_config, parse_alpha
from .errors import BudgetExceededError, ConfigError
from .harness import run_bucket, run_sweep, run_verify
from .measures import Pmf, renyi_entropy

BOUND_NAMES = (
    "joint-real",
    "joint-integer",
    "simplified",
    "dk-simple",
    "dk-sharp",
    "alpha-above-k",
    "infty",
    "bucket",
    "gamma",
)


def _units_factor(units: str, q: int) -> float:
    return math.log2(q) if units == "bits" else 1.0


def _write_out(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def _cmd_bound(args) -> int:
    q = args.q
    factor = _units_factor(args.units, q)
    if args.regime:
        if args.regime in ("integer-alpha", "corollary") and args.alpha is None:
            raise ConfigError(f"--regime {args.regime} requires --alpha")
        if args.regime in ("min-entropy", "sharp-gamma") and args.k is None:
            raise ConfigError(f"--regime {args.regime} requires --k")
        if args.H is None or args.eps is None:
            raise ConfigError("threshold regimes require --H and --eps")
        value = bd.m_threshold(
            args.regime, q, args.H, args.eps, alpha=args.alpha, k=args.k
        )
        print(f"m_threshold[{args.regime}] = {value * factor:.12g}")
        return 0

    name = args.name
    need = {
        "joint-real": ("m", "k", "alpha", "H"),
        "joint-integer": ("m", "alpha", "H"),
        "simplified": ("m", "k", "alpha", "H"),
        "dk-simple": ("m", "k", "H"),
        "dk-sharp": ("m", "k", "H"),
        "alpha-above-k": ("m", "k", "alpha", "H"),
        "infty": ("m", "k", "H"),
        "bucket": ("m", "k", "A"),
        "gamma": ("y",),
    }[name]
    missing = [f"--{f}" for f in need if getattr(args, f) is None]
    if missing:
        raise ConfigError(f"--name {name} requires {' '.join(missing)}")

    if name == "joint-real":
        value = bd.bound_real_alpha(q, args.m, args.k, args.alpha, args.H)
    elif name == "joint-integer":
        value = bd.bound_integer_alpha(q, args.m, int(args.alpha), args.H)
    elif name == "simplified":
        value = bd.bound_real_alpha_simplified(q, args.m, args.k, args.alpha, args.H)
    elif name == "dk-simple":
        value = bd.dk_bound_simple(q, args.m, args.k, args.H)
    elif name == "dk-sharp":
        value = bd.dk_bound_sharp(q, args.m, args.k, args.H)
    elif name == "alpha-above-k":
        value = bd.bound_alpha_above_k(q, args.m, args.k, args.alpha, args.H)
    elif name == "infty":
        value = bd.bound_infty(q, args.m, args.k, args.H)
    elif name == "bucket":
        value = bd.bucket_bound(q, args.m, args.k, args.A)
        factor = 1.0  # bucket sizes are counts, not log quantities
    else:
        value = bd.gamma_fn(args.y)
        factor = 1.0
    print(f"{name} = {value * factor:.12g}")
    return 0


def _load(args):
    config = load_config(args.config)
    if args.budget is not None:
        config = dataclasses.replace(config, budget=args.budget)
    if args.rng_seed is not None:
        config = dataclasses.replace(config, rng_seed=args.rng_seed)
    return config


def _cmd_verify(args) -> int:
    config = _load(args)
    start = time.monotonic()
    outcome = run_verify(config, workers=args.workers)
    elapsed = time.monotonic() - start
    text = _report_json(outcome.report)
    _write_out(text, args.out or config.out)
    print(f"verify: wall-clock {elapsed:.3f}s", file=sys.stderr)
    if not outcome.report["certification"]["is_k_star_universal"]:
        failed = [
            v["l"]
            for v in outcome.report["certification"]["per_order"]
            if not v["passed"]
        ]
        print(f"certification FAILED at l={failed}", file=sys.stderr)
    return 0 if outcome.passed else 1


def _cmd_bucket(args) -> int:
    config = _load(args)
    start = time.monotonic()
    report = run_bucket(config)
    elapsed = time.monotonic() - start
    _write_out(_report_json(report), args.out or config.out)
    print(f"bucket: wall-clock {elapsed:.3f}s", file=sys.stderr)
    return 0 if report["all_satisfied"] else 1


def _cmd_sweep(args) -> int:
    config = _load(args)
    start = time.monotonic()
    csv_text, all_ok = run_sweep(config, workers=args.workers)
    elapsed = time.monotonic() - start
    _write_out(csv_text, args.out or config.out)
    print(f"sweep: wall-clock {elapsed:.3f}s", file=sys.stderr)
    return 0 if all_ok else 1


def _cmd_entropy(args) -> int:
    probs = np.array([float(v) for v in args.probs.split(",")])
    alpha = parse_alpha(args.alpha)
    pmf = Pmf(probs, args.q)
    value = renyi_entropy(pmf, alpha)
    print(f"H_{args.alpha} = {value * _units_factor(args.units, args.q):.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-extract",
        description="Certify Renyi-divergence uniformity bounds for k*-universal "
        "leftover hashing by exact enumeration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bound", help="evaluate a closed-form bound or threshold")
    group = pb.add_mutually_exclusive_group(required=True)
    group.add_argument("--regime", choices=bd.THRESHOLD_REGIMES)
    group.add_argument("--name", choices=BOUND_NAMES)
    pb.add_argument("--q", type=int, default=2)
    pb.add_argument("--m", type=int)
    pb.add_argument("--k", type=int)
    pb.add_argument("--alpha", type=float)
    pb.add_argument("--H", type=float)
    pb.add_argument("--eps", type=float)
    pb.add_argument("--A", type=int, help="subset size for the bucket bound")
    pb.add_argument("--y", type=float, help="argument of the gamma inverse")
    pb.add_argument("--units", choices=("qary", "bits"), default="qary")
    pb.set_defaults(func=_cmd_bound)

    for name, func, helptext in (
        ("verify", _cmd_verify, "certify a family and check every bound"),
        ("bucket", _cmd_bucket, "expected largest-bucket experiment"),
        ("sweep", _cmd_sweep, "bound-vs-empirical CSV over a grid"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--units", choices=("qary", "bits"), default="qary")
        p.add_argument(
            "--budget", type=int, help=f"evaluation budget (env {BUDGET_ENV_VAR})"
        )
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--rng-seed", type=int, dest="rng_seed")
        p.set_defaults(func=func)

    pe = sub.add_parser("entropy", help="Renyi entropy of an explicit pmf")
    pe.add_argument("--probs", required=True, help="comma-separated probabilities")
    pe.add_argument("--alpha", required=True)
    pe.add_argument("--q", type=int, default=2)
    pe.add_argument("--units", choices=("qary", "bits"), default="qary")
    pe.set_defaults(func=_cmd_entropy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, BudgetExceededError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
