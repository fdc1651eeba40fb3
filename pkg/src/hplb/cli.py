"""Command-line interface.

Subcommands: estimate, simulate, level, powergrid, scan, pairwise.
Exit codes: 0 success, 2 validation or usage error, 3 internal error.
Option precedence: command-line flags > config file (flat key=value lines
via --config) > built-in defaults.  Every command is deterministic given
--seed; HPLB_THREADS only caps worker counts and never changes results.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as hio
from .bounding import BoundSpec
from .errors import DatasetError, ParameterError
from .estimators import lambda_adapt, lambda_bayes, lambda_c
from .experiments import (
    ExampleSpec,
    gen_example,
    pairwise_matrix,
    run_level_study,
    run_power_grid,
    split_scan,
)
from .streams import RngStream

_DEFAULTS = {
    "alpha": 0.05,
    "band": "simulated",
    "sims": 1000,
    "seed": 0,
    "format": "csv",
    "epsilon": 1.0,
    "reps": 100,
    "pi": 0.5,
}


def _load_config(path):
    cfg = {}
    if path is None:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise DatasetError(f"{path}: config lines must be key=value, got {line!r}")
                key, value = line.split("=", 1)
                cfg[key.strip()] = value.strip()
    except OSError as exc:
        raise DatasetError(f"cannot read config {path}: {exc}") from exc
    return cfg


def _opt(args, cfg, name, cast=str):
    """flags > config file > defaults"""
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in cfg:
        return cast(cfg[name])
    return _DEFAULTS.get(name)


def _bound_spec(args, cfg) -> BoundSpec:
    return BoundSpec(
        alpha=_opt(args, cfg, "alpha", float),
        band_kind=_opt(args, cfg, "band", str),
        sims=_opt(args, cfg, "sims", int),
        seed=_opt(args, cfg, "seed", int),
    )


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _build_parser():
    top = argparse.ArgumentParser(prog="hplb", description=__doc__)
    top.add_argument("--config", help="flat key=value config file")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--alpha", type=float)
        p.add_argument("--band", choices=["analytic", "simulated"])
        p.add_argument("--sims", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("estimate", help="bound TV from a two-sample score file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["c", "bayes", "adapt"], required=True)
    common(p)

    p = sub.add_parser("simulate", help="generate a scored dataset from a model family")
    p.add_argument("--example", required=True, choices=["0", "1", "2", "toy"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--pi", type=float)
    common(p)

    p = sub.add_parser("level", help="Monte-Carlo exceedance frequency of an estimator")
    p.add_argument("--example", required=True, choices=["0", "1", "2", "toy"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--method", choices=["c", "bayes", "adapt", "oracle_t"], required=True)
    p.add_argument("--reps", type=int)
    common(p)

    p = sub.add_parser("powergrid", help="detection frequencies over a (gamma, N) grid")
    p.add_argument("--example", required=True, choices=["1", "2"])
    p.add_argument("--method", choices=["c", "bayes", "adapt"], required=True)
    p.add_argument("--gammas", required=True, help="comma-separated, e.g. -0.2,-0.3")
    p.add_argument("--ns", required=True, help="comma-separated, e.g. 500,1000")
    p.add_argument("--reps", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--c", type=float)
    common(p)

    p = sub.add_parser("scan", help="adaptive bounds over split points of an ordered file")
    p.add_argument("--input", required=True)
    p.add_argument("--splits", required=True, help="comma-separated split points")
    common(p)

    p = sub.add_parser("pairwise", help="pairwise TV bound matrix from multiclass scores")
    p.add_argument("--input", required=True)
    common(p)

    return top


def _cmd_estimate(args, cfg):
    spec = _bound_spec(args, cfg)
    data = hio.parse_two_sample(args.input, tie_seed=spec.seed)
    print(f"parsed {data.total} rows: m={data.m}, n={data.n}", file=sys.stderr)
    if args.method == "adapt":
        result = lambda_adapt(data, spec)
    elif args.method == "bayes":
        result = lambda_bayes(data, spec.alpha)
    else:
        result = lambda_c(data, spec.alpha)
    hio.emit_result(result, _opt(args, cfg, "format"), _opt(args, cfg, "output"))
    return 0


def _example_spec(args, cfg):
    example = args.example if args.example == "toy" else int(args.example)
    c = _opt(args, cfg, "c", float)
    if c is None:
        c = 2.0 if example == 2 else 1.0
    return ExampleSpec(
        example_id=example,
        n_total=args.n,
        gamma=args.gamma,
        c=c,
        pi=_opt(args, cfg, "pi", float),
    )


def _cmd_simulate(args, cfg):
    spec = _example_spec(args, cfg)
    seed = _opt(args, cfg, "seed", int)
    data, lam = gen_example(spec, RngStream(seed, 0, ("simulate",)))
    out = _opt(args, cfg, "output")
    lines = ["score,label\n"]
    lines += [f"{float(s)!r},{int(l)}\n" for s, l in zip(data.scores, data.labels)]
    text = "".join(lines)
    if out is None:
        print(text, end="")
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    meta = {
        "example": args.example,
        "n": args.n,
        "gamma": args.gamma,
        "c": spec.c,
        "pi": spec.pi,
        "seed": seed,
        "m": data.m,
        "n_class1": data.n,
        "true_lambda": lam,
    }
    print(json.dumps(meta, sort_keys=True))
    return 0


def _cmd_level(args, cfg):
    spec = _example_spec(args, cfg)
    bound = _bound_spec(args, cfg)
    reps = _opt(args, cfg, "reps", int)
    freq = run_level_study(
        spec, args.method, bound.alpha, reps, RngStream(bound.seed, 0, ("level",)), bound
    )
    payload = {"method": args.method, "alpha": bound.alpha, "reps": reps, "exceedance": freq}
    out = _opt(args, cfg, "output")
    if _opt(args, cfg, "format") == "json":
        text = json.dumps(payload, sort_keys=True) + "\n"
    else:
        text = "method,alpha,reps,exceedance\n" + f"{args.method},{bound.alpha:.6f},{reps},{freq:.6f}\n"
    if out is None:
        print(text, end="")
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def _cmd_powergrid(args, cfg):
    bound = _bound_spec(args, cfg)
    result = run_power_grid(
        example=int(args.example),
        method=args.method,
        gammas=_float_list(args.gammas),
        ns=_int_list(args.ns),
        reps=_opt(args, cfg, "reps", int),
        epsilon=_opt(args, cfg, "epsilon", float),
        alpha=bound.alpha,
        rng=RngStream(bound.seed, 0, ("powergrid",)),
        bound=bound,
        c=_opt(args, cfg, "c", float),
    )
    hio.emit_powergrid(result, _opt(args, cfg, "format"), _opt(args, cfg, "output"))
    return 0


def _cmd_scan(args, cfg):
    bound = _bound_spec(args, cfg)
    t, scores = hio.parse_ordered(args.input)
    result = split_scan(t, scores, _float_list(args.splits), bound, tie_seed=bound.seed)
    for warning in result.skipped:
        print(f"warning: {warning}", file=sys.stderr)
    hio.emit_scan(result, _opt(args, cfg, "format"), _opt(args, cfg, "output"))
    return 0


def _cmd_pairwise(args, cfg):
    bound = _bound_spec(args, cfg)
    labels, probs = hio.parse_multiclass(args.input)
    matrix = pairwise_matrix(probs, labels, bound)
    hio.emit_pairwise(matrix, _opt(args, cfg, "format"), _opt(args, cfg, "output"))
    return 0


_COMMANDS = {
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "level": _cmd_level,
    "powergrid": _cmd_powergrid,
    "scan": _cmd_scan,
    "pairwise": _cmd_pairwise,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except (DatasetError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
