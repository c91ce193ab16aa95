"""Command-line front end: ``spnet {simulate,exact,oracle,limit,verify}``.

Rationals are written as "num/den" strings.  JSON output carries the package
version and an echo of the parsed flags.  Exit status: 0 success, 1 failed
verification, 2 usage error.

CSV layouts (fixed column order):

* exact pmf:        m,value            (joint pmf: m,l,value)
* exact scalar:     quantity,value
* oracle:           stat,value,prob
* simulate:         stat,value,count,frequency
* limit moments:    r,moment,coefficient
* limit spectrum:   index,lambda_re,lambda_im,beta_re,beta_im
* limit density:    x,density

JSON output echoes the parsed flags under "arguments"; objects that know their
model configuration add it under "config".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from ._numeric import as_probability, fmt_rational
from .network import Model, ModelConfig

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def _config(args) -> ModelConfig:
    if args.model is None:
        raise UsageError("--model is required")
    model = Model(args.model)
    p = as_probability(args.p) if args.p is not None else None
    try:
        return ModelConfig(model, p=p, b=args.b)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "output", "command")}


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _value(v):
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        return fmt_rational(v)
    return float(v)


# --- subcommands ------------------------------------------------------------


PMF_QUANTITIES = ("degree-pmf", "degree-pmf-dp", "leftpath-pmf", "joint-pmf")
SCALAR_QUANTITIES = (
    "factorial-moment",
    "expected-paths",
    "expected-paths-closed",
    "expected-pathlength",
    "expected-sinkdegree",
    "expected-sourcedegree",
    "limit-pmf",
    "limit-mass",
)


def cmd_exact(args):
    from . import exact as E

    cfg = _config(args)
    q = args.quantity
    n = args.n
    if n is None and q not in ("limit-pmf", "limit-mass"):
        raise UsageError("--n is required")
    m = cfg.model
    if q in PMF_QUANTITIES:
        if m is not Model.BERNOULLI:
            raise UsageError(f"{q} is available for the bernoulli model")
        fn = {
            "degree-pmf": E.bernoulli_degree_pmf,
            "degree-pmf-dp": E.bernoulli_degree_pmf_dp,
            "leftpath-pmf": E.bernoulli_leftpath_pmf,
            "joint-pmf": E.bernoulli_joint_pmf,
        }[q]
        table = fn(n, cfg.p)
        if args.out == "csv":
            return table.to_csv()
        payload = table.to_dict()
        return payload
    if q == "factorial-moment":
        value = E.bernoulli_degree_factorial_moment(n, args.r, cfg.p)
    elif q == "expected-paths":
        if m is Model.BERNOULLI:
            value = E.bernoulli_expected_paths(n, cfg.p)
        elif m is Model.BINARY:
            value = E.binary_expected_paths(n, exact=True) if n <= 400 else None
            if value is None:
                mant, log_scale = E.binary_expected_paths(n)
                return _scalar(args, q, {"mantissa": mant, "log_scale": log_scale})
        else:
            raise UsageError("expected-paths: bernoulli or binary model")
    elif q == "expected-paths-closed":
        if m is not Model.BERNOULLI:
            raise UsageError("expected-paths-closed: bernoulli model")
        value = E.bernoulli_expected_paths_closed(n, cfg.p)
    elif q == "expected-pathlength":
        if m is Model.BINARY:
            value = E.binary_expected_pathlength(n)
        elif m is Model.BARY:
            value = E.bary_expected_pathlength(n, cfg.b)
        else:
            raise UsageError("expected-pathlength: binary or bary model")
    elif q == "expected-sinkdegree":
        if m is not Model.BINARY:
            raise UsageError("expected-sinkdegree: binary model")
        value = E.binary_expected_sinkdegree(n)
    elif q == "expected-sourcedegree":
        if m is Model.PREFERENTIAL:
            value = E.preferential_expected_sourcedegree(n, cfg.p)
        elif m is Model.SATURATION:
            value = E.saturation_expected_sourcedegree(n, cfg.p)
        elif m is Model.BERNOULLI:
            value = E.bernoulli_degree_factorial_moment(n, 1, cfg.p)
        else:
            raise UsageError("expected-sourcedegree: bernoulli, preferential or saturation")
    elif q == "limit-pmf":
        if m is not Model.SATURATION:
            raise UsageError("limit-pmf: saturation model")
        value = E.saturation_limit_pmf(args.m, cfg.p)
    elif q == "limit-mass":
        if m is not Model.SATURATION:
            raise UsageError("limit-mass: saturation model")
        value = E.saturation_limit_total_mass(cfg.p)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown quantity {q}")
    return _scalar(args, q, _value(value))


def _scalar(args, quantity, value):
    if args.out == "csv":
        if isinstance(value, dict):
            return _csv([[f"{quantity}.{k}", v] for k, v in value.items()], ["quantity", "value"])
        return _csv([[quantity, value]], ["quantity", "value"])
    return {"quantity": quantity, "value": value}


def cmd_oracle(args):
    from . import oracle as O

    cfg = _config(args)
    if args.n is None:
        raise UsageError("--n is required")
    try:
        if args.check:
            checks = O.verify_formulas(cfg, args.n)
            payload = {"checks": [c.to_dict() for c in checks]}
            if args.out == "csv":
                rows = [[c.name, c.passed, c.worst_deviation] for c in checks]
                return _csv(rows, ["formula", "passed", "worst_deviation"])
            return payload
        rep = O.enumerate(cfg, args.n)
    except (O.OracleBudgetError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    if args.out == "csv":
        rows = [
            [stat, v, fmt_rational(pr)] for stat in O.STAT_NAMES for v, pr in rep.pmf(stat).items()
        ]
        return _csv(rows, ["stat", "value", "prob"])
    return rep.to_dict()


def cmd_simulate(args):
    from . import montecarlo as M

    cfg = _config(args)
    if args.n is None:
        raise UsageError("--n is required")
    stats = None
    if args.stat:
        stats = [s.strip().replace("-", "_") for item in args.stat for s in item.split(",")]
    try:
        summary = M.simulate(
            cfg,
            args.n,
            args.trials,
            seed=args.seed,
            stats=stats,
            workers=args.workers,
            engine=args.engine,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"seed: {args.seed}", file=sys.stderr)
    if args.out == "csv":
        return summary.to_csv()
    payload = summary.to_dict()
    if args.law:
        payload["limit_comparison"] = M.compare_limit(summary, args.law, stats[0] if stats else None)
    return payload


LAWS = (
    "mittag-leffler",
    "ml-density",
    "binary-length",
    "binary-degree",
    "preferential-degree",
    "saturation-degree",
    "bary-spectrum",
    "bernoulli-paths-constant",
    "binary-rho",
)


def cmd_limit(args):
    from . import asymptotics as A

    law = args.law
    r_max = args.r_max
    if law == "bary-spectrum":
        if args.b is None:
            raise UsageError("--b is required")
        try:
            spec = A.bary_spectrum(args.b)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.out == "csv":
            rows = [
                [i + 1, z.real, z.imag, w.real, w.imag]
                for i, (z, w) in enumerate(zip(spec.roots, spec.betas))
            ]
            return _csv(rows, ["index", "lambda_re", "lambda_im", "beta_re", "beta_im"])
        return spec.to_dict()
    if law == "binary-rho":
        est = A.binary_paths_rho(args.n or 2000)
        payload = {
            "rho": est.rho,
            "error": est.error,
            "n_max": est.n_max,
            "series": [{"n": n, "ratio": r, "accelerated": a} for n, r, a in est.series],
        }
        if args.out == "csv":
            return _csv([[s["n"], s["ratio"], s["accelerated"]] for s in payload["series"]], ["n", "ratio", "accelerated"])
        return payload
    if law == "bernoulli-paths-constant":
        if args.p is None:
            raise UsageError("--p is required")
        value = A.bernoulli_paths_constant(as_probability(args.p))
        return _scalar(args, law, value)
    if law == "ml-density":
        if args.p is None:
            raise UsageError("--p is required")
        p = float(as_probability(args.p))
        xs = args.x or [0.25 * k for k in range(1, 41)]
        rows = [[x, A.mittag_leffler_density(x, p)] for x in xs]
        if args.out == "csv":
            return _csv(rows, ["x", "density"])
        return {"law": law, "p": p, "density": [{"x": x, "f": f} for x, f in rows]}
    if law == "mittag-leffler":
        if args.p is None:
            raise UsageError("--p is required")
        p = float(as_probability(args.p))
        values = [A.mittag_leffler_moment(r, p) for r in range(r_max + 1)]
        seq = A.MomentSequence("mittag-leffler", r_max, values, values, "r!/Gamma(rp+1)", {"p": p})
    elif law == "binary-length":
        seq = A.binary_length_limit_moments(r_max)
    elif law == "binary-degree":
        seq = A.binary_degree_limit_moments(r_max)
    elif law in ("preferential-degree", "saturation-degree"):
        if args.p is None:
            raise UsageError("--p is required")
        fn = A.preferential_limit_moments if law == "preferential-degree" else A.saturation_limit_moments
        try:
            seq = fn(r_max, as_probability(args.p))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:  # pragma: no cover
        raise UsageError(f"unknown law {law}")
    if args.out == "csv":
        rows = [[r, seq.values[r], seq.coefficients[r]] for r in range(r_max + 1)]
        return _csv(rows, ["r", "moment", "coefficient"])
    return seq.to_dict()


def cmd_verify(args):
    from . import verify as V

    if args.gate:
        results = [V.GATES[g]() for g in args.gate]
    else:
        results = V.run_suite(args.suite)
    for res in results:
        print(res.line(), file=sys.stderr)
    payload = {
        "suite": args.suite if not args.gate else "gates",
        "passed": all(r.passed for r in results),
        "gates": [r.to_dict() for r in results],
    }
    return payload, (0 if payload["passed"] else 1)


# --- parser -----------------------------------------------------------------


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--p", help="probability, 'a/b' (exact) or decimal (float)")
    p.add_argument("--b", type=int, help="out-degree cap of the b-ary model")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo summaries")
    _add_model_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--stat", action="append", help="statistic(s), comma separated")
    p.add_argument("--engine", choices=("auto", "network", "memo", "chain"), default="auto")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--law", help="also compare against this limit law")
    _add_output_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", help="closed-form tables and expectations")
    _add_model_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--quantity", choices=PMF_QUANTITIES + SCALAR_QUANTITIES, required=True)
    p.add_argument("--r", type=int, default=1, help="order of the factorial moment")
    p.add_argument("--m", type=int, default=1, help="point of the limit pmf")
    _add_output_flags(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("oracle", help="exhaustive enumeration at small n")
    _add_model_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--check", action="store_true", help="compare against the closed forms")
    _add_output_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("limit", help="limit laws, spectra and constants")
    p.add_argument("--law", choices=LAWS, required=True)
    p.add_argument("--p")
    p.add_argument("--b", type=int)
    p.add_argument("--n", type=int, help="n_max for binary-rho")
    p.add_argument("--r-max", dest="r_max", type=int, default=6)
    p.add_argument("--x", type=float, action="append", help="density abscissae")
    _add_output_flags(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("verify", help="run acceptance gates")
    p.add_argument("--suite", choices=("oracle", "exact", "asymptotics", "montecarlo", "all"), default="all")
    p.add_argument("--gate", type=int, action="append", choices=range(1, 11))
    _add_output_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"spnet {args.command}: error: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    if isinstance(result, dict):
        result = {"version": __version__, "command": args.command, "arguments": _echo(args), **result}
        text = json.dumps(result, indent=2, default=str) + "\n"
    else:
        text = result
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
