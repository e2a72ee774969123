"""Command-line surface.

Every subcommand emits one JSON line per result (JSONL) to stdout or
--out.  Exit codes: 0 success, 1 domain/capacity error or failed
verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import binmat, estimator, moments, records, sampling, series
from .errors import SumcoverError
from .groups import parse_group
from .sampling import SampleModel


def _add_common(sub, group=False, seed=False, trials=False, model=False,
                confidence=False, threads=False):
    if group:
        sub.add_argument("--group", required=True,
                         help="comma-separated cyclic factors, e.g. '101' or '2,2,2'")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    if trials:
        sub.add_argument("--trials", type=int, default=10000)
    if model:
        sub.add_argument("--model", choices=["subset", "iid"], default="subset")
    if confidence:
        sub.add_argument("--confidence", type=float, default=0.95)
    if threads:
        sub.add_argument("--threads", default="1",
                         help="worker count, or 'auto'")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=["json", "csv"], default="json")


def _threads(value) -> int:
    if value == "auto":
        import os

        return os.cpu_count() or 1
    return int(value)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumcover",
        description="Numerical laboratory for random subset-sum coverage "
        "of finite abelian groups",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("cover-prob", help="Monte Carlo cover probability")
    _add_common(s, group=True, seed=True, trials=True, model=True,
                confidence=True, threads=True)
    s.add_argument("--k", type=int, required=True)

    s = subs.add_parser("cover-exact", help="exact cover probability")
    _add_common(s, group=True, model=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-enum", type=int, default=10**8)

    s = subs.add_parser("estimate-f", help="empirical threshold f-hat")
    _add_common(s, group=True, seed=True, trials=True, confidence=True,
                threads=True)
    s.add_argument("--rule", choices=estimator.DECISION_RULES, default="point")

    s = subs.add_parser("scan", help="f-hat and decay scan over primes")
    _add_common(s, seed=True, trials=True, confidence=True, threads=True)
    s.add_argument("--primes", required=True, help="comma-separated primes")
    s.add_argument("--c-grid", default="", help="comma-separated c values")
    s.add_argument("--rule", choices=estimator.DECISION_RULES, default="point")

    s = subs.add_parser("miss-dist", help="pooled X_x distribution vs Poisson")
    _add_common(s, group=True, seed=True, trials=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, choices=[1, 2], default=1)

    s = subs.add_parser("moments", help="exact factorial moments of X_B")
    _add_common(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--b", required=True, help="comma-separated targets, e.g. '1' or '1,2'")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--method", choices=["enum", "rank", "both"], default="both")
    s.add_argument("--max-enum", type=int, default=10**8)

    s = subs.add_parser("census", help="rank census of subset tuples")
    _add_common(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, choices=[1, 2], default=1)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--max-enum", type=int, default=10**8)

    s = subs.add_parser("bonferroni", help="alternating partial sums for P(Z=0)")
    _add_common(s)
    s.add_argument("--r-trunc", type=int, required=True)
    s.add_argument("--poisson-lambda", type=float, default=None,
                   help="use Poisson moments lambda^r instead of exact ones")
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--b", default="1")

    s = subs.add_parser("predict", help="k-choice and Poisson miss prediction")
    _add_common(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--m", type=int, choices=[1, 2], default=1)

    s = subs.add_parser("verify", help="exhaustive lemma verifiers")
    _add_common(s)
    s.add_argument("--suite", choices=["lemmas", "rank", "support", "34"],
                   default="lemmas")
    s.add_argument("--rmax", type=int, default=4)
    s.add_argument("--kmax", type=int, default=4)
    s.add_argument("--primes", default="2,3,5,7,11,13")

    s = subs.add_parser("coupling", help="exact subset-vs-iid coupling gap")
    _add_common(s, group=True)
    s.add_argument("--k", type=int, required=True)

    s = subs.add_parser("export", help="JSONL to CSV")
    s.add_argument("--in", dest="infile", default="-",
                   help="input JSONL file, '-' for stdin")
    s.add_argument("--columns", required=True,
                   help="comma-separated (dotted) column names")
    s.add_argument("--out", default=None)

    return parser


# ---------------------------------------------------------------------------
# handlers: each returns (params, list of result payloads)


def _run_cover_prob(args):
    g = parse_group(args.group)
    rec = estimator.cover_prob_mc(
        g, args.k, SampleModel(args.model), args.trials, args.seed,
        args.confidence, _threads(args.threads),
    )
    return [rec]


def _run_cover_exact(args):
    g = parse_group(args.group)
    p = estimator.cover_prob_exact(
        g, args.k, SampleModel(args.model),
        max_subsets=min(args.max_enum, 10**7), max_tuples=args.max_enum,
    )
    return [{"group": g, "k": args.k, "model": args.model, "probability": p}]


def _run_estimate_f(args):
    g = parse_group(args.group)
    res = estimator.f_hat(
        g, args.trials, args.seed, args.confidence, args.rule,
        _threads(args.threads),
    )
    return [res]


def _run_scan(args):
    rows = estimator.scan_second_order(
        _parse_int_list(args.primes), _parse_float_list(args.c_grid),
        args.trials, args.seed, args.confidence, args.rule,
        _threads(args.threads),
    )
    return rows


def _run_miss_dist(args):
    g = parse_group(args.group)
    res = estimator.miss_distribution(g, args.k, args.trials, args.seed, args.m)
    return [res]


def _run_moments(args):
    b = _parse_int_list(args.b)
    out = {"p": args.p, "k": args.k, "b": b, "r": args.r}
    if args.method in ("enum", "both"):
        out["value_enum"] = moments.factorial_moment_enum(
            args.p, args.k, b, args.r, args.max_enum
        )
    if args.method in ("rank", "both"):
        report = moments.factorial_moment_rank(
            args.p, args.k, b, args.r, args.max_enum, args.max_enum
        )
        out["value_rank"] = report.value_rank
        out["n_rd"] = report.n_rd
        out["poisson_ref"] = report.poisson_ref
        out["rel_error"] = report.rel_error
    return [out]


def _run_census(args):
    return [moments.tuple_census(args.p, args.k, args.m, args.r, args.max_enum)]


def _run_bonferroni(args):
    if args.poisson_lambda is not None:
        from fractions import Fraction

        lam = Fraction(args.poisson_lambda).limit_denominator(10**9)
        ms = [lam**r for r in range(args.r_trunc + 2)]
        source = {"moments": "poisson", "lambda": float(lam)}
    else:
        if args.p is None or args.k is None:
            raise SumcoverError(
                "bonferroni needs either --poisson-lambda or --p/--k"
            )
        b = _parse_int_list(args.b)
        ms = [
            moments.factorial_moment_enum(args.p, args.k, b, r)
            if r else 1
            for r in range(args.r_trunc + 2)
        ]
        source = {"moments": "enumeration", "p": args.p, "k": args.k, "b": b}
    part = series.bonferroni_partial(ms, args.r_trunc)
    return [{"source": source, "r_trunc": args.r_trunc,
             "estimate": part.estimate, "remainder_bound": part.remainder_bound}]


def _run_predict(args):
    kc = series.choose_k(args.p, args.c)
    plan = series.truncation_plan(kc)
    return [{
        "k_choice": kc,
        "truncation": plan,
        "miss_prediction": series.poisson_miss_prediction(kc, args.m),
    }]


def _run_verify(args):
    primes = _parse_int_list(args.primes)
    reports = {}
    if args.suite in ("lemmas", "rank"):
        reports["rank_stability"] = binmat.verify_rank_stability(
            args.rmax, args.kmax, primes
        )
    if args.suite in ("lemmas", "support"):
        reports["min_support"] = binmat.verify_min_support(args.rmax, args.kmax)
    if args.suite in ("lemmas", "34"):
        reports["lattice_34"] = binmat.verify_34(args.rmax, args.kmax)
    failed = any(rep["violations"] for rep in reports.values())
    reports["ok"] = not failed
    return [reports]


def _run_coupling(args):
    g = parse_group(args.group)
    return [sampling.coupling_gap_exact(g, args.k)]


HANDLERS = {
    "cover-prob": _run_cover_prob,
    "cover-exact": _run_cover_exact,
    "estimate-f": _run_estimate_f,
    "scan": _run_scan,
    "miss-dist": _run_miss_dist,
    "moments": _run_moments,
    "census": _run_census,
    "bonferroni": _run_bonferroni,
    "predict": _run_predict,
    "verify": _run_verify,
    "coupling": _run_coupling,
}


def _emit(args, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_export(args) -> int:
    if args.infile == "-":
        raw = sys.stdin.read()
    else:
        with open(args.infile) as fh:
            raw = fh.read()
    recs = [json.loads(line) for line in raw.splitlines() if line.strip()]
    csv_text = records.export_csv(recs, args.columns.split(","))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "export":
        try:
            return _run_export(args)
        except (SumcoverError, OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    handler = HANDLERS[args.command]
    started = records.now_iso()
    t0 = time.perf_counter()
    try:
        results = handler(args)
    except (SumcoverError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - t0
    params = {
        key: val
        for key, val in vars(args).items()
        if key not in ("command", "out", "format") and val is not None
    }
    lines = []
    recs = []
    for res in results:
        rec = records.experiment_record(args.command, params, res, started, wall)
        recs.append(rec)
        lines.append(json.dumps(rec, sort_keys=True))
    if args.format == "csv":
        flat = records.flatten(recs[0])
        cols = [key for key, val in flat.items()
                if not isinstance(val, (list, dict))]
        _emit(args, records.export_csv(recs, cols).splitlines())
    else:
        _emit(args, lines)
    if args.command == "verify" and not results[0]["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
