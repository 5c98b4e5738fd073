"""``permtab`` command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import exact
from .clt import SOURCES, ExperimentConfig, run_mc
from .distribution import DistributionTable, histogram
from .growth import SamplerConfig, enumerate_tableaux, joint_distribution_dp, sample_uniform
from .rng import DEFAULT_SEED, make_rng
from .tableau import Tableau, encode
from .verify import SUITE_LIMITS, SUITES, run_suite

STAT_NAMES = {
    "unrestricted": "U",
    "first-row": "F",
    "rows": "R",
    "columns": "C",
    "superfluous": "S",
    "total-ones": "Y",
}
CLI_ENUMERATE_MAX = 9
EXHAUSTIVE_DIST_MAX = 9


class UsageError(Exception):
    pass


def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def tableau_json(t: Tableau) -> dict:
    return {
        "shape": list(t.shape),
        "rows": ["".join(map(str, row)) for row in t.rows],
        "stats": t.stats()._asdict(),
    }


def _check_n(n: int, cap: int | None = None) -> None:
    if n < 1:
        raise UsageError(f"--n must be >= 1, got {n}")
    if cap is not None and n > cap:
        raise UsageError(f"--n must be <= {cap} for this command, got {n}")


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("PERMTAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PERMTAB_THREADS must be an integer, got {env!r}") from None
    return 1


# commands --------------------------------------------------------------------

def cmd_enumerate(args) -> tuple[str, int]:
    _check_n(args.n, CLI_ENUMERATE_MAX)
    if args.format == "json":
        records = [tableau_json(t) for t in enumerate_tableaux(args.n)]
        return json.dumps({"n": args.n, "tableaux": records, "count": len(records)}) + "\n", 0
    parts, count = [], 0
    for t in enumerate_tableaux(args.n):
        parts.append(encode(t))
        count += 1
    parts.append(f"count: {count}\n")
    return "".join(parts), 0


def exhaustive_table(n: int, stat: str) -> DistributionTable:
    field = {"U": "unrestricted", "F": "first_row_ones", "R": "rows", "C": "columns", "S": "superfluous",
             "Y": "total_ones"}[stat]
    return histogram(n, (getattr(t.stats(), field) for t in enumerate_tableaux(n)))


def distribution(n: int, stat: str, method: str) -> DistributionTable:
    if method == "exhaustive":
        _check_n(n, EXHAUSTIVE_DIST_MAX)
        return exhaustive_table(n, stat)
    if stat == "Y":
        raise UsageError("total-ones is only available with --method exhaustive")
    if method == "pgf":
        _check_n(n, exact.PGF_MAX_N)
        return exact.distribution_from_pgf(exact.pgf(stat, n), n)
    _check_n(n)
    if stat == "C":
        rows = joint_distribution_dp(n, ("R",)).marginal("R")
        return DistributionTable(n, {n - r: c for r, c in rows.items()})
    return DistributionTable(n, joint_distribution_dp(n, (stat,)).marginal(stat))


def cmd_dist(args) -> tuple[str, int]:
    stat = STAT_NAMES[args.stat]
    method = args.method or ("exhaustive" if stat == "Y" else "pgf")
    table = distribution(args.n, stat, method)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "count", "probability"])
        for value, count in table.counts.items():
            writer.writerow([value, count, rational(Fraction(count, table.total))])
        return buf.getvalue(), 0
    body = {"n": args.n, "stat": args.stat, "method": method, **table.to_json()}
    return json.dumps(body) + "\n", 0


def cmd_moments(args) -> tuple[str, int]:
    _check_n(args.n, exact.PGF_MAX_N)
    if args.n < 2:
        raise UsageError("moments need n >= 2")
    values = exact.moment_formulas(args.n).as_dict()
    values.pop("n")
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["quantity", "value"])
        for key, v in values.items():
            writer.writerow([key, rational(v)])
        return buf.getvalue(), 0
    return json.dumps({"n": args.n, **{k: rational(v) for k, v in values.items()}}) + "\n", 0


def cmd_sample(args) -> tuple[str, int]:
    _check_n(args.n)
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    rng = make_rng(args.seed)
    cfg = SamplerConfig(args.n, args.seed)
    draws = [sample_uniform(cfg, rng) for _ in range(args.count)]
    if args.format == "json":
        body = {"n": args.n, "seed": args.seed, "tableaux": [tableau_json(t) for t in draws]}
        return json.dumps(body) + "\n", 0
    return "".join(encode(t) for t in draws), 0


def cmd_clt(args) -> tuple[str, int]:
    stat = "pattern31_2" if args.stat == "pattern31_2" else STAT_NAMES[args.stat]
    try:
        cfg = ExperimentConfig(
            statistic=stat,
            n=args.n,
            trials=args.trials,
            source=args.source,
            seed=args.seed,
            normalization=args.normalization,
            threads=_threads(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_mc(cfg, keep_samples=args.format == "csv")
    if args.format == "csv":
        return report.samples_csv(), 0
    return json.dumps(report.to_json()) + "\n", 0


def cmd_verify(args) -> tuple[str, int]:
    try:
        checks = list(run_suite(args.suite, args.nmax))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = []
    status = 0
    for check in checks:
        if check.passed:
            lines.append(f"PASS {check.name}")
        else:
            status = 1
            lines.append(f"FAIL {check.name}: {check.detail}")
            nmax = args.nmax if args.nmax is not None else SUITE_LIMITS[args.suite][0]
            lines.append(f"reproduce: permtab verify --suite {args.suite} --nmax {nmax}")
    lines.append(f"{args.suite}: {'ok' if status == 0 else 'FAILED'} ({len(checks)} checks)")
    return "\n".join(lines) + "\n", status


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permtab", description="Exact and Monte Carlo statistics of permutation tableaux.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list every tableau of length n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dist", parents=[common], help="exact distribution of a statistic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stat", choices=tuple(STAT_NAMES), required=True)
    p.add_argument("--method", choices=("pgf", "dp", "exhaustive"))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("moments", parents=[common], help="exact means, variances and covariances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sample", parents=[common], help="uniform random tableaux")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", "--trials", dest="count", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("clt", parents=[common], help="Monte Carlo normal approximation check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stat", choices=tuple(STAT_NAMES) + ("pattern31_2",), required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int)
    p.add_argument("--source", choices=SOURCES, default="tableau")
    p.add_argument("--normalization", choices=("exact", "asymptotic"), default="exact")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json summary, or csv of the raw and normalized samples")
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", choices=tuple(SUITES), required=True)
    p.add_argument("--nmax", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = args.func(args)
    except UsageError as exc:
        print(f"permtab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
