"""``sesched`` command line: generate, solve, bench, verify.

Exit codes: 0 success, 2 usage, 3 load, 4 I/O, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import kernels
from .bench import (CsvAppender, DEFAULT_KS, DEFAULT_METHODS, interval_sweep,
                    interval_sweep_values, k_sweep, verify)
from .errors import InputError, LoadError, SizeError
from .instancegen import GenParams, generate
from .io import dump_instance, load_instance, load_tag_corpus
from .solvers import METHODS, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LOAD = 3
EXIT_IO = 4
EXIT_VERIFY = 5


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _int_list(text: str) -> list[int]:
    values = [_positive_int(x) for x in text.split(",") if x.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _method(text: str) -> str:
    name = text.upper()
    if name not in METHODS:
        raise argparse.ArgumentTypeError(
            f"invalid method {text!r} (choose from {', '.join(m.lower() for m in METHODS)})")
    return name


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sesched", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic (or tag-corpus) instance as JSON")
    g.add_argument("--k", type=_positive_int, default=100,
                   help="target number of scheduled events (sizes default to 2k events, 3k/2 intervals)")
    g.add_argument("--intervals", type=_positive_int)
    g.add_argument("--events", type=_positive_int)
    g.add_argument("--users", type=_positive_int, default=5000)
    g.add_argument("--locations", type=_positive_int, default=25)
    g.add_argument("--theta", type=float, default=20.0)
    g.add_argument("--xi-min", type=float, default=1.0)
    g.add_argument("--xi-max", type=float, default=20.0 / 3.0)
    g.add_argument("--competing-mean", type=float, default=8.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--from-tags", metavar="CORPUS",
                   help="build from a tag-corpus JSON file instead of generating")
    g.add_argument("-o", "--output", required=True)

    s = sub.add_parser("solve", help="solve an instance and print the report as JSON")
    s.add_argument("instance")
    s.add_argument("--method", type=_method, default="GRD")
    s.add_argument("--k", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0, help="RAND seed")
    s.add_argument("-o", "--output", help="also write the report here")

    b = sub.add_parser("bench", help="utility/time sweeps over k or |T|, written as CSV")
    b.add_argument("--sweep", choices=("k", "intervals"), default="k")
    b.add_argument("--ks", type=_int_list, default=list(DEFAULT_KS),
                   help="comma-separated k values for the k sweep")
    b.add_argument("--k", type=_positive_int, default=50, help="fixed k for the interval sweep")
    b.add_argument("--interval-values", type=_int_list,
                   help="comma-separated |T| values (default k/5, k/2, k, 3k/2, 2k, 3k)")
    b.add_argument("--seeds", type=_positive_int, default=5, help="instances per sweep point")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--methods", type=lambda t: [_method(x) for x in t.split(",")],
                   default=list(DEFAULT_METHODS))
    b.add_argument("--users", type=_positive_int, default=5000)
    b.add_argument("-o", "--output", required=True)

    v = sub.add_parser("verify", help="check GRD/TOP/RAND against the exact solver")
    v.add_argument("--count", type=_positive_int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-events", type=_positive_int, default=6)
    v.add_argument("--max-intervals", type=_positive_int, default=3)
    v.add_argument("--max-users", type=_positive_int, default=5)
    v.add_argument("--max-k", type=_positive_int, default=3)
    v.add_argument("--max-competing", type=int, default=2)
    v.add_argument("--rand-seeds", type=_positive_int, default=20)
    v.add_argument("--tight", action="store_true",
                   help="few locations and small budgets so constraints bind often")
    return p


def _cmd_generate(args) -> int:
    if args.from_tags:
        instance = load_tag_corpus(args.from_tags)
    else:
        params = GenParams(k=args.k, num_intervals=args.intervals, num_events=args.events,
                           num_users=args.users, num_locations=args.locations, theta=args.theta,
                           xi_range=(args.xi_min, args.xi_max),
                           competing_mean=args.competing_mean, seed=args.seed)
        instance = generate(params)
    dump_instance(instance, args.output)
    s = instance.summary()
    print(f"events={s['events']} intervals={s['intervals']} users={s['users']} "
          f"competing={s['competing']} -> {args.output}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    kernels.warmup()
    report = solve(instance, args.method, args.k, seed=args.seed)
    text = json.dumps(report.to_dict(), indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    seeds = range(args.seed, args.seed + args.seeds)
    base = GenParams(num_users=args.users)
    if args.sweep == "k":
        rows = k_sweep(args.ks, seeds, args.methods, base)
    else:
        values = args.interval_values or interval_sweep_values(args.k)
        rows = interval_sweep(args.k, values, seeds, args.methods, base)
    n = 0
    with CsvAppender(args.output) as out:
        for row in rows:
            out.append(row)
            n += 1
    print(f"{n} rows -> {args.output}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    records = verify(args.count, args.seed, max_events=args.max_events,
                     max_intervals=args.max_intervals, max_users=args.max_users,
                     max_k=args.max_k, max_competing=args.max_competing,
                     rand_seeds=args.rand_seeds, tight=args.tight)
    failed = [(i, r) for i, r in enumerate(records) if r.failures]
    ratios = np.array([r.ratio for r in records])
    print(f"instances={len(records)} failures={len(failed)} "
          f"grd/exact min={ratios.min():.6f} mean={ratios.mean():.6f}")
    print(f"grd<top={sum(r.grd < r.top - 1e-9 for r in records)} "
          f"grd<mean(rand)={sum(r.grd < r.rand_mean - 1e-9 for r in records)}")
    for i, r in failed:
        for msg in r.failures:
            print(f"instance {i} (k={r.k}): {msg}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    handler = {"generate": _cmd_generate, "solve": _cmd_solve,
               "bench": _cmd_bench, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except LoadError as exc:
        print(f"sesched: load error: {exc}", file=sys.stderr)
        return EXIT_LOAD
    except (InputError, SizeError) as exc:
        print(f"sesched: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sesched: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
