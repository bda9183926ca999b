"""Command line entry point: ``stabnet {verify,rt,ghz,fourpartite,spinmodel,moments}``."""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import experiments, spin, verify


def _region_arg(text):
    name, _, members = text.partition("=")
    if not name or not members:
        raise argparse.ArgumentTypeError("expected NAME=V1,V2,...")
    return name, [m for m in members.split(",") if m]


def _inject_fault(kind):
    """Test hook: corrupt one internal table so ``verify`` must fail."""
    if kind == "distance-table":
        original = spin.distance_table

        def mutated(sigma):
            D = original(sigma).copy()
            D[0, 1] += 1
            return D

        spin.distance_table = mutated
    else:
        raise SystemExit(f"unknown fault {kind!r}")


def build_parser():
    ap = argparse.ArgumentParser(prog="stabnet", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--quiet", action="store_true")
    sub.add_parser("moments", parents=[common], help="third-moment and commutant reports")
    for name, hlp in [("rt", "entropies against minimal cuts"),
                      ("ghz", "GHZ content of random networks"),
                      ("fourpartite", "four-party entropic accounting"),
                      ("spinmodel", "spin-model moment prediction vs sampling")]:
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--graph", default=None,
                       help="graph JSON file or builtin: " + ", ".join(experiments.BUILTIN_GRAPHS))
        s.add_argument("--trials", type=int, default=1000)
        s.add_argument("--p", type=int, default=None)
        s.add_argument("--N", type=int, default=None)
        s.add_argument("--region", type=_region_arg, action="append", default=[],
                       metavar="NAME=V1,V2", help="boundary region (repeatable)")
    return ap


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.inject_fault:
        _inject_fault(args.inject_fault)

    if args.command == "verify":
        t0 = time.perf_counter()
        log = None if args.quiet else (lambda s: print(s, file=sys.stderr))
        results = verify.run_checks(args.seed, log)
        failed = [r for r in results if not r[1]]
        doc = {"config": {"command": "verify", "seed": args.seed},
               "rows": [{"check": n, "passed": ok, "detail": d} for n, ok, d in results],
               "summary": {"passed": not failed, "failed": len(failed),
                           "first_failure": failed[0][0] if failed else None},
               "schema": experiments.SCHEMA}
        if args.out:
            _emit(experiments.to_json(doc) if args.format == "json" else experiments.to_csv(doc), args.out)
        print(f"{len(results) - len(failed)}/{len(results)} checks passed "
              f"in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        if failed:
            name, _, detail = failed[0]
            print(f"first failing invariant: {name}: {detail}", file=sys.stderr)
            return 1
        return 0

    if args.command == "moments":
        cfg = experiments.RunConfig("moments", seed=args.seed, trials=0,
                                    out=args.out, format=args.format, workers=args.workers)
    else:
        cfg = experiments.RunConfig(args.command, graph=args.graph, regions=dict(args.region),
                                    seed=args.seed, trials=args.trials, p=args.p, N=args.N,
                                    out=args.out, format=args.format, workers=args.workers)
    try:
        doc = experiments.run(cfg)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = experiments.to_json(doc) if args.format == "json" else experiments.to_csv(doc)
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
