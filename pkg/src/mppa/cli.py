"""``mppa`` command line: verify suites, normal forms, Υ^q(Q), moment maps, the oracle."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import preproj, repvar, witnesses
from .ncalg import builtin, critical_pairs, quiver_loc
from .quiver import load_quiver

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _algebra(args):
    if getattr(args, "quiver", None):
        return quiver_loc(load_quiver(args.quiver).quiver)
    if not args.algebra:
        raise UsageError("one of --algebra or --quiver is required")
    name, _, param = args.algebra.partition(":")
    return builtin(name, param) if param else builtin(name)


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_verify(args) -> int:
    report = witnesses.run_suite(args.suite, truncation=args.truncation,
                                 oracle_trials=args.oracle_trials, seed=args.seed)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_nf(args) -> int:
    a = _algebra(args).parse(args.expr)
    _emit(args, str(a), {"algebra": a.pres.name, "input": args.expr, "normal_form": str(a)})
    return EXIT_OK


def cmd_build_upsilon(args) -> int:
    qf = load_quiver(args.quiver)
    dga = preproj.build_upsilon(qf.quiver, qf.q, qf.order)
    text = dga.dumps()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        for name, d in dga.differential.items():
            print(f"d({name}) = {d}")
    else:
        print(text)
    return EXIT_OK


def cmd_moment(args) -> int:
    qf = load_quiver(args.quiver)
    mm = preproj.moment_map(qf.quiver, qf.order)
    if args.vertex is not None:
        if args.vertex not in mm.mu:
            raise UsageError(f"unknown vertex {args.vertex!r}")
        chosen = [args.vertex]
    else:
        chosen = list(qf.quiver.vertices)
    bad = mm.inverse_defects()
    data = {v: {"mu": str(mm.mu[v]), "mu_inv": str(mm.mu_inv[v])} for v in chosen}
    if args.vertex is not None:
        text = str(mm.mu[args.vertex])
    else:
        text = "\n".join(f"mu_{v} = {mm.mu[v]}" for v in chosen)
    _emit(args, text, {"moment": data, "inverse_defects": bad})
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_oracle(args) -> int:
    if len(args.expr) != 2:
        raise UsageError("oracle needs exactly two --expr arguments")
    pres = _algebra(args)
    a, b = (pres.parse(x) for x in args.expr)
    dims = repvar.sample_dims(args.dims, pres.vertices) if args.dims else None
    verdict = repvar.oracle_equals(a, b, args.trials, args.seed, dims=dims)
    data = {"verdict": str(verdict), "trials": verdict.trials}
    if verdict.counterexample is not None:
        data["counterexample"] = verdict.counterexample.describe()
    text = str(verdict)
    if verdict.counterexample is not None:
        text += f"\ncounterexample: {data['counterexample']}"
    _emit(args, text, data)
    return EXIT_OK if verdict.equal else EXIT_FAIL


def cmd_critical_pairs(args) -> int:
    pres = _algebra(args)
    pairs = critical_pairs(pres, args.depth)
    rows = [{"overlap": "*".join(p.overlap), "left": str(p.left), "right": str(p.right),
             "joinable": p.joinable} for p in pairs]
    lines = [f"{'ok  ' if r['joinable'] else 'FAIL'}  {r['overlap']}: {r['left']} | {r['right']}" for r in rows]
    lines.append(f"{sum(p.joinable for p in pairs)}/{len(pairs)} critical pairs joinable")
    _emit(args, "\n".join(lines), {"algebra": pres.name, "pairs": rows})
    return EXIT_OK if all(p.joinable for p in pairs) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mppa", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(fn=fn)
        return p

    def source(p):
        p.add_argument("--algebra", help="built-in presentation, e.g. a2loc or pushout:2")
        p.add_argument("--quiver", help="quiver JSON file; uses its localized doubled path algebra")

    p = add("verify", cmd_verify, "run identity suites")
    p.add_argument("--suite", default="all", choices=witnesses.suite_names())
    p.add_argument("--truncation", type=int, default=witnesses.DEFAULT_TRUNCATION)
    p.add_argument("--oracle-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = add("nf", cmd_nf, "print a normal form")
    source(p)
    p.add_argument("--expr", required=True)

    p = add("build-upsilon", cmd_build_upsilon, "build the dg-algebra Υ^q(Q)")
    p.add_argument("--quiver", required=True)
    p.add_argument("--out")

    p = add("moment", cmd_moment, "print the multiplicative moment map")
    p.add_argument("--quiver", required=True)
    p.add_argument("--vertex")

    p = add("oracle", cmd_oracle, "compare two elements at random matrix representations")
    source(p)
    p.add_argument("--dims", help="comma separated dimension vector, e.g. 2,3")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--expr", action="append", default=[])

    p = add("critical-pairs", cmd_critical_pairs, "check local confluence of the rewrite rules")
    source(p)
    p.add_argument("--depth", type=int, default=12)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"mppa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
