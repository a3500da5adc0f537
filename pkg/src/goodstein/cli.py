"""Command-line front door.

Subcommands: ``run``, ``verify descent|preservation|majorization|goodsucc``,
``classify``, and ``ord eval|compare|fs|sqfs|F``.  All numeric I/O uses
decimal strings; output is deterministic for fixed inputs.

Exit codes: 0 success, 1 property violation, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify as classify_mod
from . import ordinal as o_
from . import process as process_mod
from .errors import BudgetExceeded, GoodsteinError, NumericBlowup, ParseError
from .hierarchy import DEFAULT_DIGIT_CAP, make, spec_from_json
from .process import DynamicalFamily, RunConfig
from .upgrade import good_successor_check

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fp:
        return json.load(fp)


def _family(path: str, digit_cap: int) -> DynamicalFamily:
    return DynamicalFamily.from_json(_load_json(path), digit_cap=digit_cap)


def _cmd_run(args) -> int:
    fam = _family(args.hierarchy, args.digit_cap)
    cfg = RunConfig(
        family=fam,
        start=int(args.start),
        max_steps=args.max_steps,
        digit_cap=args.digit_cap,
        check_level=args.check,
    )
    trace = process_mod.run(cfg)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fp:
            trace.write_jsonl(fp)
    print(f"status: {trace.status} steps: {len(trace.records) - 1} "
          f"final: {trace.records[-1].value}")
    if trace.status in ("blowup",):
        return EXIT_BUDGET
    if not trace.all_checks_pass():
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.property in ("descent", "preservation"):
        fam = _family(args.hierarchy, args.digit_cap)
        level = "descent" if args.property == "descent" else "descent+preservation"
        cfg = RunConfig(
            family=fam,
            start=int(args.start),
            max_steps=args.max_steps,
            digit_cap=args.digit_cap,
            check_level=level,
        )
        trace = process_mod.run(cfg)
        bad = [
            r.index
            for r in trace.records
            if not all(r.checks.values())
        ]
        for r in trace.records:
            tag = "ok" if all(r.checks.values()) else "VIOLATION"
            print(f"step {r.index}: {tag} {r.checks}")
        print(f"status: {trace.status}")
        if bad:
            return EXIT_VIOLATION
        return EXIT_BUDGET if trace.status == "blowup" and args.strict_budget else EXIT_OK
    if args.property == "majorization":
        spec = spec_from_json(_load_json(args.spec))
        report = process_mod.verify_majorization(
            spec, args.i, args.n_max, digit_cap=args.digit_cap
        )
        for v in report.violations:
            print(f"VIOLATION: {v}")
        print(f"checked {report.checked} values: "
              f"{'pass' if report.passed else 'fail'}")
        return EXIT_OK if report.passed else EXIT_VIOLATION
    if args.property == "goodsucc":
        src = make(spec_from_json(_load_json(args.source)))
        tgt = make(spec_from_json(_load_json(args.target)))
        report = good_successor_check(src, tgt, args.bound, digit_cap=args.digit_cap)
        for v in report.violations:
            print(f"VIOLATION: {v}")
        print(f"bounded check to {report.bound}: "
              f"{'pass' if report.passed else 'fail'}")
        return EXIT_OK if report.passed else EXIT_VIOLATION
    raise AssertionError(args.property)


def _cmd_classify(args) -> int:
    spec = spec_from_json(_load_json(args.spec))
    try:
        regime = classify_mod.classify(spec, probe_bound=args.probe_bound)
    except classify_mod.Inconclusive as exc:
        print(json.dumps({"regime": "Inconclusive", "reason": str(exc)}))
        return EXIT_VIOLATION
    report = classify_mod.regime_report(regime)
    if args.floor_max is not None:
        floor = classify_mod.empirical_floor(make(spec), args.floor_max)
        report["empirical_floor"] = o_.render(floor)
    print(json.dumps(report, sort_keys=False))
    return EXIT_OK


def _cmd_ord(args) -> int:
    if args.op == "eval":
        print(o_.render(o_.parse(args.expr[0])))
        return EXIT_OK
    if args.op == "compare":
        a, b = o_.parse(args.expr[0]), o_.parse(args.expr[1])
        print({-1: "LT", 0: "EQ", 1: "GT"}[o_.compare(a, b)])
        return EXIT_OK
    if args.op == "fs":
        x, theta = o_.parse(args.expr[0]), o_.parse(args.expr[1])
        print(o_.render(o_.fs(x, theta)))
        return EXIT_OK
    if args.op == "sqfs":
        x = o_.parse_ext(args.expr[0])
        print(o_.render(o_.sq_fs(x, int(args.expr[1]))))
        return EXIT_OK
    if args.op == "F":
        x = o_.parse_ext(args.expr[0])
        try:
            print(o_.big_f(x, int(args.expr[1]), budget=args.budget))
        except BudgetExceeded as exc:
            print(f"budget exceeded: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        return EXIT_OK
    raise AssertionError(args.op)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="goodstein",
        description="Multi-base Goodstein processes and their ordinal calculus",
    )
    sub = top.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a Goodstein process")
    run_p.add_argument("--hierarchy", required=True, help="dynamical family JSON file")
    run_p.add_argument("--start", required=True, help="starting value (decimal)")
    run_p.add_argument("--max-steps", type=int, default=100)
    run_p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)
    run_p.add_argument("--trace", help="write a JSON-lines trace here")
    run_p.add_argument(
        "--check",
        choices=process_mod.CHECK_LEVELS,
        default="descent+preservation",
    )
    run_p.set_defaults(func=_cmd_run)

    ver_p = sub.add_parser("verify", help="check certified properties")
    ver_p.add_argument(
        "property", choices=["descent", "preservation", "majorization", "goodsucc"]
    )
    ver_p.add_argument("--hierarchy", help="dynamical family JSON (descent/preservation)")
    ver_p.add_argument("--start", help="starting value (descent/preservation)")
    ver_p.add_argument("--max-steps", type=int, default=10)
    ver_p.add_argument("--spec", help="hierarchy spec JSON (majorization)")
    ver_p.add_argument("--i", type=int, help="square-sequence index (majorization)")
    ver_p.add_argument("--n-max", type=int, default=16)
    ver_p.add_argument("--source", help="source hierarchy spec JSON (goodsucc)")
    ver_p.add_argument("--target", help="target hierarchy spec JSON (goodsucc)")
    ver_p.add_argument("--bound", type=int, default=50)
    ver_p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)
    ver_p.add_argument("--strict-budget", action="store_true",
                       help="exit 3 when a verify run ends in a blow-up")
    ver_p.set_defaults(func=_cmd_verify)

    cls_p = sub.add_parser("classify", help="phase-transition classification")
    cls_p.add_argument("--spec", required=True, help="hierarchy spec JSON file")
    cls_p.add_argument("--probe-bound", type=int, default=200)
    cls_p.add_argument("--floor-max", type=int, default=None,
                       help="also report max o(n) for n up to this bound")
    cls_p.set_defaults(func=_cmd_classify)

    ord_p = sub.add_parser("ord", help="evaluate ordinal expressions")
    ord_p.add_argument("op", choices=["eval", "compare", "fs", "sqfs", "F"])
    ord_p.add_argument("expr", nargs="+")
    ord_p.add_argument("--budget", type=int, default=10**6)
    ord_p.set_defaults(func=_cmd_ord)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericBlowup, BudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GoodsteinError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
