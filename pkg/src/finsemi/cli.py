"""Command line entry point: ``finsemi <command> ...``.

Exit codes: 0 success or pass, 1 a check failed or a counterexample was
found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import core
from .classify import classify
from .derive import derive_search
from .enumerate import EnumerationSpec, Mode, enumerate_semigroups
from .errors import WorkbenchError
from .suites import SUITES, reports_json, run_suite
from .terms import as_identities, format_identity, load_identities, satisfies
from .zoo import build_model, free_quotient


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _identities(items) -> list:
    """Identity text, or ``@file`` for an identity file (zero forms expanded)."""
    out = []
    for item in items:
        if item.startswith("@"):
            out.extend(load_identities(item[1:]))
        else:
            out.extend(as_identities(item))
    return out


def _emit(args, doc, text):
    if getattr(args, "json", None) == "-":
        print(json.dumps(doc, indent=1))
    else:
        print(text)
        if getattr(args, "json", None):
            with open(args.json, "w") as fh:
                json.dump(doc, fh, indent=1)
                fh.write("\n")


def cmd_check(args) -> int:
    S = core.load(args.semigroup)
    results = []
    ok = True
    for eps in _identities(args.identity):
        r = satisfies(S, eps)
        ok &= bool(r)
        results.append({"identity": format_identity(eps), "holds": bool(r),
                        "failure": None if r else {"identity": format_identity(r.identity),
                                                   "assignment": r.witness}})
        print(f"{'pass' if r else 'FAIL'}  {format_identity(eps)}"
              + ("" if r else f"   ({r.describe(S)})"))
    if args.json:
        _emit(args, {"semigroup": S.name, "results": results, "passed": ok}, "")
    return 0 if ok else 1


def cmd_classify(args) -> int:
    c = classify(args.identity, right_first=args.right_first)
    _emit(args, c.to_json(), f"{c.verdict}: \"{format_identity(c.implied_identity())}\""
          + (f"\ntrace: {', '.join(str(s) for s in c.trace)}" if args.trace else ""))
    return 0


def cmd_build(args) -> int:
    model = build_model(args.model)
    doc = core.to_json(model.table)
    if args.output:
        core.dump(model.table, args.output)
        print(f"wrote {model.name} (order {model.table.order}) to {args.output}")
    else:
        print(json.dumps(doc, indent=1))
    return 0


def cmd_enumerate(args) -> int:
    spec = EnumerationSpec(args.order, Mode(args.mode),
                           tuple(_identities(args.satisfies)), tuple(_identities(args.fails)))
    found = list(enumerate_semigroups(spec, workers=args.workers))
    if args.json:
        _emit(args, {"order": args.order, "mode": spec.mode.value, "count": len(found),
                     "semigroups": [core.to_json(S) for S in found]}, f"{len(found)} semigroups")
    else:
        for S in found:
            print(S.name, json.dumps([list(r) for r in S.table]))
        print(f"{len(found)} semigroups")
    return 0


def cmd_quotient(args) -> int:
    S = core.load(args.semigroup)
    model = free_quotient(S, _identities(args.by))
    if args.output:
        core.dump(model.table, args.output)
        print(f"wrote quotient of order {model.table.order} to {args.output}")
    else:
        print(json.dumps(core.to_json(model.table), indent=1))
    return 0


def cmd_suite(args) -> int:
    reports = run_suite(args.name)
    for r in reports:
        print(r.summary())
        for c in r.failures:
            print(f"    FAIL {c.claim}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(reports_json(reports) + "\n")
    return 0 if all(r.passed for r in reports) else 1


def cmd_derive(args) -> int:
    try:
        length, steps = (int(p) for p in args.budget.split(","))
    except ValueError:
        raise _UsageError("--budget expects L,steps (two integers)")
    basis = _identities(args.basis)
    result = derive_search(basis, args.goal, max_length=length, max_steps=steps)
    if result:
        print(f"derivable in {len(result.trace)} steps")
        for step in result.trace:
            print("  " + str(step))
        return 0
    note = " (search space exhausted)" if result.exhausted else ""
    print(f"not found within budget after {result.explored} words{note}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="finsemi", description="finite semigroup and identity workbench")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="check identities in a semigroup given as JSON")
    s.add_argument("semigroup")
    s.add_argument("identity", nargs="+", help="identity text or @file")
    s.add_argument("--json", metavar="OUT", help="write a JSON result ('-' for stdout)")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("classify", help="classify a product identity")
    s.add_argument("identity")
    s.add_argument("--trace", action="store_true", help="print the classification steps")
    s.add_argument("--right-first", action="store_true", help="strip on the right first")
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("build", help="emit a model as Cayley-table JSON, e.g. T(3), V(1,2)")
    s.add_argument("model")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("enumerate", help="enumerate small semigroups")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.ISO.value)
    s.add_argument("--satisfies", action="append", default=[], metavar="F")
    s.add_argument("--fails", action="append", default=[], metavar="F")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("quotient", help="largest quotient satisfying identities")
    s.add_argument("semigroup")
    s.add_argument("--by", action="append", required=True, metavar="F")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_quotient)

    s = sub.add_parser("suite", help="run a verification suite")
    s.add_argument("name", choices=list(SUITES) + ["all"])
    s.add_argument("--json", metavar="OUT")
    s.set_defaults(fn=cmd_suite)

    s = sub.add_parser("derive", help="search for an equational derivation")
    s.add_argument("basis", help="identities separated by ';', or @file")
    s.add_argument("goal")
    s.add_argument("--budget", default="8,8", help="max word length and max steps, as L,steps")
    s.set_defaults(fn=cmd_derive)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "basis", None) is not None and not args.basis.startswith("@"):
            args.basis = [part for part in args.basis.split(";") if part.strip()]
        elif getattr(args, "basis", None) is not None:
            args.basis = [args.basis]
        return args.fn(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (WorkbenchError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
