"""Command-line front end.

Exit codes: 0 all requested checks hold, 1 a check was violated, 2 usage or
format error, 3 an enumeration bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import assignments as asg
from . import modelcheck as mc
from . import operators as ops
from . import postulates as pst
from .errors import (ConstraintViolation, EpispaceError, FormatError, FormulaSyntaxError, NoSuchBeliefState,
                     NotAPreorder, ScaleExceeded, UnknownAtomError)
from .fastcheck import Evaluator
from .logic import models, parse
from .space import dumps_space, load_space

OK, VIOLATED, USAGE, SCALE = 0, 1, 2, 3


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, data) -> None:
        if self.as_json:
            print(json.dumps(data, indent=2))
        else:
            print(text)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(args):
    sp = load_space(args.space)
    op = ops.load_operator(args.operator, sp) if getattr(args, "operator", None) else None
    return sp, op


def cmd_eval(args, out: _Out) -> int:
    sp = load_space(args.space)
    try:
        f = parse(args.formula, sp.sig)
    except (FormulaSyntaxError, UnknownAtomError) as exc:
        raise FormatError(str(exc), "<formula>", 0, args.formula) from None
    m = models(f, sp.sig)
    out.emit(sp.sig.format_set(m), {"formula": args.formula, "models": sp.sig.format_worlds(m)})
    return OK


def cmd_check(args, out: _Out) -> int:
    sp, op = _load(args)
    wanted = args.postulate or [p.value for p in pst.ALL]
    try:
        ids = [pst.PostulateId(p) for p in wanted]
    except ValueError as exc:
        raise FormatError(str(exc), "<argv>", 0, " ".join(wanted)) from None
    results = pst.check_all(op, ids, args.pair_cap)
    out.emit("\n".join(r.describe(sp.sig) for r in results),
             {"results": [r.to_dict(sp.sig) for r in results]})
    return OK if all(r.ok for r in results) else VIOLATED


def cmd_classify(args, out: _Out) -> int:
    sp, op = _load(args)
    c = pst.classify(op, args.pair_cap)
    out.emit("\n".join(f"{k}: {v}" for k, v in c.to_dict().items()), c.to_dict())
    return OK


def cmd_synthesize(args, out: _Out) -> int:
    sp = load_space(args.space)
    a = asg.load_assignment(args.assignment, sp)
    faithful = asg.is_faithful(sp, a)
    if not faithful.ok:
        print(f"assignment is not faithful: {faithful.describe(sp.sig)}", file=sys.stderr)
        return VIOLATED
    try:
        op = asg.synthesize(sp, a)
    except NoSuchBeliefState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATED
    _write(args.out, ops.dumps_operator(op))
    return OK


def cmd_extract(args, out: _Out) -> int:
    sp, op = _load(args)
    try:
        a = asg.extract(sp, op)
    except (NotAPreorder, ConstraintViolation) as exc:
        print(f"extraction failed: {exc}", file=sys.stderr)
        return VIOLATED
    _write(args.out, asg.dumps_assignment(a))
    return OK


def cmd_roundtrip(args, out: _Out) -> int:
    sp, op = _load(args)
    report = {"extracted": False, "faithful": None, "compatible": None, "resynthesized": False,
              "identical": False, "differences": []}
    lines = []
    try:
        a = asg.extract(sp, op)
    except (NotAPreorder, ConstraintViolation) as exc:
        lines.append(f"extraction failed: {exc}")
        out.emit("\n".join(lines), {**report, "error": str(exc)})
        return VIOLATED
    report["extracted"] = True
    f, c = asg.is_faithful(sp, a), asg.is_compatible(sp, a, op)
    report["faithful"], report["compatible"] = f.to_dict(sp.sig), c.to_dict(sp.sig)
    lines += [f.describe(sp.sig), c.describe(sp.sig)]
    try:
        op2 = asg.synthesize(sp, a)
    except NoSuchBeliefState as exc:
        lines.append(f"re-synthesis failed: {exc}")
        out.emit("\n".join(lines), {**report, "error": str(exc)})
        return VIOLATED
    report["resynthesized"] = True
    diff = ops.table_diff(op, op2)
    report["differences"] = [{"state": sp.names[s], "input": sp.sig.format_worlds(m),
                              "original": sp.names[t1], "resynthesized": sp.names[t2]}
                             for s, m, t1, t2 in diff]
    report["identical"] = not diff and f.ok and c.ok
    if diff:
        lines.append(f"tables differ in {len(diff)} rows")
        for d in report["differences"][:20]:
            lines.append(f"  {d['state']} on {{{', '.join(d['input'])}}}: {d['original']} vs {d['resynthesized']}")
    else:
        lines.append("tables identical")
    out.emit("\n".join(lines), report)
    return OK if report["identical"] else VIOLATED


def cmd_verify(args, out: _Out) -> int:
    sp = load_space(args.space)
    report = mc.verify_claims(sp, args.max_ops, args.sample, args.seed)
    out.emit(report.describe(), report.to_dict())
    return OK if report.ok else VIOLATED


def cmd_enumerate(args, out: _Out) -> int:
    sp = load_space(args.space)
    scope = mc.EnumerationScope.of(sp, args.max_ops)
    data = scope.to_dict()
    if args.classify_all:
        if not scope.operators_enumerable:
            raise ScaleExceeded(f"{sp.name} has {scope.operator_count} operators; "
                                f"the enumeration bound is {scope.max_ops}")
        ev = Evaluator(sp.bel, sp.sig.n_masks)
        totals = {"AGMRev": 0, "CLRev": 0, "ECLRev": 0, "AGMRev&CLRev": 0}
        for start in range(0, scope.operator_count, mc.CHUNK):
            stop = min(scope.operator_count, start + mc.CHUNK)
            cls = ev.classes(mc.operator_tables(sp, start, stop))
            for name in ("AGMRev", "CLRev", "ECLRev"):
                totals[name] += int(cls[name].sum())
            totals["AGMRev&CLRev"] += int(np.sum(cls["AGMRev"] & cls["CLRev"]))
        data["classes"] = totals
    text = "\n".join(f"{k}: {v}" for k, v in data.items() if k != "classes")
    if "classes" in data:
        text += "\n" + "\n".join(f"|{k}|: {v}" for k, v in data["classes"].items())
    out.emit(text, data)
    return OK


def cmd_dot(args, out: _Out) -> int:
    sp, op = _load(args)
    _write(args.out, ops.to_dot(op))
    return OK


def cmd_examples(args, out: _Out) -> int:
    d = Path(args.dir)
    d.mkdir(parents=True, exist_ok=True)
    sp1, op1 = ops.build_example1()
    sp2, op2 = ops.build_example2()
    files = {
        "ex1.space": dumps_space(sp1),
        "ex1.op": ops.dumps_operator(op1),
        "ex2.space": dumps_space(sp2),
        "ex2.op": ops.dumps_operator(op2),
        "ex2.assign": asg.dumps_assignment(asg.example2_assignment(sp2)),
        "gc3.space": dumps_space(ops.consistent_space()),
        "bot3.space": dumps_space(ops.bottom_space()),
    }
    for name, text in files.items():
        (d / name).write_text(text)
    out.emit("\n".join(str(d / n) for n in files), {"written": [str(d / n) for n in files]})
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="epispace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, space=True, operator=False):
        p = sub.add_parser(name, parents=[common], help=help_)
        if space:
            p.add_argument("-s", "--space", required=True, help="epistemic space file")
        if operator:
            p.add_argument("-o", "--operator", required=True, help="operator file")
        p.set_defaults(fn=fn)
        return p

    p = add("eval", cmd_eval, "print the model set of a formula")
    p.add_argument("-f", "--formula", required=True)

    p = add("check", cmd_check, "check postulates", operator=True)
    p.add_argument("-p", "--postulate", action="append", help="postulate id (repeatable; default: all)")
    p.add_argument("--pair-cap", type=int, default=pst.DEFAULT_PAIR_CAP)

    p = add("classify", cmd_classify, "class membership of an operator", operator=True)
    p.add_argument("--pair-cap", type=int, default=pst.DEFAULT_PAIR_CAP)

    p = add("synthesize", cmd_synthesize, "operator from an assignment")
    p.add_argument("-a", "--assignment", required=True)
    p.add_argument("--out", help="output file (default: stdout)")

    p = add("extract", cmd_extract, "assignment from an operator", operator=True)
    p.add_argument("--out", help="output file (default: stdout)")

    add("roundtrip", cmd_roundtrip, "extract, re-synthesize and compare", operator=True)

    p = add("verify", cmd_verify, "exhaustively cross-check the class relations and representation theorem")
    p.add_argument("--max-ops", type=int, default=None, help="enumeration bound (default: $EPISPACE_MAX_OPS or 1e7)")
    p.add_argument("--sample", type=int, default=0, help="random operators to scan when over the bound")
    p.add_argument("--seed", type=int, default=0)

    p = add("enumerate", cmd_enumerate, "count or classify all operators of a space")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--count-only", action="store_true")
    g.add_argument("--classify-all", action="store_true")
    p.add_argument("--max-ops", type=int, default=None)

    p = add("dot", cmd_dot, "DOT graph of an operator", operator=True)
    p.add_argument("--out", help="output file (default: stdout)")

    p = add("examples", cmd_examples, "write the worked example fixtures", space=False)
    p.add_argument("--dir", default=".", help="target directory")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = _Out(args.json)
    try:
        return args.fn(args, out)
    except ScaleExceeded as exc:
        print(f"scale exceeded: {exc}", file=sys.stderr)
        return SCALE
    except (EpispaceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
