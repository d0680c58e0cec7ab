"""Batch command-line interface: construct, classify, euler, audit, sample,
selftest. All file I/O is JSON/CSV with atomic writes and deterministic bytes
for identical invocations (including seeds).

Exit codes: 0 success, 1 audit violations found, 2 input or infeasibility
error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .audit import audit_rep, check_restrictions
from .constructors import BuildRequest, build_rep, sample
from .cover import cover_classify
from .curves import enumerate_scc
from .errors import PslTildeError
from .mobius import classify_psl
from .selftest import run_selftest


def _parse_signs(text: str) -> tuple[int, ...]:
    table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1, "0": 0}
    try:
        return tuple(table[tok.strip()] for tok in text.split(","))
    except KeyError as exc:
        raise ValueError(f"bad sign token {exc.args[0]!r}: use +, - or 0") from None


def _write_json(path: str | None, payload) -> None:
    text = jsonio.dumps(payload)
    if path is None:
        sys.stdout.write(text)
    else:
        jsonio.atomic_write(path, text)


def _cmd_construct(args) -> int:
    req = BuildRequest(args.genus, args.punctures, args.euler,
                       _parse_signs(args.signs), args.seed)
    rep = build_rep(req)
    meta = {"seed": args.seed, "euler": args.euler,
            "signs": list(req.signs)}
    _write_json(args.output, jsonio.representation_to_json(rep, meta))
    return 0


def _cmd_classify(args) -> int:
    with open(args.input) as fh:
        data = json.load(fh)
    items = data if isinstance(data, list) else [data]
    out = []
    for item in items:
        if isinstance(item, dict) and "index" in item:
            elt = jsonio.cover_element_from_json(item)
            out.append(jsonio.cover_class_to_json(cover_classify(elt)))
        else:
            matrix = item["matrix"] if isinstance(item, dict) else item
            p = jsonio.matrix_from_json(matrix)
            out.append({"type": classify_psl(p).value})
    _write_json(args.output, out if isinstance(data, list) else out[0])
    return 0


def _cmd_euler(args) -> int:
    from .surface import euler_class, sign_vector

    with open(args.input) as fh:
        rep = jsonio.representation_from_json(json.load(fh))
    payload = {
        "euler": euler_class(rep),
        "signs": list(sign_vector(rep)),
    }
    _write_json(args.output, payload)
    return 0


def _cmd_audit(args) -> int:
    with open(args.input) as fh:
        rep = jsonio.representation_from_json(json.load(fh))
    report = audit_rep(rep, args.depth, args.margin)
    payload = jsonio.audit_report_to_json(report)
    if args.restrictions:
        try:
            restriction = check_restrictions(rep)
            payload["restrictions"] = {
                "mode": restriction.mode,
                "negative_puncture": restriction.negative_puncture,
                "pants_euler": restriction.pants_euler,
                "piece_eulers": list(restriction.piece_eulers),
                "piece_chis": list(restriction.piece_chis),
                "passed": restriction.passed,
            }
        except PslTildeError as exc:
            payload["restrictions"] = {"error": str(exc)}
    if args.report:
        jsonio.atomic_write(args.report, jsonio.dumps(payload))
    else:
        sys.stdout.write(jsonio.dumps(payload))
    return 1 if report.violations else 0


def _cmd_sample(args) -> int:
    req = BuildRequest(args.genus, args.punctures, args.euler,
                       _parse_signs(args.signs), args.seed)
    reps, summary = sample(req, args.count, depth=args.depth,
                           margin=args.margin)
    rows = [jsonio.AUDIT_CSV_HEADER]
    curves = enumerate_scc(req.surface(), args.depth)
    for rep in reps:
        report = audit_rep(rep, args.depth, args.margin, curves=curves)
        rows.append(jsonio.audit_report_csv_row(report))
    if args.csv:
        jsonio.atomic_write(args.csv, "\n".join(rows) + "\n")
    _write_json(args.output, summary)
    return 0


def _cmd_selftest(args) -> int:
    ok = run_selftest(scale=args.scale)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psltilde",
        description=("computations in the universal cover of PSL(2,R): "
                     "representation construction, invariants, and "
                     "hyperbolicity audits"))
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker count (accepted for interface "
                        "compatibility; execution is serial)")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a representation with "
                       "prescribed Euler class and signs")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--punctures", type=int, required=True)
    c.add_argument("--euler", type=int, required=True)
    c.add_argument("--signs", required=True,
                   help="comma-separated +, - per puncture")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=_cmd_construct)

    c = sub.add_parser("classify", help="classify matrices or cover elements")
    c.add_argument("input")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=_cmd_classify)

    c = sub.add_parser("euler", help="Euler class and sign vector of a "
                       "representation file")
    c.add_argument("input")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=_cmd_euler)

    c = sub.add_parser("audit", help="hyperbolicity audit over enumerated "
                       "simple closed curves")
    c.add_argument("input")
    c.add_argument("--depth", type=int, default=4)
    c.add_argument("--margin", type=float, default=1e-6)
    c.add_argument("--report", default=None)
    c.add_argument("--restrictions", action="store_true",
                   help="also certify the pants/complement restriction "
                   "Euler classes")
    c.set_defaults(fn=_cmd_audit)

    c = sub.add_parser("sample", help="seeded batch of builds with audits")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--punctures", type=int, required=True)
    c.add_argument("--euler", type=int, required=True)
    c.add_argument("--signs", required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--depth", type=int, default=4)
    c.add_argument("--margin", type=float, default=1e-6)
    c.add_argument("--csv", default=None)
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=_cmd_sample)

    c = sub.add_parser("selftest", help="run the built-in property suite")
    c.add_argument("--scale", type=float, default=1.0)
    c.set_defaults(fn=_cmd_selftest)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.fn(args)
    except (PslTildeError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
