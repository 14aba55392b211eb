"""Command line: ``quadsurd {expand,units,verify,sweep}``.

Exit status is 0 on success, 1 when a theorem check fails and 2 for invalid
input.  ``--json`` prints one JSON document; big integers are decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import small_divisors
from .cfrac import ConvergentStream, expand, surd_new
from .errors import (
    BadDivisor,
    InternalInvariantViolation,
    NotRegularIndex,
    PeriodNotFound,
    SurdError,
    TheoremViolation,
)
from .rings import ring_context
from .theorems import (
    minimal_expansion,
    sweep,
    unit_ladder,
    verify_corollary1,
    verify_theorem1_shift,
    verify_theorem2,
    verify_theorem3,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def cmd_expand(args) -> int:
    surd = surd_new(args.D, args.Q)
    cf = expand(surd, minimal=not args.non_minimal)
    doc = {
        "D": str(args.D),
        "Q": str(args.Q),
        "b0": str(cf.b0),
        "period": [str(b) for b in cf.period],
        "m": cf.m,
        "period_length": len(cf.period),
        "minimal": cf.minimal,
    }
    text = "\n".join([
        f"{surd} = {cf}",
        f"b0 = {cf.b0}",
        f"period = {' '.join(map(str, cf.period))}",
        f"m = {cf.m}",
        f"period length = {len(cf.period)}",
    ])
    _emit(args, doc, text)
    return EXIT_OK


def _ladder_rows(ctx, count):
    rows = []
    for rung in unit_ladder(ctx, count):
        u = rung.link.unit
        rows.append({
            "j": rung.power,
            "r": str(u.r),
            "s": str(u.s),
            "norm": u.norm,
            "t": str(rung.link.t),
            "k": rung.link.k,
            "class": str(rung.cls),
        })
    return rows


def cmd_units(args) -> int:
    ctx = ring_context(args.D, args.Q)
    rows = _ladder_rows(ctx, args.count)
    header = f"units of Z[sqrt({ctx.D1})] via sqrt({ctx.D}/{ctx.Q}), q={ctx.q}, D2={ctx.D2}"
    cols = ("j", "r", "s", "norm", "t", "k", "class")
    table = [cols] + [tuple(str(row[c]) if c != "norm" else f"{row[c]:+d}" for c in cols) for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    lines = [header] + ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in table]
    doc = {"D": str(ctx.D), "Q": str(ctx.Q), "q": str(ctx.q), "D1": str(ctx.D1), "D2": str(ctx.D2), "units": rows}
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _check_t1(ctx, conv, args):
    out = []
    for rung in unit_ladder(ctx, args.count, conv):
        shifted = verify_theorem1_shift(ctx, rung.link, conv)
        out.append({"j": rung.power, "k": rung.link.k, "t": str(rung.link.t), "shifted_k": shifted.k,
                    "shifted_r": str(shifted.unit.r), "shifted_s": str(shifted.unit.s)})
    return out


def _check_t2(ctx, conv, args):
    return [{"k": k, "r": str(u.r), "s": str(u.s), "N": str(u.N), "norm": u.norm}
            for k, u in verify_theorem2(ctx, args.l, conv)]


def _check_c1(ctx, conv, args):
    res = verify_corollary1(ctx, args.l, conv)
    return {"period": res["period"], "period_D2": res["period_D2"],
            "pairs": [{"k": k, "k_D2": k2, "r": str(r), "s_D2": str(s)} for k, k2, r, s in res["pairs"]]}


def _check_t3(ctx, conv, args):
    L = len(minimal_expansion(ctx.surd).period)
    if args.t is not None:
        ts = [args.t]
    else:
        ts = small_divisors(conv[args.l * L - 1].s, 64)
    out = []
    for t in ts:
        res = verify_theorem3(ctx, args.l, t, conv)
        out.append({"k": res.k, "t": str(res.t), "rational": [str(c) for c in res.rational_terms.terms],
                    "predicted": str(res.predicted), "D'": str(res.Dprime), "Q'": str(res.Qprime),
                    "a": str(res.a)})
    return out


CHECKS = {"t1": _check_t1, "t2": _check_t2, "c1": _check_c1, "t3": _check_t3}


def cmd_verify(args) -> int:
    ctx = ring_context(args.D, args.Q)
    conv = ConvergentStream(ctx.surd)
    which = list(CHECKS) if args.which == "all" else [args.which]
    results = []
    ok = True
    for name in which:
        try:
            detail = CHECKS[name](ctx, conv, args)
            results.append({"check": name, "status": "pass", "detail": detail})
        except (TheoremViolation, InternalInvariantViolation) as exc:
            ok = False
            results.append({"check": name, "status": "fail", "error": str(exc)})
    lines = []
    for res in results:
        lines.append(f"{res['check']}: {res['status'].upper()}")
        if res["status"] == "fail":
            lines.append(f"  {res['error']}")
        elif res["check"] == "t3":
            lines.extend(f"  t={d['t']}: r_k/t = [{','.join(d['rational'])}] -> {d['predicted']}" for d in res["detail"])
        elif res["check"] == "c1":
            lines.extend(f"  r_{p['k']} = r'_{p['k_D2']} = {p['r']}, s'_{p['k_D2']} = {p['s_D2']}"
                         for p in res["detail"]["pairs"])
        elif res["check"] == "t2":
            lines.extend(f"  k={d['k']}: {d['r']}+{d['s']}*sqrt({d['N']})" for d in res["detail"])
        else:
            lines.extend(f"  eps^{d['j']}: k={d['k']} t={d['t']} -> k={d['shifted_k']}" for d in res["detail"])
    doc = {"D": str(ctx.D), "Q": str(ctx.Q), "ok": ok, "checks": results}
    _emit(args, doc, "\n".join(lines))
    if not ok:
        print("theorem violation", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    if args.dmax < 2:
        raise SurdError("--dmax must be at least 2")
    report = sweep(args.dmax, "one" if args.q_one else "all", args.l_max, jobs=args.jobs,
                   levels=args.levels, divisor_cap=args.divisor_cap)
    if args.jsonl:
        with open(args.jsonl, "w") as fh:
            fh.write(report.to_jsonl())
    stats = {k: report.stats[k] for k in sorted(report.stats)}
    doc = {
        "dmax": args.dmax,
        "stats": stats,
        "violations": [json.loads(r.to_json()) for r in sorted(report.violations, key=lambda r: (r.D, r.Q, r.check))],
        "ok": report.ok,
    }
    _emit(args, doc, report.summary())
    print(f"elapsed {report.elapsed:.1f}s", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadsurd", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def surd_args(p):
        p.add_argument("D", type=_positive)
        p.add_argument("Q", type=_positive)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("expand", help="periodic continued fraction of sqrt(D/Q)")
    surd_args(p)
    p.add_argument("--non-minimal", action="store_true", help="write the period out twice")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("units", help="eps, eps^2, ... linked to convergents and classified")
    surd_args(p)
    p.add_argument("--count", type=_positive, default=4)
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("verify", help="check the unit/convergent theorems for one (D, Q)")
    surd_args(p)
    p.add_argument("--which", choices=["t1", "t2", "c1", "t3", "all"], default="all")
    p.add_argument("--l", type=_positive, default=1, help="number of periods (t2, c1) or period index (t3)")
    p.add_argument("--t", type=_positive, default=None, help="divisor of s_k for t3 (default: small divisors)")
    p.add_argument("--count", type=_positive, default=4, help="powers of eps for t1")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verify everything for all admissible D <= dmax")
    p.add_argument("--dmax", type=int, default=500)
    p.add_argument("--l-max", "--lmax", dest="l_max", type=_positive, default=2)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--levels", type=_positive, default=4, help="powers of eps per surd")
    p.add_argument("--divisor-cap", type=_positive, default=64)
    p.add_argument("--q-one", action="store_true", help="only Q = 1")
    p.add_argument("--jsonl", metavar="PATH", help="write one JSON row per check")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SurdError, BadDivisor, NotRegularIndex) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PeriodNotFound, InternalInvariantViolation) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
