"""``dcsit-gdof`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 I/O error. Numbers are written with nine decimals; CSV is the default
format and JSON output is one object per line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, verify
from .achievability import three_slot_ledger
from .bounds import sum_gdof_bounds
from .core import AlphaPair, RegionCase, canonicalize, classify_region
from .errors import DomainError
from .mcsim import DEFAULT_RHOS, CovarianceSpec, Term, logdet_slope, scheme_power_audit

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SWEEP_FIELDS = ("alpha1", "alpha2", "region", "lower", "upper", "tight", "a_sum_star")
SLOPE_FIELDS = ("selector", "k", "alpha2", "slope", "expected", "abs_err", "r2")
BOUNDS_FIELDS = (
    "alpha1", "alpha2", "swapped", "region", "closed_form",
    "upper", "lower", "a_sum_star", "tight", "consistent",
)
LEDGER_FIELDS = ("slot", "receiver", "source", "gdof", "symbols")
AUDIT_FIELDS = (
    "slot", "receiver", "term", "measured", "expected", "abs_err", "labeled_exponent", "kind",
)


class UsageError(Exception):
    pass


def _num(x) -> str:
    return f"{float(x):.9f}"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, Fraction)):
        return _num(v)
    return str(v)


def _json_cell(v):
    if isinstance(v, (float, Fraction)):
        return round(float(v), 9)
    return v


def render(fields, rows, fmt: str) -> str:
    """Rows (dicts keyed by ``fields``) as CSV with a header, or JSON lines."""
    if fmt == "json":
        return "".join(
            json.dumps({f: _json_cell(r[f]) for f in fields}) + "\n" for r in rows
        )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_csv_cell(r[f]) for f in fields])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _pair(args) -> AlphaPair:
    return AlphaPair(args.alpha1, args.alpha2)


def _csv_list(text: str, conv, what: str):
    try:
        return [conv(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} list {text!r}") from None


def _bounds_row(alpha1, alpha2):
    p = sum_gdof_bounds(alpha1, alpha2)
    return {
        "alpha1": float(alpha1),
        "alpha2": float(alpha2),
        "swapped": p.swapped,
        "region": p.region.value,
        "closed_form": "OPEN" if p.closed_form is None else p.closed_form,
        "upper": p.bounds.upper,
        "lower": p.bounds.lower,
        "a_sum_star": p.a_sum_star,
        "tight": p.bounds.tight,
        "consistent": p.bounds.consistent,
    }


def cmd_bounds(args) -> int:
    emit(render(BOUNDS_FIELDS, [_bounds_row(args.alpha1, args.alpha2)], args.format), args.out)
    return EXIT_OK


def sweep_rows(lo: float, hi: float, step: float):
    if not (0 <= lo < hi):
        raise DomainError(f"need 0 <= min < max, got [{lo}, {hi}]")
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    grid = verify._grid(lo, hi, step)
    for a1 in grid:
        for a2 in grid:
            row = _bounds_row(a1, a2)
            yield {f: row[f] for f in SWEEP_FIELDS}


def cmd_sweep(args) -> int:
    emit(render(SWEEP_FIELDS, sweep_rows(args.min, args.max, args.step), args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_battery(
        step=args.step, tol=args.tol, grid_step_a=args.grid_step_a, seed=args.seed,
        lo=args.min, hi=args.max,
    )
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append("PASS" if ok else "FAIL")
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_slopes(args) -> int:
    rhos = _csv_list(args.rhos, float, "rho")
    selectors = _csv_list(args.selector, str.upper, "selector")
    ks = _csv_list(args.k, int, "k")
    alphas = _csv_list(args.alpha2, float, "alpha2")
    rows = []
    for name in selectors:
        if name not in Term.__members__:
            raise UsageError(f"unknown selector {name!r}; choose from {', '.join(Term.__members__)}")
        for k in ks:
            for a2 in alphas:
                spec = CovarianceSpec(Term[name], k, a2)
                est = logdet_slope(spec, rhos, args.trials, args.seed)
                rows.append({
                    "selector": name, "k": k, "alpha2": a2, "slope": est.slope,
                    "expected": spec.expected, "abs_err": abs(est.slope - spec.expected),
                    "r2": est.r_squared,
                })
    emit(render(SLOPE_FIELDS, rows, args.format), args.out)
    return EXIT_OK


def cmd_ledger(args) -> int:
    a, swapped = canonicalize(_pair(args))
    region = classify_region(a)
    if region is not RegionCase.BOTH_WEAK:
        raise UsageError(
            f"the 3-slot ledger needs both exponents <= 1, but ({args.alpha1}, {args.alpha2}) "
            f"is {region.value}; use `dcsit-gdof bounds` for this point"
        )
    led = three_slot_ledger(a)
    rows = [
        {"slot": e.slot, "receiver": e.receiver, "source": e.source.value,
         "gdof": e.gdof, "symbols": e.symbols}
        for e in led.entries
    ]
    if args.format == "json":
        text = json.dumps({
            "alpha1": a.alpha1, "alpha2": a.alpha2, "swapped": swapped,
            "entries": [{f: _json_cell(r[f]) for f in LEDGER_FIELDS} for r in rows],
            "d1": _json_cell(led.d1), "d2": _json_cell(led.d2),
            "sum": _json_cell(led.d1 + led.d2),
        }) + "\n"
    else:
        text = render(LEDGER_FIELDS, rows, "csv")
        text += f"# swapped={int(swapped)}\n# d1={_num(led.d1)}\n# d2={_num(led.d2)}\n"
        text += f"# sum={_num(led.d1 + led.d2)}\n"
    emit(text, args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    a, _ = canonicalize(_pair(args))
    rows = [
        {"slot": r.slot, "receiver": r.receiver, "term": r.term, "measured": r.measured,
         "expected": r.expected, "abs_err": r.abs_err,
         "labeled_exponent": r.labeled_exponent, "kind": r.kind.value}
        for r in scheme_power_audit(a, _csv_list(args.rhos, float, "rho"), args.trials, args.seed)
    ]
    emit(render(AUDIT_FIELDS, rows, args.format), args.out)
    return EXIT_OK


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 0 or v == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a finite nonnegative number: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcsit-gdof",
        description="Sum-GDoF bounds for the two-user MISO interference channel with delayed CSIT.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    io_opts = argparse.ArgumentParser(add_help=False)
    io_opts.add_argument("--format", choices=("csv", "json"), default="csv")
    io_opts.add_argument("--out", help="output file (default: stdout)")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--alpha1", type=_nonneg, required=True)
    point.add_argument("--alpha2", type=_nonneg, required=True)

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--rhos", default=",".join(f"{r:g}" for r in DEFAULT_RHOS),
                    help="comma list of SNR values")
    mc.add_argument("--trials", type=int, default=2000)
    mc.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bounds", parents=[point, io_opts], help="bounds at one point")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", parents=[io_opts], help="bounds over a square grid")
    p.add_argument("--min", type=_nonneg, default=0.0)
    p.add_argument("--max", type=_nonneg, default=3.0)
    p.add_argument("--step", type=float, default=0.05)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant battery")
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid-step-a", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min", type=_nonneg, default=0.0)
    p.add_argument("--max", type=_nonneg, default=3.0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("slopes", parents=[mc, io_opts], help="Monte Carlo log-det slopes")
    p.add_argument("--selector", default="BE6,BE7,BE5", help="comma list of BE6, BE7, BE5")
    p.add_argument("--k", default="0,1,2", help="comma list of rank deficiencies")
    p.add_argument("--alpha2", default="0.3,0.7,1.0,1.5,2.5", help="comma list of exponents")
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("ledger", parents=[point, io_opts], help="3-slot scheme GDoF ledger")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("audit", parents=[point, mc, io_opts], help="received power exponents")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"dcsit-gdof {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dcsit-gdof {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
