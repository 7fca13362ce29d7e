"""Command-line front end.

Subcommands::

    bound  --r R --n N --d D      bracket for one triple
    table  {A,B,C,D,custom}       the four worked-example tables, or a custom r-list
    sweep  --n N --d D --r-min A --r-max B --steps K   log-spaced r sweep

Exit codes: 0 success, 2 usage error, 3 domain error, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from typing import Sequence

from . import numerics
from .bounds_lower import BoundBracket, bracket, lower_bound
from .bounds_upper import classify, upper_bound_breakdown
from .errors import ConvergenceError, DomainError

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

CSV_FIELDS = ("r", "s_minus", "s_plus", "rel_uncertainty", "lambda_star")

# (n, d, r-grid) of the four worked examples
TABLE_CASES: dict[str, tuple[float, int, tuple[float, ...]]] = {
    "A": (1, 1, (2.2, 3, 4, 6, 50, 1000)),
    "B": (3, 1, (2.2, 3, 6, 10, 20)),
    "C": (2, 2, (2.1, 3, 6, 18, 50, 100)),
    "D": (2, 3, (2.1, 3, 4, 7, 11, 20, 100, 1000)),
}

_QUANTUM = Decimal("0.0001")


def round_up(x: float) -> str:
    """Four decimals, rounded toward +inf (upper bounds stay upper bounds)."""
    return str(Decimal(x).quantize(_QUANTUM, rounding=ROUND_CEILING))


def round_down(x: float) -> str:
    """Four decimals, rounded toward -inf (lower bounds stay lower bounds)."""
    return str(Decimal(x).quantize(_QUANTUM, rounding=ROUND_FLOOR))


@dataclass(frozen=True)
class TableRow:
    r: float
    s_minus: float | None
    s_plus: float
    rel_uncertainty: float | None
    lambda_star: float | None
    sharp: bool

    @property
    def s_plus_rounded(self) -> str:
        return round_up(self.s_plus)

    @property
    def s_minus_rounded(self) -> str:
        return "-" if self.s_minus is None else round_down(self.s_minus)

    @classmethod
    def from_bracket(cls, b: BoundBracket) -> TableRow:
        return cls(b.r, b.lower, b.upper, b.rel_uncertainty, b.lambda_star, b.sharp)

    def as_dict(self) -> dict[str, object]:
        return {
            "r": _json_number(self.r),
            "s_minus": self.s_minus,
            "s_plus": self.s_plus,
            "rel_uncertainty": self.rel_uncertainty,
            "lambda_star": self.lambda_star,
            "sharp": self.sharp,
            "s_minus_rounded": self.s_minus_rounded,
            "s_plus_rounded": self.s_plus_rounded,
        }


def _json_number(x: float) -> float | str:
    return "inf" if math.isinf(x) else x


def _fmt_r(r: float) -> str:
    return "inf" if math.isinf(r) else format(r, "g")


def _csv_cell(x: float | None) -> str:
    if x is None:
        return ""
    return "inf" if math.isinf(x) else repr(x)


def parse_r(token: str) -> float:
    """Parse an exponent r: a decimal number or the token ``inf``."""
    try:
        value = float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid r value {token!r}") from None
    if math.isnan(value):
        raise argparse.ArgumentTypeError("r must not be NaN")
    return value


def _positive_int(token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {token!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {token!r}")
    return value


def _positive_float(token: str) -> float:
    value = float(token)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {token!r}")
    return value


def compute_rows(n: float, d: int, rs: Sequence[float], *, abs_tol: float, rel_tol: float,
                 jobs: int = 1) -> list[TableRow]:
    """Bracket every r in ``rs``; rows come back in input order."""
    args = [(float(r), float(n), d, abs_tol, rel_tol) for r in rs]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_worker, args))
    return [_row_worker(a) for a in args]


def _row_worker(args: tuple[float, float, int, float, float]) -> TableRow:
    r, n, d, abs_tol, rel_tol = args
    return TableRow.from_bracket(bracket(r, n, d, abs_tol=abs_tol, rel_tol=rel_tol))


def render_rows(rows: Sequence[TableRow], fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps([row.as_dict() for row in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow([_csv_cell(row.r), _csv_cell(row.s_minus), _csv_cell(row.s_plus),
                             _csv_cell(row.rel_uncertainty), _csv_cell(row.lambda_star)])
        return buf.getvalue()
    lines = [title] if title else []
    lines.append(f"{'r':>10}  {'S-':>7}  {'S+':>7}  {'(S+-S-)/S-':>11}  {'lambda*':>10}")
    for row in rows:
        unc = "-" if row.rel_uncertainty is None else f"{row.rel_uncertainty:.5f}"
        lam = ("sharp" if row.sharp else "-") if row.lambda_star is None else f"{row.lambda_star:.6f}"
        lines.append(f"{_fmt_r(row.r):>10}  {row.s_minus_rounded:>7}  {row.s_plus_rounded:>7}"
                     f"  {unc:>11}  {lam:>10}")
    return "\n".join(lines) + "\n"


# --- subcommands -----------------------------------------------------------------


def cmd_bound(args: argparse.Namespace) -> str:
    b = bracket(args.r, args.n, args.d, abs_tol=args.abs_tol, rel_tol=args.rel_tol)
    row = TableRow.from_bracket(b)
    details: dict[str, object] = {}
    if args.verbose:
        ub = upper_bound_breakdown(args.r, args.n, args.d)
        details = {"hy_constant": ub.hy_constant, "s_conjugate": _json_number(ub.s_conjugate),
                   "weight_integral": _json_number(ub.weight_integral)}
        if b.status.value == "estimated":
            lb = lower_bound(args.r, args.n, args.d, abs_tol=args.abs_tol, rel_tol=args.rel_tol)
            details.update({"log_i_value": lb.log_i_value,
                            "i_value": _json_number(lb.i_value),
                            "lambda_star": lb.lambda_star, "phi_min": lb.phi_min.min_value})
    if args.format == "json":
        payload = row.as_dict()
        payload.update({"n": args.n, "d": args.d, "status": b.status.value,
                        "class": classify(args.r, args.n, args.d).value})
        payload.update(details)
        return json.dumps(payload, indent=2) + "\n"
    if args.format == "csv":
        return render_rows([row], "csv")
    lines = [f"r = {_fmt_r(args.r)}, n = {args.n:g}, d = {args.d}"
             f"  [{classify(args.r, args.n, args.d).value}]"]
    if row.sharp:
        lines.append(f"S = S+ = {row.s_plus_rounded}  ({row.s_plus!r}), sharp constant")
    else:
        lines.append(f"S+ = {row.s_plus_rounded}  ({row.s_plus!r})")
        if row.s_minus is not None:
            lines.append(f"S- = {row.s_minus_rounded}  ({row.s_minus!r})")
        if row.rel_uncertainty is not None:
            lines.append(f"relative uncertainty (S+ - S-)/S- = {row.rel_uncertainty:.6g}")
    lines.append(f"status: {b.status.value.upper()}")
    for key, value in details.items():
        lines.append(f"  {key} = {value!r}")
    return "\n".join(lines) + "\n"


def cmd_table(args: argparse.Namespace) -> str:
    if args.case == "custom":
        if args.n is None or args.d is None or not args.r:
            raise _UsageError("table custom needs --n, --d and at least one --r")
        n, d, rs = args.n, args.d, tuple(args.r)
        title = f"custom table: n = {n:g}, d = {d}"
    else:
        n, d, rs = TABLE_CASES[args.case]
        title = f"case {args.case}: n = {n:g}, d = {d}"
    rows = compute_rows(n, d, rs, abs_tol=args.abs_tol, rel_tol=args.rel_tol, jobs=args.jobs)
    return render_rows(rows, args.format, title)


def sweep_grid(r_min: float, r_max: float, steps: int) -> list[float]:
    ratio = (r_max / r_min) ** (1.0 / (steps - 1))
    grid = [r_min * ratio**i for i in range(steps)]
    grid[-1] = r_max
    return grid


def cmd_sweep(args: argparse.Namespace) -> str:
    if not (2 < args.r_min < args.r_max < math.inf) or args.steps < 2:
        raise _UsageError("sweep needs 2 < r_min < r_max < inf and steps >= 2")
    rs = sweep_grid(args.r_min, args.r_max, args.steps)
    rows = compute_rows(args.n, args.d, rs, abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                        jobs=args.jobs)
    return render_rows(rows, args.format, f"sweep: n = {args.n:g}, d = {args.d}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobolev-bounds",
        description="Two-sided bounds on the sharp constants of H^n(R^d) -> L^r(R^d).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table",
                        help="output format (default: table)")
    common.add_argument("--abs-tol", type=_positive_float, default=numerics.DEFAULT_ABS_TOL,
                        help="absolute quadrature tolerance")
    common.add_argument("--rel-tol", type=_positive_float, default=numerics.DEFAULT_REL_TOL,
                        help="relative quadrature tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", parents=[common], help="bracket for one (r, n, d)")
    p_bound.add_argument("--r", type=parse_r, required=True, help="exponent in [2, inf]; 'inf' allowed")
    p_bound.add_argument("--n", type=float, required=True, help="Sobolev order (may be fractional)")
    p_bound.add_argument("--d", type=_positive_int, required=True, help="space dimension")
    p_bound.add_argument("--verbose", action="store_true", help="also print intermediates")
    p_bound.set_defaults(handler=cmd_bound)

    p_table = sub.add_parser("table", parents=[common], help="worked-example or custom table")
    p_table.add_argument("case", choices=("A", "B", "C", "D", "custom"),
                         help="built-in case, or 'custom' with --n, --d and --r")
    p_table.add_argument("--n", type=float, help="Sobolev order (custom only)")
    p_table.add_argument("--d", type=_positive_int, help="space dimension (custom only)")
    p_table.add_argument("--r", type=parse_r, nargs="+", action="extend",
                         help="exponents (custom only)")
    p_table.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    p_table.set_defaults(handler=cmd_table)

    p_sweep = sub.add_parser("sweep", parents=[common], help="log-spaced sweep over r")
    p_sweep.add_argument("--n", type=float, required=True, help="Sobolev order")
    p_sweep.add_argument("--d", type=_positive_int, required=True, help="space dimension")
    p_sweep.add_argument("--r-min", type=float, required=True, help="smallest r, above 2")
    p_sweep.add_argument("--r-max", type=float, required=True, help="largest r, finite")
    p_sweep.add_argument("--steps", type=int, default=50, help="number of r values (>= 2)")
    p_sweep.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    p_sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help (0) and on usage errors (2)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        output = args.handler(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
