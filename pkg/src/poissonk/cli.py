"""Command-line front end.

Exit codes: 0 success, 2 bad usage or parameters, 3 precision failure,
4 a conjecture check failed.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import stats
from .core import EXTENDED_DIGITS, DistParams, pmf_series
from .errors import DataIntegrityError, InvalidParamsError, PrecisionError, UnsupportedRangeError
from .fitting import linear_fit, power_law_fit
from .report import ReportRow, fmt_lambda, fmt_scaled, fmt_value, read_rows, write_rows
from .search import (
    check_k_plus_one,
    check_mode_conjecture,
    check_single_interval,
    conjecture_samples,
    excluded_values,
    first_double_mode,
    mode_breakpoints,
    root_rk,
    scan_multimodal,
    unit_root,
)
from .search.excluded import SINGLE_INTERVAL_FROM
from .search.roots import ROOT_TOL

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_CONJECTURE = 4

# k ranges of the four excluded-value tables
TABLE_RANGES = ((1, 2, 14), (2, 15, 28), (3, 29, 37), (4, 38, 41))


class ConjectureFailure(Exception):
    pass


def _fmt_set(s):
    return " ".join(str(n) for n in sorted(s))


def _row(kind, **cols):
    return ReportRow(kind, tuple(cols.items()))


def _double_mode_row(r):
    return _row(
        "double-mode",
        k=r.k,
        kappa=r.kappa,
        m_hat=r.m_hat,
        lambda_hat=fmt_lambda(r.lambda_hat),
        r_k=fmt_lambda(r.r_k),
        mean=fmt_lambda(r.mean),
        mean_minus_m_hat=fmt_lambda(r.mean - r.m_hat),
        runner_up_gap=fmt_value(r.runner_up_gap),
    )


def _k_range(args):
    if args.k_min > args.k_max:
        raise InvalidParamsError(f"--k-min {args.k_min} exceeds --k-max {args.k_max}")
    return range(args.k_min, args.k_max + 1)


def cmd_pmf(args):
    params = DistParams(args.k, args.lam)
    s = pmf_series(params, args.n_max)
    h_log = s.log_scale + params.k * params.lam
    for n, v in enumerate(s.values):
        yield _row("pmf", n=n, pmf=fmt_scaled(float(v), s.log_scale), h=fmt_scaled(float(v), h_log))


def cmd_stats(args):
    p = DistParams(args.k, args.lam)
    m = stats.mode(p, digits=args.digits)
    yield _row(
        "stats",
        k=p.k,
        **{"lambda": fmt_lambda(p.lam)},
        mean=fmt_value(stats.mean(p)),
        variance=fmt_value(stats.variance(p)),
        median=stats.median(p, digits=args.digits),
        modes=_fmt_set(m.modes),
        peak_pmf=fmt_value(m.peak_value),
    )


def cmd_root(args):
    if args.n is None:
        lam = root_rk(args.k, args.tol, args.digits)
        yield _row("root", k=args.k, n=args.k, root=fmt_lambda(lam))
    else:
        lam = unit_root(args.k, args.n, args.tol, args.digits)
        yield _row("root", k=args.k, n=args.n, root=fmt_lambda(lam))


def cmd_double_mode(args):
    for k in _k_range(args):
        yield _double_mode_row(first_double_mode(k, args.tol, args.digits))


def cmd_excluded(args):
    r = excluded_values(args.k, args.n_upper, args.tol, args.digits)
    yield _row("excluded", k=r.k, n_upper=r.n_upper, source=r.ceiling_source.value, intervals=r.format())


def _table_cell(iv):
    lo, hi = iv
    return str(lo) if lo == hi else f"[{lo},{hi}]"


def cmd_tables(args):
    ks = _k_range(args)
    if ks.start < 2 or ks.stop - 1 > 41:
        raise InvalidParamsError("the excluded-value tables cover 2 <= k <= 41")
    for k in ks:
        table = next(t for t, a, b in TABLE_RANGES if a <= k <= b)
        ivs = [_table_cell(iv) for iv in excluded_values(k, tol=args.tol, digits=args.digits).intervals]
        ivs += [""] * (3 - len(ivs))
        yield _row("tables", table=table, k=k, interval_1=ivs[0], interval_2=ivs[1], interval_3=ivs[2])


def cmd_breakpoints(args):
    b = mode_breakpoints(args.k, args.lambda_max, args.tol, digits=args.digits)
    for i, (lam, tie, width) in enumerate(zip(b.breakpoints, b.tie_sets, b.widths)):
        yield _row(
            "breakpoints",
            k=b.k,
            index=i,
            **{"lambda": fmt_lambda(lam)},
            tie_set=_fmt_set(tie),
            mode_after=_fmt_set(b.mode_sets[i + 1]),
            width=fmt_value(width),
        )


def cmd_multimodal(args):
    for c in scan_multimodal(args.k, args.lambda_max, args.arity, args.tol, digits=args.digits):
        yield _row("multimodal", k=args.k, **{"lambda": fmt_lambda(c.lam)}, modes=_fmt_set(c.modes), ambiguous=c.ambiguous)


def cmd_fit(args):
    try:
        with open(args.input, encoding="utf-8") as fh:
            rows = read_rows(fh.read())
    except OSError as exc:
        raise InvalidParamsError(f"cannot read {args.input}: {exc}")
    if not rows:
        raise InvalidParamsError(f"{args.input}: no data rows")
    x_col = args.x or list(rows[0])[0]
    y_col = args.y or list(rows[0])[1]
    try:
        pts = [(float(r[x_col]), float(r[y_col])) for r in rows]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParamsError(f"{args.input}: malformed input for columns {x_col!r}, {y_col!r}: {exc}")
    fit = power_law_fit(pts) if args.model == "powerlaw" else linear_fit(pts)
    a, b = fit.coefficients
    yield _row(
        "fit",
        model=fit.model.value,
        x=x_col,
        y=y_col,
        a=fmt_value(a),
        b=fmt_value(b),
        residual=fmt_value(fit.residual),
        n_points=fit.n_points,
        x_min=fmt_value(fit.domain[0]),
        x_max=fmt_value(fit.domain[1]),
    )


def _verdict(ok):
    if ok is None:
        return "n/a"
    return "pass" if ok else "fail"


def cmd_conjectures(args):
    failed = []
    for k in _k_range(args):
        if k < 2:
            raise InvalidParamsError("conjecture checks need k >= 2")
        formula = all(check_mode_conjecture(k, n, args.digits) for n in conjecture_samples(k, args.samples))
        report = excluded_values(k, tol=args.tol, digits=args.digits)
        single = None
        if k >= SINGLE_INTERVAL_FROM:
            single = check_single_interval(k, report, first_double_mode(k, args.tol, args.digits).m_hat)
        kp1 = check_k_plus_one(k, report)
        row = _row(
            "conjectures",
            k=k,
            mode_formula=_verdict(formula),
            single_interval=_verdict(single),
            k_plus_one=_verdict(kp1),
            intervals=report.format(),
        )
        yield row
        if not formula or single is False or not kp1:
            failed.append(k)
    if failed:
        raise ConjectureFailure(f"conjecture checks failed for k = {failed}")


def cmd_figure(args):
    if args.id == 1:
        k = 50 if args.k is None else args.k
        r = first_double_mode(k, args.tol, args.digits)
        s = pmf_series(DistParams(k, r.lambda_hat), args.n_max if args.n_max is not None else r.n_ceiling)
        h_log = s.log_scale + k * r.lambda_hat
        for n, v in enumerate(s.values):
            yield _row("figure1", n=n, h=fmt_scaled(float(v), h_log))
        return
    for k in _k_range(args):
        r = first_double_mode(k, args.tol, args.digits)
        if args.id == 2:
            yield _row("figure2", k=k, m_hat=r.m_hat)
        elif args.id == 3:
            yield _row("figure3", k=k, kappa=r.kappa, m_hat=r.m_hat)
        elif args.id == 4:
            yield _row("figure4", k=k, mean=fmt_lambda(r.mean), m_hat=r.m_hat)
        else:
            yield _row("figure5", k=k, mean_minus_m_hat=fmt_lambda(r.mean - r.m_hat))


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default: standard output)")
    common.add_argument("--tol", type=float, default=ROOT_TOL, help="root bracket width")
    common.add_argument("--digits", type=int, default=EXTENDED_DIGITS, help="extended-precision digits")

    parser = argparse.ArgumentParser(prog="poissonk", description="Poisson distribution of order k")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", parents=[common], help="pmf and h values")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("stats", parents=[common], help="mean, variance, median, modes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("root", parents=[common], help="r_k, or the unit root of h_k(n; .) with --n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_root)

    p = sub.add_parser("double-mode", parents=[common], help="first double mode per k")
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.set_defaults(func=cmd_double_mode)

    p = sub.add_parser("excluded", parents=[common], help="integers that are never modes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-upper", type=int, default=None)
    p.set_defaults(func=cmd_excluded)

    p = sub.add_parser("tables", parents=[common], help="the four excluded-value tables")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=41)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("breakpoints", parents=[common], help="mode breakpoints in lambda")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.set_defaults(func=cmd_breakpoints)

    p = sub.add_parser("multimodal", parents=[common], help="breakpoints with many tied modes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--arity", type=int, default=3)
    p.set_defaults(func=cmd_multimodal)

    p = sub.add_parser("fit", parents=[common], help="power-law or linear fit of two columns")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=("powerlaw", "linear"), required=True)
    p.add_argument("--x", default=None, help="abscissa column (default: first)")
    p.add_argument("--y", default=None, help="ordinate column (default: second)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("conjectures", parents=[common], help="numerical checks of the mode conjectures")
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--samples", type=_positive_int, default=10)
    p.set_defaults(func=cmd_conjectures)

    p = sub.add_parser("figure", parents=[common], help="data behind figures 1-5")
    p.add_argument("--id", type=int, choices=(1, 2, 3, 4, 5), required=True)
    p.add_argument("--k", type=int, default=None, help="order for figure 1 (default 50)")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=cmd_figure)
    return parser


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows = list(_collect(args))
    except ConjectureFailure as exc:
        with _output(args.out) as out:
            write_rows(exc.args[1], out, args.format)
        print(f"poissonk: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONJECTURE
    except (InvalidParamsError, UnsupportedRangeError, DataIntegrityError) as exc:
        print(f"poissonk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"poissonk: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    with _output(args.out) as out:
        write_rows(rows, out, args.format)
    return EXIT_OK


def _collect(args):
    rows = []
    try:
        for row in args.func(args):
            rows.append(row)
    except ConjectureFailure as exc:
        raise ConjectureFailure(str(exc), rows)
    return rows


if __name__ == "__main__":
    sys.exit(main())
