"""Command-line front end: one subcommand per computation, CSV or JSON out.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
"""

import argparse
import math
import sys

from . import __version__
from .arith_tables import build_tables
from .correlations import (DEFAULT_EPS, DEFAULT_PRIME_BOUND, REPORT_COLUMNS, diagonal_sum,
                           interval_bounds, mixed_correlation, offdiagonal_sum, singular_series)
from .dirichlet_series import F_z_growth_scan
from .errors import DomainError
from .interval_variance import build_psi, variance_integral, variance_predictions
from .reduction import THREADS_ENV
from .reporting import emit_report, parse_grid
from .sieve_core import compute_rho_table, lambda_batch, save_cache
from .zeros_form_factor import form_factor, load_zeros, montgomery_prediction, reference_curves

FF_COLUMNS = ("alpha", "F", "montgomery_prediction", "ggos_lower", "thm110_lower", "ah_line",
              "conjecture")
VARIANCE_COLUMNS = ("range", "X", "h", "integral", "conjecture", "gy_lower", "thm113_lower",
                    "ratio_to_conjecture")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_z(X):
    return max(1, round(X**0.4))


def _require(cond, message):
    if not cond:
        raise DomainError(message)


def cmd_tables(a):
    t = build_tables(a.N)
    vm = t.von_mangoldt(a.N)
    rows = [{"n": n, "mobius": int(t.mobius[n]), "euler_phi": int(t.euler_phi[n]),
             "least_prime_factor": int(t.least_prime_factor[n]), "von_mangoldt": float(vm[n])}
            for n in range(1, a.N + 1)]
    return rows, ("n", "mobius", "euler_phi", "least_prime_factor", "von_mangoldt"), None


def cmd_rho(a):
    w = compute_rho_table(a.z, exact=a.exact)
    cols = ("d", "rho", "rho_exact") if a.exact else ("d", "rho")
    rows = []
    for d in range(1, a.z + 1):
        row = {"d": d, "rho": float(w.rho[d])}
        if a.exact:
            row["rho_exact"] = str(w.exact[d])
        rows.append(row)
    if a.cache:
        save_cache(w, a.cache)
    return rows, cols, {"z": a.z, "sup_bound": w.sup_bound}


def cmd_lambda(a):
    _require(a.z <= a.X, f"z = {a.z} exceeds X = {a.X}")
    series = lambda_batch(a.X, compute_rho_table(a.z), a.threads)
    if a.cache:
        save_cache(series, a.cache)
    rows = [{"n": n, "lambda": float(series.values[n])} for n in range(1, a.X + 1)]
    return rows, ("n", "lambda"), {"X": a.X, "z": a.z}


def cmd_corr(a):
    z = a.z or _default_z(a.X)
    for k in a.k:
        interval_bounds(a.X, k)
    series = lambda_batch(a.X, compute_rho_table(z), a.threads)
    rows = [offdiagonal_sum(series, k, a.P, a.eps, a.threads) for k in a.k]
    return rows, REPORT_COLUMNS, None


def cmd_diag(a):
    rows = []
    for X in a.X:
        _require(X >= 1, f"X must be >= 1, got {X}")
    for X in a.X:
        z = a.z or _default_z(X)
        _require(z <= X, f"z = {z} exceeds X = {X}")
        series = lambda_batch(X, compute_rho_table(z), a.threads)
        rows.append(diagonal_sum(series, a.eps, a.threads))
    return rows, REPORT_COLUMNS, None


def cmd_mixed(a):
    z = a.z or _default_z(a.X)
    for k in a.k:
        if k:
            interval_bounds(a.X, k)
    tables = build_tables(a.X + max(abs(k) for k in a.k))
    weights = compute_rho_table(z, tables)
    rows = [mixed_correlation(tables, weights, a.X, k, a.P, a.eps, a.threads) for k in a.k]
    return rows, REPORT_COLUMNS, None


def cmd_sing(a):
    rows = []
    for k in a.k:
        v = singular_series(k, a.P)
        rows.append({"k": v.k, "value": v.value, "truncation_prime_bound": v.truncation_prime_bound,
                     "tail_bound": v.tail_bound})
    return rows, ("k", "value", "truncation_prime_bound", "tail_bound"), None


def cmd_dirichlet(a):
    _require(0.5 < a.sigma < 1, f"sigma must lie in (1/2, 1), got {a.sigma}")
    scan = F_z_growth_scan(compute_rho_table(a.z), a.sigma, a.t, a.threads)
    rows = [{"t": t, "abs_F": v, "envelope": env} for t, v, env in scan]
    return rows, ("t", "abs_F", "envelope"), {"z": a.z, "sigma": a.sigma}


def cmd_ff(a):
    _require(all(x >= 0 for x in a.alpha), "alpha grid values must be >= 0")
    zeros = load_zeros(a.zeros)
    curve = form_factor(zeros, a.T, a.alpha, a.cutoff, a.threads)
    rows = []
    for alpha, value, ref in zip(curve.alphas, curve.values, reference_curves(curve.alphas)):
        pred = montgomery_prediction(float(alpha), curve.T)
        rows.append({"alpha": float(alpha), "F": float(value),
                     "montgomery_prediction": pred.value if pred.valid else None,
                     "ggos_lower": ref["ggos_lower"], "thm110_lower": ref["thm110_lower"],
                     "ah_line": ref["ah_line"], "conjecture": ref["conjecture"]})
    meta = {"T": curve.T, "zero_count": curve.zero_count, "cutoff": curve.pair_cutoff,
            "truncation_bound": curve.truncation_bound, "source": curve.source}
    return rows, FF_COLUMNS, meta


RANGES = {"0-X": (0, 1), "X-2X": (1, 2)}


def cmd_variance(a):
    names = list(RANGES) if a.range == "both" else [a.range]
    for h in a.h:
        _require(0 < h < a.X, f"need 0 < h < X, got h = {h}")
    top = max(RANGES[r][1] for r in names) * a.X + max(a.h)
    psi = build_psi(math.ceil(top), build_tables(math.ceil(top)))
    rows = []
    for name in names:
        lo, hi = RANGES[name]
        for h in a.h:
            integral = variance_integral(psi, lo * a.X, hi * a.X, h)
            conj, gy, thm = variance_predictions(a.X, h)
            rows.append({"range": name, "X": a.X, "h": h, "integral": integral,
                         "conjecture": conj, "gy_lower": gy, "thm113_lower": thm,
                         "ratio_to_conjecture": integral / conj})
    return rows, VARIANCE_COLUMNS, None


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    # show defaults only where there is one worth printing
    def _get_help_string(self, action):
        if action.default is None or action.required or action.default is False:
            return action.help
        return super()._get_help_string(action)


def build_parser():
    fmt = _HelpFormatter
    parser = argparse.ArgumentParser(prog="selberg-lab", formatter_class=fmt,
                                     description="Selberg sieve weights, prime correlations, "
                                                 "zero pair correlation and prime variance.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output file path ('-' is standard output)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="report format")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help=f"worker threads (count); falls back to ${THREADS_ENV}, then 1")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], formatter_class=fmt, help=help_text,
                           description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("tables", cmd_tables, "Mobius, Euler phi, least prime factor and Lambda for n <= N.")
    p.add_argument("--N", type=_positive_int, required=True, help="table limit (integer)")

    p = add("rho", cmd_rho, "Selberg weights rho_{z,d} for d <= z.")
    p.add_argument("--z", type=_positive_int, required=True, help="sieve level (integer)")
    p.add_argument("--exact", action="store_true", help="exact rational weights (z <= 200)")
    p.add_argument("--cache", default=None, help="also write the weights to this binary cache")

    p = add("lambda", cmd_lambda, "Divisor sums lambda_z(n) for n <= X.")
    p.add_argument("--X", type=_positive_int, required=True, help="range end (integer)")
    p.add_argument("--z", type=_positive_int, required=True, help="sieve level (integer)")
    p.add_argument("--cache", default=None, help="also write the values to this binary cache")

    def corr_opts(p, k_default, k_required=False):
        p.add_argument("--X", type=_positive_int, required=True, help="range end (integer)")
        p.add_argument("--z", type=_positive_int, default=None,
                       help="sieve level (integer); default round(X^0.4)")
        p.add_argument("--k", type=_int_list, required=k_required, default=k_default,
                       help="shift(s), comma-separated integers")
        p.add_argument("--P", type=_positive_int, default=DEFAULT_PRIME_BOUND,
                       help="prime bound for the singular series product (integer)")
        p.add_argument("--eps", type=float, default=DEFAULT_EPS,
                       help="exponent slack in the claimed error bound (dimensionless)")

    corr_opts(add("corr", cmd_corr, "sum lambda(n) lambda(n+k) against S(k)(X - |k|)."),
              None, k_required=True)
    corr_opts(add("mixed", cmd_mixed, "sum lambda(n) Lambda(n+k) against its main term."), [0])

    p = add("diag", cmd_diag, "sum lambda(n)^2 against X L(z).")
    p.add_argument("--X", type=_int_list, required=True,
                   help="range end(s), comma-separated integers")
    p.add_argument("--z", type=_positive_int, default=None,
                   help="sieve level (integer); default round(X^0.4) per X")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS,
                   help="exponent slack in the claimed error bound (dimensionless)")

    p = add("sing", cmd_sing, "Hardy-Littlewood singular series S(k).")
    p.add_argument("--k", type=_int_list, required=True, help="shift(s), comma-separated integers")
    p.add_argument("--P", type=_positive_int, default=DEFAULT_PRIME_BOUND,
                   help="prime bound for the Euler product (integer)")

    p = add("dirichlet", cmd_dirichlet, "|F_z(sigma + it)| along a grid of t.")
    p.add_argument("--z", type=_positive_int, required=True, help="sieve level (integer)")
    p.add_argument("--sigma", type=float, default=0.75, help="real part, in (1/2, 1)")
    p.add_argument("--t", type=_grid, default="0:50:5",
                   help="imaginary parts, start:stop:step or comma list")

    p = add("ff", cmd_ff, "Pair correlation form factor F_T(alpha) with reference lines.")
    p.add_argument("--zeros", required=True, help="zero table (one ordinate per line, .gz ok)")
    p.add_argument("--alpha", type=_grid, default="0:2:0.05",
                   help="alpha grid, start:stop:step or comma list (dimensionless)")
    p.add_argument("--T", type=float, default=None,
                   help="height (ordinate units); default the table coverage")
    p.add_argument("--cutoff", type=float, default=None,
                   help="drop pairs with |g - g'| above this (ordinate units); default none (exact)")

    p = add("variance", cmd_variance, "Integral of (psi(x+h) - psi(x) - h)^2 with predictions.")
    p.add_argument("--X", type=_positive_int, required=True, help="scale X (integer)")
    p.add_argument("--h", type=_float_list, required=True,
                   help="interval length(s), comma-separated (same units as X)")
    p.add_argument("--range", choices=("0-X", "X-2X", "both"), default="both",
                   help="integration range [0, X], [X, 2X] or both")
    return parser


def run(argv=None):
    """Parse ``argv``, run one subcommand, write its report; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rows, columns, meta = args.func(args)
        emit_report(rows, args.format, args.out, columns=columns, meta=meta)
    except (DomainError, ValueError, OSError) as exc:
        print(f"selberg-lab {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))
