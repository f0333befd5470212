"""Command-line front end: exact evaluation, convergence studies, Monte Carlo.

Subcommands
-----------
exact          f(N;mu,nu) and c(N) = f(N)/N! by one of four independent routes
               (full five-sequence recursion, condensed recursion, generating
               function series, contour quadrature).
converge       CSV of the scaled prelimit against the sine-kernel limit over a
               list of matrix sizes.
mc             Monte Carlo estimate of f(N;mu,nu) for a shipped entry law,
               compared against the exact recursion with a z-score.
ratio          CSV of normalized correlation ratios (raw or centered) against
               the sinc limit.
contour-check  Alias of ``exact --route contour``.

Conventions
-----------
Numeric arguments accept decimal literals and exact fractions ("3/4"); they
are parsed once at the maximum precision tier and rounded into the active
context, so the same literal denotes the same number at every tier.  Output
numbers use the shortest decimal form that re-reads to the same value at the
active precision, capped at 25 significant digits.  CSV files have one header
row, comma separators, and LF line endings.  Exit codes: 0 success, 2 usage or
domain error, 3 numerical error (the failing module is named on stderr).
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpfr

from .domain import (
    PRECISION_TIERS,
    DomainValidationError,
    NumericalComputationError,
    ScaledWindow,
    SHIPPED_PROFILES,
    precision_bits,
    to_mpfr,
)
from . import asymptotics, montecarlo, recursion, series

_MODULE = "cli"

MAX_SIGNIFICANT_DIGITS = 25

# Tolerances a run may override via --tol NAME=VALUE.  Names outside this
# registry are rejected while the command line is parsed.
KNOWN_TOLERANCES: Dict[str, float] = {
    "contour_residue": 1e-20,  # relative imaginary residue gate, contour route
}

ROUTES = ("full", "condensed", "series", "contour")


@dataclass(frozen=True)
class RunConfig:
    """Per-invocation plumbing: precision tier, seed, output, tolerances."""

    precision_bits: int
    seed: int
    output_path: Optional[str]
    tolerances: Dict[str, float]

    def __post_init__(self):
        if self.precision_bits not in PRECISION_TIERS:
            raise DomainValidationError(
                f"precision must be one of {PRECISION_TIERS}, got {self.precision_bits}",
                module=_MODULE,
            )
        for name in self.tolerances:
            if name not in KNOWN_TOLERANCES:
                raise DomainValidationError(
                    f"unknown tolerance {name!r}; known: {sorted(KNOWN_TOLERANCES)}",
                    module=_MODULE,
                )


def _shortest_digits(x) -> Tuple[str, int, bool]:
    """Fewest significant digits that re-read to x in the active context.

    Returns (digits, exp, negative) with value = 0.<digits> * 10^exp.  The
    scan is capped at MAX_SIGNIFICANT_DIGITS; past the cap the digit string
    is the correctly rounded 25-digit rendering instead of a round trip.
    """
    for count in range(2, MAX_SIGNIFICANT_DIGITS + 1):
        digits, exp, _ = x.digits(10, count)
        sign = "-" if digits.startswith("-") else ""
        if mpfr(f"{sign}0.{digits.lstrip('-')}e{exp}") == x:
            break
    else:
        digits, exp, _ = x.digits(10, MAX_SIGNIFICANT_DIGITS)
    negative = digits.startswith("-")
    if negative:
        digits = digits[1:]
    return digits.rstrip("0") or "0", exp, negative


def format_real(value) -> str:
    """Shortest-roundtrip decimal text, capped at 25 significant digits.

    Below the cap the digit string re-reads to the exact stored value at the
    active precision (the 53-bit tier always fits); above it the value is
    correctly rounded to 25 digits.
    """
    x = to_mpfr(value)
    if gmpy2.is_nan(x):
        return "nan"
    if not gmpy2.is_finite(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    digits, exp, negative = _shortest_digits(x)
    # value = 0.<digits> * 10^exp; render positionally in a modest range
    if -4 < exp <= 17:
        if exp <= 0:
            body = "0." + "0" * (-exp) + digits
        elif exp >= len(digits):
            body = digits + "0" * (exp - len(digits))
        else:
            body = digits[:exp] + "." + digits[exp:]
    else:
        head = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
        body = f"{head}e{exp - 1:+d}"
    return ("-" + body) if negative else body


# plain decimal literals only: the mpfr constructor is laxer (hex floats,
# digit underscores, empty text as zero), which a CLI should not admit
_DECIMAL_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\Z")


def parse_real(text: str) -> mpfr:
    """Parse a decimal or p/q literal at the maximum precision tier."""
    try:
        with precision_bits(PRECISION_TIERS[-1]):
            if "/" in text:
                frac = Fraction(text)
                return to_mpfr(frac)
            if not _DECIMAL_RE.match(text):
                raise ValueError(text)
            value = mpfr(text)
    except (ValueError, ZeroDivisionError):
        raise DomainValidationError(f"not a real number: {text!r}", module=_MODULE)
    if not gmpy2.is_finite(value):
        raise DomainValidationError(f"value must be finite: {text!r}", module=_MODULE)
    return value


def _real_arg(text: str) -> mpfr:
    try:
        return parse_real(text)
    except DomainValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be >= 1, got 0")
    return value


def _n_list(text: str) -> List[int]:
    items = [piece for piece in text.split(",") if piece.strip() != ""]
    if not items:
        raise argparse.ArgumentTypeError("the N list must be non-empty")
    try:
        return [int(piece) for piece in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N list: {text!r}")


def _tol_entry(text: str) -> Tuple[str, float]:
    name, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in KNOWN_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"unknown tolerance {name!r}; known: {sorted(KNOWN_TOLERANCES)}"
        )
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {raw!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {value}")
    return name, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigdet",
        description=(
            "Second-order correlations of Wigner characteristic polynomials: "
            "exact routes, Monte Carlo, and sine-kernel convergence tables."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision", type=int, choices=PRECISION_TIERS, default=128,
        help="working precision in mantissa bits (default 128)",
    )
    common.add_argument(
        "--out", metavar="PATH", default=None,
        help="write the report/CSV to PATH instead of stdout",
    )
    common.add_argument(
        "--seed", type=_nonneg_int, default=0,
        help="base seed for sampling commands (default 0)",
    )
    common.add_argument(
        "--tol", dest="tol_entries", action="append", type=_tol_entry,
        metavar="NAME=VALUE", default=None,
        help=f"override a named tolerance; known: {sorted(KNOWN_TOLERANCES)}",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser(
        "exact", parents=[common],
        help="evaluate f(N;mu,nu) and c(N) by one route",
    )
    p_exact.add_argument("--n", type=_nonneg_int, required=True, help="matrix size N")
    p_exact.add_argument("--mu", type=_real_arg, required=True, help="first spectral point")
    p_exact.add_argument("--nu", type=_real_arg, required=True, help="second spectral point")
    p_exact.add_argument("--b", type=_real_arg, required=True, help="fourth moment of the entry law")
    p_exact.add_argument("--route", choices=ROUTES, required=True, help="evaluation route")

    p_check = sub.add_parser(
        "contour-check", parents=[common],
        help="alias of 'exact --route contour'",
    )
    p_check.add_argument("--n", type=_nonneg_int, required=True, help="matrix size N (>= 2)")
    p_check.add_argument("--mu", type=_real_arg, required=True, help="first spectral point")
    p_check.add_argument("--nu", type=_real_arg, required=True, help="second spectral point")
    p_check.add_argument("--b", type=_real_arg, required=True, help="fourth moment of the entry law")

    p_conv = sub.add_parser(
        "converge", parents=[common],
        help="CSV of scaled prelimits against the sine-kernel limit",
    )
    p_conv.add_argument("--xi", type=_real_arg, required=True, help="bulk location, |xi| < 2")
    p_conv.add_argument("--mu-off", type=_real_arg, required=True, help="window offset of mu")
    p_conv.add_argument("--nu-off", type=_real_arg, required=True, help="window offset of nu")
    p_conv.add_argument("--b", type=_real_arg, required=True, help="fourth moment of the entry law")
    p_conv.add_argument("--n-list", type=_n_list, required=True, metavar="N1,N2,...",
                        help="comma-separated matrix sizes, each >= 2")
    p_conv.add_argument("--gnuplot", action="store_true",
                        help="also write a plot script next to --out")

    p_mc = sub.add_parser(
        "mc", parents=[common],
        help="Monte Carlo estimate with exact reference and z-score",
    )
    p_mc.add_argument("--n", type=_pos_int, required=True, help="matrix size N")
    p_mc.add_argument("--mu", type=_real_arg, required=True, help="first spectral point")
    p_mc.add_argument("--nu", type=_real_arg, required=True, help="second spectral point")
    p_mc.add_argument("--q-label", choices=sorted(SHIPPED_PROFILES), required=True,
                      help="entry law")
    p_mc.add_argument("--n-samples", type=_pos_int, default=100000,
                      help="number of sample matrices (default 100000)")

    p_ratio = sub.add_parser(
        "ratio", parents=[common],
        help="CSV of normalized correlation ratios against the sinc limit",
    )
    p_ratio.add_argument("--xi", type=_real_arg, required=True, help="bulk location, |xi| < 2")
    p_ratio.add_argument("--mu-off", type=_real_arg, required=True, help="window offset of mu")
    p_ratio.add_argument("--nu-off", type=_real_arg, required=True, help="window offset of nu")
    p_ratio.add_argument("--b", type=_real_arg, required=True, help="fourth moment of the entry law")
    p_ratio.add_argument("--n-list", type=_n_list, required=True, metavar="N1,N2,...",
                         help="comma-separated matrix sizes, each >= 2")
    p_ratio.add_argument("--centered", action="store_true",
                         help="use covariance-centered correlations")
    p_ratio.add_argument("--gnuplot", action="store_true",
                         help="also write a plot script next to --out")

    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    tolerances = dict(KNOWN_TOLERANCES)
    for name, value in args.tol_entries or []:
        tolerances[name] = value
    return RunConfig(
        precision_bits=args.precision,
        seed=args.seed,
        output_path=args.out,
        tolerances=tolerances,
    )


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _require_out_for_gnuplot(args: argparse.Namespace) -> None:
    if args.gnuplot and not args.out:
        raise DomainValidationError(
            "--gnuplot writes a script next to the CSV, so --out is required",
            module=_MODULE,
        )


def _gnuplot_converge(csv_name: str) -> str:
    return "\n".join([
        f"# deviation of the scaled correlation from its limit ({csv_name})",
        'set datafile separator ","',
        "set terminal pngcairo size 900,600",
        f'set output "{csv_name}.png"',
        "set logscale xy",
        'set xlabel "matrix size N"',
        'set ylabel "deviation from the sine-kernel limit"',
        f'plot "{csv_name}" skip 1 using 1:4 with linespoints title "absolute", \\',
        f'     "{csv_name}" skip 1 using 1:5 with linespoints title "relative"',
        "",
    ])


def _gnuplot_ratio(csv_name: str) -> str:
    return "\n".join([
        f"# normalized correlation ratio against the sinc limit ({csv_name})",
        'set datafile separator ","',
        "set terminal pngcairo size 900,600",
        f'set output "{csv_name}.png"',
        "set logscale x",
        'set xlabel "matrix size N"',
        'set ylabel "normalized ratio"',
        f'plot "{csv_name}" skip 1 using 1:2 with linespoints title "ratio", \\',
        f'     "{csv_name}" skip 1 using 1:3 with lines dashtype 2 title "limit"',
        "",
    ])


Extras = List[Tuple[str, str]]


def _run_exact(args: argparse.Namespace, cfg: RunConfig, route: str) -> Tuple[str, Extras]:
    N = args.n
    mu = to_mpfr(args.mu)
    nu = to_mpfr(args.nu)
    b = to_mpfr(args.b)
    residue = None
    if route == "full":
        state = recursion.full_system(N, mu, nu, b)
        f_value = state.f[N]
        c_value = f_value / gmpy2.factorial(N)
    elif route == "condensed":
        state = recursion.condensed(N, mu, nu, b)
        f_value = state.f(N)
        c_value = state.c[N]
    elif route == "series":
        F = series.egf_F(mu, nu, b, N)
        f_value = series.coeff_to_f(F, N)
        c_value = F.coeffs[N]
    else:
        plan = asymptotics.default_contour_plan(N)
        c_value, residue = asymptotics.contour_coefficient_diag(
            mu, nu, b, plan, imag_rel_tol=cfg.tolerances["contour_residue"]
        )
        f_value = gmpy2.factorial(N) * c_value
    lines = [
        f"route = {route}",
        f"precision = {cfg.precision_bits}",
        f"N = {N}",
        f"mu = {format_real(mu)}",
        f"nu = {format_real(nu)}",
        f"b = {format_real(b)}",
        f"f = {format_real(f_value)}",
        f"c = {format_real(c_value)}",
    ]
    if residue is not None:
        lines.append(f"residue = {format_real(residue)}")
    return "\n".join(lines) + "\n", []


def _run_converge(args: argparse.Namespace, cfg: RunConfig) -> Tuple[str, Extras]:
    _require_out_for_gnuplot(args)
    window = ScaledWindow(
        xi=to_mpfr(args.xi), mu_off=to_mpfr(args.mu_off), nu_off=to_mpfr(args.nu_off)
    )
    b = to_mpfr(args.b)
    rows = asymptotics.convergence_study(window, b, args.n_list)
    csv_rows = []
    for row in rows:
        rel_dev = row.abs_dev / abs(row.limit)
        csv_rows.append([
            str(row.N),
            format_real(row.prelimit),
            format_real(row.limit),
            format_real(row.abs_dev),
            format_real(rel_dev),
        ])
    text = _csv(["N", "prelimit", "limit", "abs_dev", "rel_dev"], csv_rows)
    extras: Extras = []
    if args.gnuplot:
        name = os.path.basename(args.out)
        extras.append((args.out + ".gp", _gnuplot_converge(name)))
    return text, extras


def _run_ratio(args: argparse.Namespace, cfg: RunConfig) -> Tuple[str, Extras]:
    _require_out_for_gnuplot(args)
    if len(args.n_list) == 0:
        raise DomainValidationError("N_list must be non-empty", module=_MODULE)
    for N in args.n_list:
        if N < 2:
            raise DomainValidationError(f"all N must be >= 2, got {N}", module=_MODULE)
    window = ScaledWindow(
        xi=to_mpfr(args.xi), mu_off=to_mpfr(args.mu_off), nu_off=to_mpfr(args.nu_off)
    )
    b = to_mpfr(args.b)
    limit = asymptotics.ratio_sinc_limit(window)
    csv_rows = []
    for N in sorted(args.n_list):
        ratio = asymptotics.normalized_ratio(window, N, b, centered=args.centered)
        csv_rows.append([
            str(N),
            format_real(ratio),
            format_real(limit),
            format_real(abs(ratio - limit)),
        ])
    text = _csv(["N", "ratio", "limit", "abs_dev"], csv_rows)
    extras: Extras = []
    if args.gnuplot:
        name = os.path.basename(args.out)
        extras.append((args.out + ".gp", _gnuplot_ratio(name)))
    return text, extras


def _run_mc(args: argparse.Namespace, cfg: RunConfig) -> Tuple[str, Extras]:
    profile = SHIPPED_PROFILES[args.q_label]
    sampler = montecarlo.WignerSampler(profile=profile, seed=cfg.seed)
    # the estimator works on float64 spectral points; the exact reference
    # uses those same rounded points
    mu_f = float(args.mu)
    nu_f = float(args.nu)
    result = montecarlo.mc_correlation(args.n, mu_f, nu_f, sampler, args.n_samples)
    exact = recursion.condensed(
        args.n, to_mpfr(mu_f), to_mpfr(nu_f), profile.fourth_moment_b
    ).f(args.n)
    mean = to_mpfr(result.mean)
    std_error = to_mpfr(result.std_error)
    if std_error > 0:
        z = (mean - exact) / std_error
    else:
        z = mpfr(0) if mean == exact else gmpy2.inf(1 if mean > exact else -1)
    lines = [
        f"law = {profile.label}",
        f"backend = {montecarlo.kernel_backend()}",
        f"precision = {cfg.precision_bits}",
        f"N = {args.n}",
        f"mu = {format_real(mu_f)}",
        f"nu = {format_real(nu_f)}",
        f"n_samples = {result.n_samples}",
        f"seed = {cfg.seed}",
        f"mean = {format_real(mean)}",
        f"std_error = {format_real(std_error)}",
        f"exact = {format_real(exact)}",
        f"z = {format_real(z)}",
    ]
    return "\n".join(lines) + "\n", []


def _dispatch(args: argparse.Namespace, cfg: RunConfig) -> Tuple[str, Extras]:
    if args.command == "exact":
        return _run_exact(args, cfg, args.route)
    if args.command == "contour-check":
        return _run_exact(args, cfg, "contour")
    if args.command == "converge":
        return _run_converge(args, cfg)
    if args.command == "ratio":
        return _run_ratio(args, cfg)
    if args.command == "mc":
        return _run_mc(args, cfg)
    raise DomainValidationError(f"unknown command {args.command!r}", module=_MODULE)


def _write_text(path: str, text: str) -> None:
    # newline="" keeps the LF endings exactly as composed
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        with precision_bits(cfg.precision_bits):
            text, extras = _dispatch(args, cfg)
        if cfg.output_path:
            _write_text(cfg.output_path, text)
            for path, content in extras:
                _write_text(path, content)
        else:
            sys.stdout.write(text)
    except DomainValidationError as exc:
        print(f"error [{exc.module}]: {exc}", file=sys.stderr)
        return 2
    except NumericalComputationError as exc:
        print(f"error [{exc.module}]: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error [{_MODULE}]: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
