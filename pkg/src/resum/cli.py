"""Batch command line: emits every table and figure dataset as CSV/JSON.

One subcommand per table/figure family.  Output is deterministic: identical
configuration always produces identical bytes.  Exit codes: 2 for a bad
configuration, 3 when an iterative solver fails, 4 when no estimation point
exists.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from mpmath import workprec

from . import anharmonic, laplace
from .errors import ConvergenceError, NoCandidate, NoStationaryPoint, ResumError
from .numerics import DEFAULT_POLICY, to_decimal
from .pade import limit_at_infinity, pade, zero_pole_map

DEFAULT_DIGITS = 10


def parse_int_list(text: str):
    """Comma list with inclusive ranges: "10,20..25,40" -> [10,20,...,25,40]."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {chunk!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise ValueError("empty list")
    return out


def _precision_bits(args, order: int) -> int:
    if args.precision_bits not in (None, "auto"):
        return int(args.precision_bits)
    env = os.environ.get("RESUM_PRECISION_BITS")
    if env:
        return int(env)
    return DEFAULT_POLICY.working_bits(order)


def _emit(args, header, rows, json_payload=None):
    """Write CSV (header + decimal-string rows) or JSON to --out/stdout."""
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        data = buf.getvalue()
    else:
        payload = json_payload if json_payload is not None else [
            dict(zip(header, row)) for row in rows
        ]
        data = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def cmd_laplace_table1(args):
    orders = parse_int_list(args.orders)
    ls = parse_int_list(args.L) if args.L else [0, 1, 2, 3, 4, 5]
    header = ["N"] + [f"L={l}" for l in ls]
    rows = []
    for n in sorted(set(orders)):
        with workprec(_precision_bits(args, n)):
            row = [str(n)]
            for l in ls:
                est = laplace.pms_estimate(n, l)
                row.append(to_decimal(est.value, args.digits))
        rows.append(row)
    _emit(args, header, rows)


def cmd_laplace_pade(args):
    orders = parse_int_list(args.orders)
    header = ["N", "f_N", "fbar_N"]
    rows = []
    for n in sorted(set(orders)):
        if n % 2:
            raise ValueError(f"diagonal decomposition needs even N, got {n}")
        with workprec(_precision_bits(args, n)):
            plain = limit_at_infinity(pade(laplace.asymptotic_coeffs(n), n // 2, n // 2))
            transformed = limit_at_infinity(pade(laplace.fbar_poly(n), n // 2, n // 2))
            rows.append([
                str(n),
                to_decimal(plain, args.digits),
                to_decimal(transformed, args.digits),
            ])
    _emit(args, header, rows)


def cmd_laplace_cmax(args):
    bits = max(_precision_bits(args, 0), 4 * args.digits + 32)
    with workprec(bits):
        value = laplace.c_max()
        text = to_decimal(value, args.digits)
    if args.format == "json":
        _emit(args, ["c_max"], [[text]], {"c_max": text})
    else:
        _emit(args, ["c_max"], [[text]])


def cmd_laplace_zeropole(args):
    orders = parse_int_list(args.orders)
    payload = {}
    for n in sorted(set(orders)):
        if n % 2:
            raise ValueError(f"diagonal decomposition needs even N, got {n}")
        with workprec(_precision_bits(args, n)):
            series = laplace.psi(n, args.L_int)
            approx = pade(series, n // 2, n // 2)
            zeros, poles = zero_pole_map(approx)
            payload[str(n)] = {
                "L": args.L_int,
                "zeros": zeros.to_json_data(args.digits),
                "poles": poles.to_json_data(args.digits),
            }
    args.format = "json"
    _emit(args, [], [], payload)


def cmd_aho_coeffs(args):
    orders = parse_int_list(args.orders)
    top = max(orders)
    coeffs = anharmonic.bender_wu(top).coeffs
    lines = []
    for n in sorted(set(orders)):
        q = Fraction(coeffs[n])
        lines.append(f"{n}\t{q.numerator}/{q.denominator}")
    data = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def cmd_aho_energy(args):
    orders = parse_int_list(args.orders)
    header = ["N", "estimate", "criterion", "t_star"]
    rows = []
    for n in sorted(set(orders)):
        with workprec(_precision_bits(args, n)):
            est = anharmonic.estimate_E(n, args.scheme)
            rows.append([
                str(n),
                to_decimal(est.value, args.digits),
                est.criterion.value,
                to_decimal(est.location_t, 8),
            ])
    _emit(args, header, rows)


def cmd_aho_alpha(args):
    orders = parse_int_list(args.orders)
    ks = parse_int_list(args.k) if args.k else [1, 2, 3, 4, 5]
    header = ["N"] + [f"alpha_{k}" for k in ks]
    rows = []
    for n in sorted(set(orders)):
        with workprec(_precision_bits(args, n)):
            row = [str(n)]
            for k in ks:
                est = anharmonic.estimate_alpha(n, k)
                row.append(to_decimal(est.value, args.digits))
            rows.append(row)
    _emit(args, header, rows)


def cmd_aho_lambda(args):
    orders = parse_int_list(args.orders)
    header = ["N", "L", "estimate", "criterion", "g_star", "flags"]
    rows = []
    for n in sorted(set(orders)):
        with workprec(_precision_bits(args, n)):
            if args.estimated_theta1:
                theta1 = anharmonic.estimate_theta1(n).value
                thetas = [anharmonic.THETA0, theta1]
            else:
                thetas = None
            est = anharmonic.estimate_E_lambda(n, thetas=thetas, L=args.L_int)
            rows.append([
                str(n),
                str(args.L_int),
                to_decimal(est.value, args.digits),
                est.criterion.value,
                to_decimal(est.location_t, 8),
                "|".join(est.flags),
            ])
    _emit(args, header, rows)


def cmd_aho_zeromap(args):
    orders = parse_int_list(args.orders)
    payload = {}
    for n in sorted(set(orders)):
        with workprec(_precision_bits(args, n)):
            if args.scheme == "binomial":
                series = anharmonic.ebar(n)
            else:
                series = anharmonic.elde(n)
            from .polyroot import Poly, all_roots
            from .series import log_derivative

            d1 = log_derivative(series)
            d2 = log_derivative(d1)
            entry = {}
            for name, d in (("d1", d1), ("d2", d2)):
                _, dense = anharmonic._z_polynomial(d)
                while dense and dense[-1] == 0:
                    dense.pop()
                roots = all_roots(Poly(tuple(dense)))
                entry[name] = roots.to_json_data(args.digits)
            payload[str(n)] = entry
    args.format = "json"
    _emit(args, [], [], payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resum",
        description="Divergent-series resummation tables and figure datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, orders_default=None, with_L=False, with_scheme=False):
        p.add_argument("--orders", default=orders_default, required=orders_default is None)
        if with_L:
            p.add_argument("--L", default=None)
        p.add_argument("--precision-bits", dest="precision_bits", default=None,
                       help='bits or "auto" (default: policy, or RESUM_PRECISION_BITS)')
        p.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None)
        if with_scheme:
            p.add_argument("--scheme", choices=["binomial", "lde"], default="binomial")

    p = sub.add_parser("laplace-table1", help="stationary-point estimates per (N, L)")
    common(p, with_L=True)
    p.set_defaults(func=cmd_laplace_table1)

    p = sub.add_parser("laplace-pade", help="diagonal Pade limits, plain and transformed")
    common(p)
    p.set_defaults(func=cmd_laplace_pade)

    p = sub.add_parser("laplace-cmax", help="limit of the plateau-location constant")
    common(p, orders_default="0")
    p.set_defaults(func=cmd_laplace_cmax)

    p = sub.add_parser("laplace-zeropole", help="zero/pole maps of diagonal approximants")
    common(p, with_L=True)
    p.set_defaults(func=cmd_laplace_zeropole)

    p = sub.add_parser("aho-coeffs", help="exact perturbation coefficients")
    common(p)
    p.set_defaults(func=cmd_aho_coeffs)

    p = sub.add_parser("aho-energy", help="ground-state strong-coupling constant estimates")
    common(p, with_scheme=True)
    p.set_defaults(func=cmd_aho_energy)

    p = sub.add_parser("aho-alpha", help="strong-coupling expansion coefficients")
    common(p)
    p.add_argument("--k", default=None, help="coefficient indices (default 1..5)")
    p.set_defaults(func=cmd_aho_alpha)

    p = sub.add_parser("aho-lambda", help="coupling-side reduced estimates")
    common(p, with_L=True)
    p.add_argument("--estimated-theta1", action="store_true",
                   help="use the quotient-Pade exponent instead of the exact ladder")
    p.set_defaults(func=cmd_aho_lambda)

    p = sub.add_parser("aho-zeromap", help="complex zero maps of the derivative polynomials")
    common(p, with_scheme=True)
    p.set_defaults(func=cmd_aho_zeromap)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "L", None) is not None and args.command in (
        "laplace-zeropole", "aho-lambda",
    ):
        args.L_int = int(args.L)
    elif args.command in ("laplace-zeropole", "aho-lambda"):
        args.L_int = 1
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NoCandidate, NoStationaryPoint) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ResumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
