"""Command-line interface.

    besseldiff zeros  --n N [--bits B]
    besseldiff stencil --n N [--bits B]
    besseldiff apply  --n N --z Z (--series PATH | --builtin g) [--bits B]
    besseldiff verify TARGET --n N|A..B [--x X] [--samples S] [--out PATH]
    besseldiff table  --n A..B --mode {fixed,xn} [--x X] [--zfrac F] [--format {json,csv}]

Exit status: 0 all checks pass, 1 an inequality or identity check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import bounds, exact, serialize
from .exact import ExactComplexRational
from .numerics import DEFAULT_PRECISION, MIN_PRECISION, NumericContext, to_approx
from .roots import ConvergenceError, certify, find_zeros
from .stencil import (StencilError, TaylorSeries, apply_callable, apply_series, build_stencil, check_stencil,
                      model_g, remainder_series)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_FRACTION = re.compile(r"^[+-]?\d+/\d+$")
TARGETS = ("prop1", "powersums", "identity", "lemma", "prop2", "thm1", "cor13")


class UsageError(Exception):
    pass


def parse_exact(s: str) -> Fraction:
    """Decimal (``"0.5"``) or ``"p/q"`` string to an exact Fraction; no exponents."""
    s = s.strip()
    if _DECIMAL.match(s) or _FRACTION.match(s):
        return Fraction(s)
    raise UsageError(f"not an exact decimal or fraction: {s!r}")


def parse_complex(s: str):
    """``"re"`` or ``"re,im"``."""
    parts = s.split(",")
    if len(parts) == 1:
        return parse_exact(parts[0])
    if len(parts) == 2:
        return ExactComplexRational(parse_exact(parts[0]), parse_exact(parts[1]))
    raise UsageError(f"complex value must be 're' or 're,im': {s!r}")


def parse_range(s: str):
    """``"N"`` or ``"A..B"`` to an inclusive ``(A, B)``."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", s)
    if not m:
        raise UsageError(f"--n must be N or A..B, got {s!r}")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) is not None else a
    if a < 1 or b < a:
        raise UsageError(f"invalid order range {s!r} (need 1 <= A <= B)")
    return a, b


def load_series(path: str) -> TaylorSeries:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read series file {path}: {e}") from e
    if not isinstance(data, list) or not data:
        raise UsageError("series file must hold a nonempty JSON array")
    coeffs = []
    for i, entry in enumerate(data):
        if isinstance(entry, str):
            coeffs.append(parse_exact(entry))
        elif isinstance(entry, list) and len(entry) == 2 and all(isinstance(e, str) for e in entry):
            coeffs.append(ExactComplexRational(parse_exact(entry[0]), parse_exact(entry[1])))
        else:
            raise UsageError(f"series entry {i} must be a decimal string or [re, im] pair of strings")
    return TaylorSeries(coeffs)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(line: str, args):
    # summary goes to stdout when the full report is written to a file
    print(line, file=sys.stdout if args.out else sys.stderr)


# -- commands -----------------------------------------------------------------

def cmd_zeros(args, ctx):
    n, _ = parse_range(args.n)
    zs = find_zeros(n, ctx)
    report = certify(zs)
    _emit(serialize.dumps(serialize.zeroset_to_dict(zs, report)), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_stencil(args, ctx):
    n, _ = parse_range(args.n)
    zs = find_zeros(n, ctx)
    st = build_stencil(zs, verify=False)
    checks = check_stencil(st) + list(certify(zs).checks)
    d = {
        "n": n,
        "precision_bits": ctx.precision_bits,
        "a_nodes": [serialize.encode_number(a, ctx) for a in st.a_nodes],
        "b_nodes": [serialize.encode_number(b, ctx) for b in st.b_nodes],
        "a_moduli": [serialize.encode_number(abs(a), ctx) for a in st.a_nodes],
        "b_moduli": [serialize.encode_number(abs(b), ctx) for b in st.b_nodes],
        "checks": [serialize.check_to_dict(c, ctx) for c in checks],
        "passed": all(c.passed for c in checks),
    }
    _emit(serialize.dumps(d), args.out)
    return EXIT_OK if d["passed"] else EXIT_FAIL


def cmd_apply(args, ctx):
    n, _ = parse_range(args.n)
    if args.z is None:
        raise UsageError("apply needs --z")
    z_exact = parse_complex(args.z)
    z = to_approx(z_exact, ctx)
    mp = ctx.mp
    st = build_stencil(find_zeros(n, ctx))
    tol = ctx.two_pow(-(ctx.precision_bits // 2))
    out = {"n": n, "precision_bits": ctx.precision_bits, "z": serialize.encode_number(z_exact, ctx)}
    if args.series and args.builtin:
        raise UsageError("give either --series or --builtin, not both")
    if args.builtin == "g":
        if abs(z) * max(abs(a) for a in st.a_nodes) >= 1:
            raise UsageError("g(z) = z/(1-z) needs |z| max|a_nk| < 1")
        approx = apply_callable(st, model_g, z, ctx)
        reference = z / (1 - z) ** 2
        remainder = z * bounds.model_remainder(n, z, ctx)
        out.update(function="g(z) = z/(1-z)", remainder_method="closed form z*R_n(z)", identically_zero=False)
    elif args.series:
        f = load_series(args.series)
        approx = apply_series(st, f, z, ctx)
        reference = f.z_derivative(z_exact, ctx)
        rem = remainder_series(n, f, z_exact, ctx)
        remainder = rem.value
        out.update(function=f"series of order {f.order}", remainder_method="exact defects m - A_m^n",
                   identically_zero=rem.identically_zero, truncation_order=f.order)
    else:
        raise UsageError("apply needs --series PATH or --builtin g")
    discrepancy = abs(reference - approx - remainder)
    scale = max(abs(reference), abs(approx), mp.mpf(1))
    out.update(
        approximation=serialize.encode_number(approx, ctx),
        reference=serialize.encode_number(reference, ctx),
        remainder=serialize.encode_number(remainder, ctx),
        consistency_error=serialize.encode_number(discrepancy, ctx),
        passed=bool(discrepancy <= tol * scale),
    )
    _emit(serialize.dumps(out), args.out)
    return EXIT_OK if out["passed"] else EXIT_FAIL


def _exact_check(name, n, passed, detail):
    return {"check": name, "n": n, "passed": bool(passed), "detail": detail}


def verify_prop1(n):
    d = exact.defects(n, 2 * n + 1)
    g = exact.gamma(n)
    sign = -1 if n % 2 else 1
    low_ok = all(v == 0 for v in d[:-1])
    top_ok = d[-1] == sign * g
    return [
        _exact_check("prop1_exactness", n, low_ok, f"m - A_m^n = 0 for 1 <= m <= {2 * n}"),
        _exact_check("prop1_leading", n, top_ok,
                     f"{2 * n + 1} - A_{2 * n + 1}^n = {d[-1]} = (-1)^{n} gamma_{n} = {sign * g}"),
    ]


def verify_powersums(n):
    s = exact.power_sums(n, 2 * n + 1)
    g = exact.gamma(n)
    target = (-1) ** n * 4**n * g
    return [
        _exact_check("sigma_1", n, s[0] == -1, f"sigma_1 = {s[0]}"),
        _exact_check("odd_sigma_vanish", n, all(s[2 * j] == 0 for j in range(1, n)),
                     f"sigma_(2j+1) = 0 for 1 <= j <= {n - 1}"),
        _exact_check("sigma_2n+1", n, s[2 * n] == target, f"sigma_{2 * n + 1} = {s[2 * n]}, expected {target}"),
    ]


def verify_identity(n, samples):
    bad = 0
    for z in exact.random_rational_points(samples, radius=3, seed=n, avoid_n=n):
        if exact.model_remainder_exact(n, z) != exact.closed_form_exact(n, z):
            bad += 1
    return [_exact_check("two_formula_identity", n, bad == 0,
                         f"R_n via M_n'/M_n - G_n'/G_n equals closed form at {samples - bad}/{samples} rational points")]


def cmd_verify(args, ctx):
    target = args.target
    if args.n is None:
        raise UsageError("verify needs --n")
    lo, hi = parse_range(args.n)
    x = parse_exact(args.x) if args.x is not None else None
    checks, reports = [], []
    for n in range(lo, hi + 1):
        if target == "prop1":
            checks += verify_prop1(n)
        elif target == "powersums":
            checks += verify_powersums(n)
        elif target == "identity":
            checks += verify_identity(n, args.samples or 25)
        elif target == "lemma":
            reports += bounds.verify_lemma14(n, ctx, samples=args.samples or 200)
            reports += bounds.verify_lemma15(n, ctx)
        elif target == "prop2":
            if x is None:
                raise UsageError("prop2 needs --x")
            reports.append(bounds.verify_prop2(n, x, ctx, samples=args.samples or 720))
        elif target == "thm1":
            if x is not None:
                reports += bounds.verify_thm1(n, x, ctx)
            if n >= 13:
                reports += bounds.verify_thm1_xn(n, ctx)
            elif x is None:
                raise UsageError("thm1 without --x uses x_n and needs n >= 13")
        elif target == "cor13":
            if x is None:
                raise UsageError("cor13 needs --x")
            reports += bounds.verify_cor13(n, x, m_count=args.samples or 60)
    passed = all(c["passed"] for c in checks) and all(r.verdict for r in reports)
    doc = {
        "target": target,
        "n_range": [lo, hi],
        "precision_bits": ctx.precision_bits,
        "passed": passed,
        "exact_checks": checks,
        "bound_reports": [serialize.bound_report_to_dict(r, ctx) for r in reports],
    }
    n_fail = sum(not c["passed"] for c in checks) + sum(not r.verdict for r in reports)
    total = len(checks) + len(reports)
    for c in checks:
        _summary(f"[{'PASS' if c['passed'] else 'FAIL'}] n={c['n']} {c['check']}: {c['detail']}", args)
    if reports:
        worst = min(reports, key=lambda r: r.verdict)
        _summary(f"{len(reports) - sum(not r.verdict for r in reports)}/{len(reports)} bound checks pass"
                 f" ({', '.join(sorted({r.inequality.value for r in reports}))});"
                 f" example margin {ctx.nstr(worst.margin, 6)}", args)
    _summary(f"verify {target}: {'PASS' if passed else 'FAIL'} ({total - n_fail}/{total})", args)
    _emit(serialize.dumps(doc), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_table(args, ctx):
    if args.n is None:
        raise UsageError("table needs --n A..B")
    lo, hi = parse_range(args.n)
    x = parse_exact(args.x) if args.x is not None else None
    zfrac = parse_exact(args.zfrac)
    rows = bounds.convergence_table(lo, hi, args.mode, zfrac, ctx, x=x)
    if args.format == "csv":
        text = serialize.table_to_csv(rows, ctx)
    else:
        text = serialize.dumps({"mode": args.mode, "precision_bits": ctx.precision_bits,
                                "z_fraction": str(zfrac), "rows": serialize.table_to_dicts(rows, ctx)})
    _emit(text, args.out)
    ok = all(r.ratio9 <= 1 and (r.ratio10 is None or r.ratio10 <= 1) for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="besseldiff",
                                description="Differentiation stencils from Bessel-polynomial zeros.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--bits", type=int, default=DEFAULT_PRECISION, help="working precision in bits")
        sp.add_argument("--out", help="write the machine-readable report here")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("zeros", help="zeros of y_n with certificates")
    sp.add_argument("--n", required=True)
    common(sp)
    sp = sub.add_parser("stencil", help="nodes a_nk, b_nk with invariant checks")
    sp.add_argument("--n", required=True)
    common(sp)
    sp = sub.add_parser("apply", help="apply the differentiation sum")
    sp.add_argument("--n", required=True)
    sp.add_argument("--z", help="evaluation point, 're' or 're,im'")
    sp.add_argument("--series", help="JSON array of Taylor coefficients")
    sp.add_argument("--builtin", choices=("g",), help="built-in function: g(z) = z/(1-z)")
    common(sp)
    sp = sub.add_parser("verify", help="check an identity or bound")
    sp.add_argument("target", choices=TARGETS)
    sp.add_argument("--n")
    sp.add_argument("--x")
    sp.add_argument("--samples", type=int)
    common(sp)
    sp = sub.add_parser("table", help="convergence table against the fixed-x and x_n error bounds")
    sp.add_argument("--n")
    sp.add_argument("--mode", choices=("fixed", "xn"), default="xn")
    sp.add_argument("--x")
    sp.add_argument("--zfrac", default="0.9")
    common(sp)
    return p


COMMANDS = {"zeros": cmd_zeros, "stencil": cmd_stencil, "apply": cmd_apply, "verify": cmd_verify,
            "table": cmd_table}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.bits < MIN_PRECISION:
            raise UsageError(f"--bits must be >= {MIN_PRECISION}")
        ctx = NumericContext(args.bits)
        return COMMANDS[args.command](args, ctx)
    except (UsageError, bounds.PreconditionError, ValueError, TypeError) as e:
        print(f"besseldiff {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, StencilError) as e:
        print(f"besseldiff {args.command}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
