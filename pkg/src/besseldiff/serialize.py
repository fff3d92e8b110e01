"""JSON/CSV encoding of reports.

Numbers never travel as binary floats: exact rationals become ``"p/q"``
strings (``"13"`` for integers), approximate reals become decimal strings with
``precision_bits // 3`` significant digits, complex values become
``[re, im]`` pairs.  :func:`decode_number` inverts this.
"""

from __future__ import annotations

import csv
import io
import json
import re
from fractions import Fraction
from numbers import Rational

from .bounds import BoundReport, Inequality, TableRow
from .exact import ExactComplexRational
from .numerics import NumericContext
from .roots import CertificationReport, Check, ZeroSet

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def encode_number(v, ctx: NumericContext):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, Rational):
        return str(Fraction(v))
    if isinstance(v, ExactComplexRational):
        return [str(v.re), str(v.im)]
    if hasattr(v, "_mpc_") or isinstance(v, complex):
        return [ctx.nstr(ctx.mp.mpf(v.real)), ctx.nstr(ctx.mp.mpf(v.imag))]
    if hasattr(v, "_mpf_") or isinstance(v, float):
        return ctx.nstr(ctx.mp.mpf(v))
    if isinstance(v, (list, tuple)):
        return [encode_number(x, ctx) for x in v]
    if isinstance(v, dict):
        return {k: encode_number(x, ctx) for k, x in v.items()}
    raise TypeError(f"cannot encode {type(v).__name__}")


def decode_number(s, ctx: NumericContext):
    """Inverse of :func:`encode_number` for scalars: rational strings give
    ``Fraction``, decimal strings give an ``mpf`` of ``ctx``."""
    if s is None:
        return None
    if _RATIONAL.match(s):
        return Fraction(s)
    return ctx.mp.mpf(s)


def decode_complex(pair, ctx: NumericContext):
    re_, im_ = (decode_number(p, ctx) for p in pair)
    if isinstance(re_, Fraction) and isinstance(im_, Fraction):
        return ExactComplexRational(re_, im_)
    return ctx.mp.mpc(re_, im_)


def _decode_param(v, ctx):
    if isinstance(v, str):
        try:
            return decode_number(v, ctx)
        except ValueError:
            return v
    if isinstance(v, list):
        return tuple(_decode_param(x, ctx) for x in v)
    return v


# -- zero sets ---------------------------------------------------------------

def check_to_dict(c: Check, ctx) -> dict:
    return {"name": c.name, "passed": c.passed, "margin": encode_number(c.margin, ctx), "detail": c.detail}


def zeroset_to_dict(zs: ZeroSet, report: CertificationReport | None = None) -> dict:
    ctx = zs.ctx
    d = {
        "n": zs.n,
        "precision_bits": zs.precision_bits,
        "alphas": [encode_number(a, ctx) for a in zs.alphas],
        "moduli": [encode_number(abs(a), ctx) for a in zs.alphas],
        "residual_bound": encode_number(zs.residual_bound, ctx),
        "iterations": zs.iterations,
    }
    if report is not None:
        d["certification"] = {
            "passed": report.passed,
            "checks": [check_to_dict(c, ctx) for c in report.checks],
        }
    return d


def zeroset_from_dict(d: dict) -> ZeroSet:
    ctx = NumericContext(d["precision_bits"])
    alphas = tuple(ctx.mp.mpc(ctx.mp.mpf(re_), ctx.mp.mpf(im_)) for re_, im_ in d["alphas"])
    return ZeroSet(n=d["n"], alphas=alphas, residual_bound=ctx.mp.mpf(d["residual_bound"]),
                   precision_bits=d["precision_bits"], iterations=d.get("iterations", 0))


# -- bound reports -----------------------------------------------------------

def bound_report_to_dict(r: BoundReport, ctx: NumericContext) -> dict:
    return {
        "inequality": r.inequality.value,
        "parameters": encode_number(r.parameters, ctx),
        "measured": encode_number(r.measured, ctx),
        "lower": encode_number(r.lower, ctx),
        "upper": encode_number(r.upper, ctx),
        "strict_lower": r.strict_lower,
        "strict_upper": r.strict_upper,
        "margin": encode_number(r.margin, ctx),
        "verdict": r.verdict,
        "notes": list(r.notes),
    }


def bound_report_from_dict(d: dict, ctx: NumericContext) -> BoundReport:
    r = BoundReport(
        inequality=Inequality(d["inequality"]),
        parameters={k: _decode_param(v, ctx) for k, v in d["parameters"].items()},
        measured=decode_number(d["measured"], ctx),
        upper=decode_number(d["upper"], ctx),
        lower=decode_number(d["lower"], ctx),
        strict_upper=d["strict_upper"],
        strict_lower=d["strict_lower"],
        notes=tuple(d["notes"]),
    )
    if r.verdict != d["verdict"]:
        raise ValueError(f"verdict mismatch after decoding {d['inequality']}")
    return r


# -- tables ------------------------------------------------------------------

def table_to_dicts(rows, ctx: NumericContext) -> list:
    return [{f: encode_number(getattr(r, f), ctx) for f in TableRow.FIELDS} for r in rows]


def table_from_dicts(items, ctx: NumericContext) -> list:
    out = []
    for d in items:
        vals = {f: decode_number(d[f], ctx) if f != "n" else int(d[f]) for f in TableRow.FIELDS}
        out.append(TableRow(**vals))
    return out


def table_to_csv(rows, ctx: NumericContext) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TableRow.FIELDS)
    for d in table_to_dicts(rows, ctx):
        w.writerow("" if d[f] is None else d[f] for f in TableRow.FIELDS)
    return buf.getvalue()


def table_from_csv(text: str, ctx: NumericContext) -> list:
    reader = csv.DictReader(io.StringIO(text))
    items = [{k: (v if v != "" else None) for k, v in row.items()} for row in reader]
    return table_from_dicts(items, ctx)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
