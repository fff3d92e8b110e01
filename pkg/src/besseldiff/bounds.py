"""Nonlocal error bounds for the differentiation sum, and measurements against them.

Notation: ``gamma_n = n!^2/(2n)!^2``, ``n0(x) = max(14, x^2/(1-x)^2) - 1``,
``x_n = sqrt(n)/(1+sqrt(n))``.  For the model function ``g(z) = z/(1-z)`` the
remainder is ``r_n(g; z) = z R_n(z)`` with

    R_n(z) = (-1)^n z^(2n) gamma_n / ((z-1)^(2n+2) Q_n(w) Q_n(-w)),  w = z/(z-1),

which is evaluated here directly at working precision (no cancellation).

Bounds checked (ids used in :class:`BoundReport`):

* ``THM1_9``   |r_n(f;z)| <= |z|^(2n+1)/(x-|z|) * 2x/(1-x)^(2n+2) * gamma_n
* ``THM1_10``  |r_n(f;z)| <= |z|^(2n+1)/(x_n-|z|) * 0.92^(2n)/n^(n-1)
* ``PROP2_12`` x^(2n) gamma_n/(1-x)^(2n+2) <= max_{|z|=x} |R_n| < twice that
* ``COR_13``   |m - A_m^n| < 2 x^(2n+1-m) gamma_n/(1-x)^(2n+2), m >= 2n+1
* ``LEMMA_14`` 1/2 < |Q_n(z) Q_n(-z)| < 3/2 for |z| <= rho, n >= max(14, rho^2) - 1
* ``LEMMA_15`` 1 - rho^2/(8n-4) <= Q_n(x) Q_n(-x) <= 1 for real |x| <= rho, n > max(2, (rho^2+4)/8)
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import List, NamedTuple, Optional, Sequence

from . import exact
from .bessel import _check_order, bessel_q
from .numerics import NumericContext, eval_poly, from_rational, to_approx


class Inequality(str, enum.Enum):
    THM1_9 = "THM1_9"
    THM1_10 = "THM1_10"
    PROP2_12 = "PROP2_12"
    COR_13 = "COR_13"
    LEMMA_14 = "LEMMA_14"
    LEMMA_15 = "LEMMA_15"


class PreconditionError(ValueError):
    pass


class OrderTooSmallError(PreconditionError):
    """``n`` is below the threshold ``n0(x)`` (or below 13 for the ``x_n`` bound)."""


class OutsideDiskError(PreconditionError):
    """``|z| >= x``: the bound has a pole there."""


RATE_BASE = Fraction(17, 20)
STIRLING_BASE = Fraction(23, 25)


@dataclass(frozen=True)
class BoundReport:
    """One inequality instance: ``lower (<|<=) measured (<|<=) upper``.

    Missing sides are ``None``.  ``margin`` is the smaller signed gap to a
    present side; ``verdict`` honours the strictness written in the inequality.
    """

    inequality: Inequality
    parameters: dict
    measured: object
    upper: object = None
    lower: object = None
    strict_upper: bool = False
    strict_lower: bool = False
    notes: tuple = field(default=())

    @property
    def margin(self):
        gaps = []
        if self.upper is not None:
            gaps.append(self.upper - self.measured)
        if self.lower is not None:
            gaps.append(self.measured - self.lower)
        return min(gaps)

    @property
    def verdict(self) -> bool:
        ok = True
        if self.upper is not None:
            ok &= self.measured < self.upper if self.strict_upper else self.measured <= self.upper
        if self.lower is not None:
            ok &= self.measured > self.lower if self.strict_lower else self.measured >= self.lower
        return bool(ok)


def _as_exact(x):
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return None


def n0(x):
    """``max(14, x^2/(1-x)^2) - 1``; exact ``Fraction`` for rational ``x``."""
    q = _as_exact(x)
    if q is not None:
        if not 0 < q < 1:
            raise ValueError(f"x must lie in (0, 1), got {x}")
        return max(Fraction(14), q * q / (1 - q) ** 2) - 1
    if not 0 < x < 1:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    return max(14, x * x / (1 - x) ** 2) - 1


def order_admissible(n: int, x) -> bool:
    """``n >= n0(x)`` as a real comparison (exact when ``x`` is rational)."""
    return n >= n0(x)


def _require_order(n, x):
    _check_order(n)
    if not order_admissible(n, x):
        raise OrderTooSmallError(f"n={n} < n0(x)={n0(x)} for x={x}")


def _real(x, ctx):
    return to_approx(x, ctx).real


def x_n(n: int, ctx: NumericContext):
    s = ctx.mp.sqrt(n)
    return s / (1 + s)


def _gamma(n, ctx):
    return from_rational(exact.gamma(n), ctx).real


def thm1_bound(n: int, x, z_abs, ctx: NumericContext | None = None):
    """Right-hand side of the fixed-``x`` bound on ``|r_n(f; z)|`` for ``|f_m| <= 1``."""
    ctx = ctx or NumericContext()
    _require_order(n, x)
    xr, r = _real(x, ctx), _real(z_abs, ctx)
    if r < 0:
        raise ValueError("z_abs must be nonnegative")
    if r >= xr:
        raise OutsideDiskError(f"|z|={z_abs} must be < x={x}")
    return r ** (2 * n + 1) / (xr - r) * 2 * xr / (1 - xr) ** (2 * n + 2) * _gamma(n, ctx)


def thm1_xn_bound(n: int, z_abs, ctx: NumericContext | None = None):
    """Right-hand side of the ``x = x_n`` bound ``|z|^(2n+1)/(x_n-|z|) 0.92^(2n)/n^(n-1)``."""
    ctx = ctx or NumericContext()
    _check_order(n)
    if n < 13:
        raise OrderTooSmallError(f"the x_n bound needs n >= 13, got {n}")
    xn = x_n(n, ctx)
    r = _real(z_abs, ctx)
    if r < 0:
        raise ValueError("z_abs must be nonnegative")
    if r >= xn:
        raise OutsideDiskError(f"|z|={z_abs} must be < x_n={xn}")
    mp = ctx.mp
    return r ** (2 * n + 1) / (xn - r) * from_rational(STIRLING_BASE, ctx).real ** (2 * n) / mp.mpf(n) ** (n - 1)


def prop2_bounds(n: int, x, ctx: NumericContext | None = None):
    """``(lower, upper)`` bracketing ``max_{|z|=x} |R_n(z)|``; ``upper = 2 lower``."""
    ctx = ctx or NumericContext()
    _require_order(n, x)
    q = _as_exact(x)
    if q is not None:
        lower = from_rational(q ** (2 * n) * exact.gamma(n) / (1 - q) ** (2 * n + 2), ctx).real
    else:
        xr = _real(x, ctx)
        lower = xr ** (2 * n) * _gamma(n, ctx) / (1 - xr) ** (2 * n + 2)
    return lower, 2 * lower


def cauchy_coeff_bound(n: int, m: int, x) -> Fraction:
    """Exact ``2 x^(2n+1-m) gamma_n / (1-x)^(2n+2)`` bounding ``|m - A_m^n|``."""
    q = _as_exact(x)
    if q is None:
        raise TypeError("cauchy_coeff_bound needs a rational x")
    _require_order(n, q)
    if m < 2 * n + 1:
        raise PreconditionError(f"m must be >= 2n+1 = {2 * n + 1}, got {m}")
    return 2 * q ** (2 * n + 1 - m) * exact.gamma(n) / (1 - q) ** (2 * n + 2)


def model_remainder(n: int, z, ctx: NumericContext | None = None):
    """``R_n(z)`` from the closed form at working precision."""
    ctx = ctx or NumericContext()
    _check_order(n)
    mp = ctx.mp
    z = to_approx(z, ctx)
    if z == 1:
        raise exact.PoleError("R_n has a pole at z = 1")
    w = z / (z - 1)
    q = bessel_q(n).coeffs
    denom = (z - 1) ** (2 * n + 2) * eval_poly(q, w, ctx) * eval_poly(q, -w, ctx)
    sign = -1 if n % 2 else 1
    return sign * z ** (2 * n) * _gamma(n, ctx) / denom


def model_error(n: int, z, ctx: NumericContext | None = None):
    """``|r_n(g; z)| = |z R_n(z)|`` for ``g(z) = z/(1-z)``."""
    ctx = ctx or NumericContext()
    z = to_approx(z, ctx)
    return abs(z * model_remainder(n, z, ctx))


class CircleMax(NamedTuple):
    value: object
    angle: object


def sampled_circle_max(n: int, x, ctx: NumericContext | None = None, samples: int = 720,
                       polish: bool = True) -> CircleMax:
    """Max of ``|R_n|`` over ``samples`` equispaced points of ``|z| = x``,
    refined by golden-section search around the best sample."""
    ctx = ctx or NumericContext()
    mp = ctx.mp
    xr = _real(x, ctx)

    def h(theta):
        return abs(model_remainder(n, xr * mp.expj(theta), ctx))

    step = 2 * mp.pi / samples
    best_k, best = 0, None
    for k in range(samples):
        v = h(k * step)
        if best is None or v > best:
            best_k, best = k, v
    theta = best_k * step
    if polish and samples > 2:
        lo, hi = theta - step, theta + step
        invphi = (mp.sqrt(5) - 1) / 2
        c, d = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
        hc, hd = h(c), h(d)
        for _ in range(60):
            if hc > hd:
                hi, d, hd = d, c, hc
                c = hi - invphi * (hi - lo)
                hc = h(c)
            else:
                lo, c, hc = c, d, hd
                d = lo + invphi * (hi - lo)
                hd = h(d)
        cand, val = (c, hc) if hc > hd else (d, hd)
        if val > best:
            theta, best = cand, val
    return CircleMax(best, theta)


class LemmaProduct(NamedTuple):
    value: object
    eq14: Optional[bool]
    eq15: Optional[bool]


def lemma_product(n: int, z, ctx: NumericContext | None = None, slack=None) -> LemmaProduct:
    """``Q_n(z) Q_n(-z)`` plus the verdicts of whichever product bounds apply at ``rho = |z|``.

    ``eq15`` is only evaluated for real ``z``; its upper side ``<= 1`` is
    allowed ``slack`` (default ``2^(56-p)``) for rounding.
    """
    ctx = ctx or NumericContext()
    _check_order(n)
    mp = ctx.mp
    zz = to_approx(z, ctx)
    q = bessel_q(n).coeffs
    val = eval_poly(q, zz, ctx) * eval_poly(q, -zz, ctx)
    rho = abs(zz)
    eq14 = None
    if n >= max(14, rho * rho) - 1:
        eq14 = bool(mp.mpf(1) / 2 < abs(val) < mp.mpf(3) / 2)
    eq15 = None
    if zz.imag == 0 and n > max(2, (rho * rho + 4) / 8):
        if slack is None:
            slack = ctx.two_pow(56 - ctx.precision_bits)
        lower = 1 - rho * rho / (8 * n - 4)
        eq15 = bool(val.imag == 0 and lower <= val.real <= 1 + slack)
    return LemmaProduct(val, eq14, eq15)


# ---------------------------------------------------------------------------
# verification drivers

DEFAULT_ANGLES = (0, Fraction(1, 4), Fraction(1, 2), 1)  # multiples of pi
DEFAULT_RADII = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _ray_points(radius, angles, ctx):
    mp = ctx.mp
    return [radius * mp.expjpi(from_rational(Fraction(t), ctx).real) for t in angles]


def verify_thm1(n: int, x, ctx: NumericContext | None = None, angles=DEFAULT_ANGLES,
                radii=DEFAULT_RADII) -> List[BoundReport]:
    """Fixed-``x`` bound for ``g`` at ``z = r x e^(i pi t)``."""
    ctx = ctx or NumericContext()
    _require_order(n, x)
    xr = _real(x, ctx)
    notes = () if _as_exact(x) is not None else ("n >= n0(x) compared in floating point",)
    reports = []
    for frac in radii:
        r = from_rational(frac, ctx).real * xr
        for t, z in zip(angles, _ray_points(r, angles, ctx)):
            reports.append(BoundReport(
                Inequality.THM1_9, {"n": n, "x": x, "z_abs_fraction": frac, "arg_over_pi": t},
                measured=model_error(n, z, ctx), upper=thm1_bound(n, x, r, ctx), notes=notes))
    return reports


def verify_thm1_xn(n: int, ctx: NumericContext | None = None, angles=DEFAULT_ANGLES,
                   radii=DEFAULT_RADII) -> List[BoundReport]:
    """``x = x_n`` bound for ``g`` at ``z = r x_n e^(i pi t)``; strict inequality required."""
    ctx = ctx or NumericContext()
    xn = x_n(n, ctx)
    reports = []
    for frac in radii:
        r = from_rational(frac, ctx).real * xn
        for t, z in zip(angles, _ray_points(r, angles, ctx)):
            reports.append(BoundReport(
                Inequality.THM1_10, {"n": n, "x": "x_n", "z_abs_fraction": frac, "arg_over_pi": t},
                measured=model_error(n, z, ctx), upper=thm1_xn_bound(n, r, ctx), strict_upper=True))
    return reports


def verify_prop2(n: int, x, ctx: NumericContext | None = None, samples: int = 720) -> BoundReport:
    ctx = ctx or NumericContext()
    lower, upper = prop2_bounds(n, x, ctx)
    cm = sampled_circle_max(n, x, ctx, samples)
    return BoundReport(Inequality.PROP2_12, {"n": n, "x": x, "samples": samples},
                       measured=cm.value, lower=lower, upper=upper, strict_upper=True,
                       notes=(f"argmax angle {ctx.nstr(cm.angle, 15)}",))


def verify_cor13(n: int, x, m_count: int = 60) -> List[BoundReport]:
    """Exact rational comparison for ``m = 2n+1 .. 2n+m_count``."""
    q = _as_exact(x)
    if q is None:
        raise TypeError("COR_13 verification needs a rational x")
    _require_order(n, q)
    m_hi = 2 * n + m_count
    d = exact.defects(n, m_hi)
    return [
        BoundReport(Inequality.COR_13, {"n": n, "x": q, "m": m}, measured=abs(d[m - 1]),
                    upper=cauchy_coeff_bound(n, m, q), strict_upper=True)
        for m in range(2 * n + 1, m_hi + 1)
    ]


def lemma_disk_samples(count: int, rho=1, seed: int = 0) -> List[tuple]:
    """Deterministic points ``(re, im)`` as exact fractions, uniform in ``|z| <= rho``."""
    rng = random.Random(seed)
    rho = Fraction(rho)
    pts = []
    while len(pts) < count:
        re = Fraction(rng.randint(-10**6, 10**6), 10**6) * rho
        im = Fraction(rng.randint(-10**6, 10**6), 10**6) * rho
        if re * re + im * im <= rho * rho:
            pts.append((re, im))
    return pts


def verify_lemma14(n: int, ctx: NumericContext | None = None, samples: int = 200, rho=1,
                   seed: int = 0) -> List[BoundReport]:
    ctx = ctx or NumericContext()
    mp = ctx.mp
    if not n >= max(14, Fraction(rho) ** 2) - 1:
        raise OrderTooSmallError(f"LEMMA_14 needs n >= max(14, rho^2) - 1, got n={n}")
    q = bessel_q(n).coeffs
    out = []
    for re, im in lemma_disk_samples(samples, rho, seed):
        z = mp.mpc(from_rational(re, ctx).real, from_rational(im, ctx).real)
        val = abs(eval_poly(q, z, ctx) * eval_poly(q, -z, ctx))
        out.append(BoundReport(Inequality.LEMMA_14, {"n": n, "z": (re, im), "rho": rho}, measured=val,
                               lower=mp.mpf(1) / 2, upper=mp.mpf(3) / 2, strict_lower=True, strict_upper=True))
    return out


def verify_lemma15(n: int, ctx: NumericContext | None = None, points: int = 101, rho=1,
                   slack=None) -> List[BoundReport]:
    """Real grid ``x_j = -rho + 2 rho j/(points-1)``; upper side ``<= 1 + slack``."""
    ctx = ctx or NumericContext()
    rho = Fraction(rho)
    if not n > max(2, (rho * rho + 4) / 8):
        raise OrderTooSmallError(f"LEMMA_15 needs n > max(2, (rho^2+4)/8), got n={n}")
    if slack is None:
        slack = ctx.two_pow(56 - ctx.precision_bits)
    q = bessel_q(n).coeffs
    lower = from_rational(1 - rho * rho / (8 * n - 4), ctx).real
    out = []
    for j in range(points):
        xj = -rho + 2 * rho * Fraction(j, points - 1)
        val = (eval_poly(q, xj, ctx) * eval_poly(q, -xj, ctx)).real
        out.append(BoundReport(Inequality.LEMMA_15, {"n": n, "x": xj, "rho": rho}, measured=val,
                               lower=lower, upper=1 + slack, notes=(f"rounding slack {ctx.nstr(slack, 5)}",)))
    return out


# ---------------------------------------------------------------------------
# convergence table


@dataclass(frozen=True)
class TableRow:
    n: int
    x: object
    z_abs: object
    measured_remainder: object
    bound_eq9: object
    bound_eq10: object
    ratio9: object
    ratio10: object
    rate_norm_085: object

    FIELDS = ("n", "x", "z_abs", "measured_remainder", "bound_eq9", "bound_eq10", "ratio9", "ratio10",
              "rate_norm_085")


def rate_scale(n: int, ctx: NumericContext):
    """``0.85^n n^(1-n)``."""
    return from_rational(RATE_BASE, ctx).real ** n * ctx.mp.mpf(n) ** (1 - n)


def table_row(n: int, x, z_abs, ctx: NumericContext) -> TableRow:
    mp = ctx.mp
    measured = model_error(n, z_abs, ctx)
    b9 = thm1_bound(n, x, z_abs, ctx)
    zr = _real(z_abs, ctx)
    b10 = thm1_xn_bound(n, zr, ctx) if n >= 13 and zr < x_n(n, ctx) else None
    return TableRow(
        n=n, x=_real(x, ctx), z_abs=zr, measured_remainder=measured,
        bound_eq9=b9, bound_eq10=b10,
        ratio9=measured / b9, ratio10=None if b10 is None else measured / b10,
        rate_norm_085=measured / rate_scale(n, ctx),
    )


def convergence_table(n_min: int, n_max: int, mode: str = "xn", z_fraction=Fraction(9, 10),
                      ctx: NumericContext | None = None, x=None) -> List[TableRow]:
    """Measured ``|r_n(g; z)|`` at real ``z = z_fraction * x`` next to both error bounds.

    ``mode="fixed"`` uses the given ``x``; ``mode="xn"`` uses ``x = x_n`` per row.
    Rows are independent and come back ordered by ``n``.
    """
    ctx = ctx or NumericContext()
    if n_max < n_min:
        raise ValueError("empty range")
    zf = _as_exact(z_fraction)
    if zf is not None and not 0 < zf < 1:
        raise ValueError("z_fraction must lie in (0, 1)")
    if mode == "fixed":
        if x is None:
            raise ValueError("fixed mode needs x")
        need = max(13, math.ceil(n0(x)))
        if n_min < need:
            raise OrderTooSmallError(f"n_min={n_min} < max(13, ceil(n0(x)))={need} for x={x}")
    elif mode == "xn":
        if n_min < 13:
            raise OrderTooSmallError("xn mode needs n_min >= 13")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    zfrac = _real(z_fraction, ctx)
    rows = []
    for n in range(n_min, n_max + 1):
        xx = x if mode == "fixed" else x_n(n, ctx)
        rows.append(table_row(n, xx, zfrac * _real(xx, ctx), ctx))
    return rows
