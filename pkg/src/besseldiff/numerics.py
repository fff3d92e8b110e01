"""Precision contract for the approximate side of the library.

Every approximate value is an ``mpmath`` number owned by the private
``MPContext`` of a :class:`NumericContext`.  Nothing here touches the global
``mpmath.mp`` context, so two contexts of different precision can be used side
by side (or from different threads) without interfering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import mpmath
from mpmath.libmp import from_rational as _mpf_from_rational

DEFAULT_PRECISION = 256
MIN_PRECISION = 64

ApproxComplex = mpmath.mpc
Number = Union[int, Fraction, "ExactComplexRational", mpmath.mpf, mpmath.mpc, complex, float]


@dataclass(frozen=True)
class NumericContext:
    """Working precision (binary digits of significand) for complex arithmetic."""

    precision_bits: int = DEFAULT_PRECISION
    mp: mpmath.MPContext = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if isinstance(self.precision_bits, bool) or not isinstance(self.precision_bits, int):
            raise TypeError("precision_bits must be an int")
        if self.precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}, got {self.precision_bits}")
        mp = mpmath.MPContext()
        mp.prec = self.precision_bits
        object.__setattr__(self, "mp", mp)

    @property
    def eps(self) -> mpmath.mpf:
        """Unit roundoff bound 2**(1 - precision_bits)."""
        return self.mp.ldexp(self.mp.mpf(1), 1 - self.precision_bits)

    def two_pow(self, e: int) -> mpmath.mpf:
        return self.mp.ldexp(self.mp.mpf(1), e)

    def digits(self) -> int:
        """Significant decimal digits used when serializing values."""
        return max(1, self.precision_bits // 3)

    def nstr(self, x, digits: int | None = None) -> str:
        return self.mp.nstr(x, digits or self.digits(), strip_zeros=True)

    def with_precision(self, precision_bits: int) -> "NumericContext":
        return NumericContext(precision_bits)


def _rational_to_mpf(q, ctx: NumericContext) -> mpmath.mpf:
    q = Fraction(q)
    raw = _mpf_from_rational(q.numerator, q.denominator, ctx.precision_bits, "n")
    return ctx.mp.make_mpf(raw)


def from_rational(q, ctx: NumericContext) -> mpmath.mpc:
    """Round an exact rational (real or complex) to nearest at ``ctx`` precision.

    Real and imaginary parts are each rounded once, so the result is the
    correctly rounded value componentwise.
    """
    from .exact import ExactComplexRational

    if isinstance(q, ExactComplexRational):
        return ctx.mp.mpc(_rational_to_mpf(q.re, ctx), _rational_to_mpf(q.im, ctx))
    if isinstance(q, (Rational, str)):
        return ctx.mp.mpc(_rational_to_mpf(q, ctx))
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


def to_approx(x, ctx: NumericContext) -> mpmath.mpc:
    """Convert any supported scalar to an ``mpc`` of ``ctx``.

    Exact inputs are rounded correctly; inexact ones are re-rounded.
    """
    from .exact import ExactComplexRational

    if isinstance(x, (Rational, ExactComplexRational)):
        return from_rational(x, ctx)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)) or hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
        return ctx.mp.mpc(x)
    if isinstance(x, (float, complex)):
        return ctx.mp.mpc(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an approximate complex")


def eval_poly(coeffs: Sequence, z, ctx: NumericContext) -> mpmath.mpc:
    """Horner evaluation of ``sum(coeffs[k] * z**k)`` at ``ctx`` precision.

    ``coeffs`` are in ascending degree order and may be exact rationals or
    approximate numbers.
    """
    if len(coeffs) == 0:
        raise ValueError("empty coefficient list")
    z = to_approx(z, ctx)
    acc = to_approx(coeffs[-1], ctx)
    for c in reversed(coeffs[:-1]):
        acc = acc * z + to_approx(c, ctx)
    return acc


def eval_poly_with_derivative(coeffs: Sequence, z, ctx: NumericContext):
    """Return ``(p(z), p'(z))`` by a joint Horner pass."""
    if len(coeffs) == 0:
        raise ValueError("empty coefficient list")
    z = to_approx(z, ctx)
    p = to_approx(coeffs[-1], ctx)
    dp = ctx.mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + to_approx(c, ctx)
    return p, dp
