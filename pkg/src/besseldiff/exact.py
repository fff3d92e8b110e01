"""Exact rational oracle.

Everything here is computed with ``fractions.Fraction`` and never touches a
floating-point number: power sums of the Bessel zeros (Newton's identities on
the monic ``y_n``), the stencil moments ``A_m^n = sum_k (a_nk^m - b_nk^m)``,
``gamma_n = n!^2/(2n)!^2`` and the model remainder ``R_n(z)`` for
``g(z) = z/(1-z)`` by two independent formulas.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import List, Tuple

from .bessel import _check_order, bessel_q, bessel_y, transform_mg


class PoleError(ZeroDivisionError):
    """Evaluation point hits the pole of ``R_n`` at ``z = 1``."""


class NodeCoincidenceError(ZeroDivisionError):
    """Evaluation point coincides with a root of ``M_n``/``G_n`` (or of ``Q_n(+-w)``)."""

    def __init__(self, which: str, z):
        self.which = which
        self.z = z
        super().__init__(f"{which} vanishes at z = {z}")


@dataclass(frozen=True)
class ExactComplexRational:
    """Complex number with exact ``Fraction`` real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def coerce(cls, x) -> "ExactComplexRational":
        if isinstance(x, ExactComplexRational):
            return x
        if isinstance(x, (Rational, str)):
            return cls(Fraction(x))
        raise TypeError(f"cannot treat {type(x).__name__} as an exact complex rational")

    def __add__(self, other):
        try:
            o = ExactComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = ExactComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return ExactComplexRational(self.re * other, self.im * other)
        try:
            o = ExactComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return ExactComplexRational(self.re, -self.im)

    def reciprocal(self):
        d = self.abs2()
        if d == 0:
            raise ZeroDivisionError("division by exact complex zero")
        return ExactComplexRational(self.re / d, -self.im / d)

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return ExactComplexRational(self.re / other, self.im / other)
        try:
            o = ExactComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return ExactComplexRational.coerce(other) * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.reciprocal() ** (-e)
        result, base = ExactComplexRational(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, ExactComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplexRational({self.re}, {self.im})"


@lru_cache(maxsize=64)
def _power_sums_cached(n: int, j_max: int) -> Tuple[Fraction, ...]:
    # monic y_n: z^n + c_1 z^(n-1) + ... + c_n
    y = bessel_y(n).monic().coeffs
    c = [y[n - i] for i in range(n + 1)]
    p = [Fraction(0)] * (j_max + 1)
    for j in range(1, j_max + 1):
        s = j * c[j] if j <= n else Fraction(0)
        for i in range(1, min(j - 1, n) + 1):
            s += c[i] * p[j - i]
        p[j] = -s
    return tuple(p[1:])


def power_sums(n: int, j_max: int) -> List[Fraction]:
    """Exact ``[sigma_1, ..., sigma_jmax]`` with ``sigma_j = sum_k alpha_nk^j``."""
    _check_order(n)
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    return list(_power_sums_cached(n, j_max))


def gamma(n: int) -> Fraction:
    """``n!^2 / (2n)!^2``."""
    _check_order(n)
    return Fraction(factorial(n) ** 2, factorial(2 * n) ** 2)


def _a_from_sums(m: int, sigma) -> Fraction:
    # A_m^n = -sum_{j=0}^{(m-1)//2} C(m, 2j+1) sigma_{2j+1} / 4^j
    row = [1]
    for _ in range(m):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    total = Fraction(0)
    for j in range((m - 1) // 2 + 1):
        s = sigma[2 * j]
        if s:
            total += row[2 * j + 1] * s / 4**j
    return -total


def a_mn(n: int, m: int) -> Fraction:
    """Exact ``A_m^n = sum_k (a_nk^m - b_nk^m)`` from the odd power sums."""
    _check_order(n)
    if m < 1:
        raise ValueError("m must be >= 1")
    return _a_from_sums(m, _power_sums_cached(n, m))


def defects(n: int, m_max: int) -> List[Fraction]:
    """``[m - A_m^n for m = 1..m_max]``; zero for ``m <= 2n``."""
    _check_order(n)
    sigma = _power_sums_cached(n, max(m_max, 1))
    out = []
    row = [1]
    for m in range(1, m_max + 1):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
        total = Fraction(0)
        for j in range((m - 1) // 2 + 1):
            s = sigma[2 * j]
            if s:
                total += row[2 * j + 1] * s / 4**j
        out.append(m + total)
    return out


def model_remainder_exact(n: int, z) -> ExactComplexRational:
    """Exact ``R_n(z) = 1/(z-1)^2 + M_n'/M_n - G_n'/G_n``.

    ``z R_n(z)`` is the remainder of the differentiation sum for
    ``g(z) = z/(1-z)``.
    """
    _check_order(n)
    z = ExactComplexRational.coerce(z)
    if z == 1:
        raise PoleError("R_n has a pole at z = 1")
    m, g = transform_mg(n)
    mz, gz = m(z), g(z)
    if mz == 0:
        raise NodeCoincidenceError("M_n", z)
    if gz == 0:
        raise NodeCoincidenceError("G_n", z)
    return (z - 1) ** -2 + m.derivative()(z) / mz - g.derivative()(z) / gz


def closed_form_exact(n: int, z) -> ExactComplexRational:
    """Exact ``R_n(z) = (-1)^n z^(2n) gamma_n / ((z-1)^(2n+2) Q_n(w) Q_n(-w))``, ``w = z/(z-1)``."""
    _check_order(n)
    z = ExactComplexRational.coerce(z)
    if z == 1:
        raise PoleError("R_n has a pole at z = 1")
    w = z / (z - 1)
    q = bessel_q(n)
    qw, qmw = q(w), q(-w)
    if qw == 0:
        raise NodeCoincidenceError("Q_n(w)", z)
    if qmw == 0:
        raise NodeCoincidenceError("Q_n(-w)", z)
    sign = -1 if n % 2 else 1
    return sign * gamma(n) * z ** (2 * n) / ((z - 1) ** (2 * n + 2) * qw * qmw)


def remainder_series_exact(n: int, z, m_max: int) -> ExactComplexRational:
    """Truncated series ``sum_{m=2n+1}^{m_max} (m - A_m^n) z^(m-1)`` for ``R_n(z)``."""
    z = ExactComplexRational.coerce(z)
    d = defects(n, m_max)
    total = ExactComplexRational(0)
    zp = z ** (2 * n)
    for m in range(2 * n + 1, m_max + 1):
        total = total + d[m - 1] * zp
        zp = zp * z
    return total


def random_rational_points(count: int, radius=3, seed: int = 0, avoid_n: int | None = None) -> List[ExactComplexRational]:
    """Deterministic rational points with ``|z| <= radius``, mostly off the real axis.

    With ``avoid_n`` set, points where ``R_n`` is undefined (``z = 1`` or a root of
    ``M_n``, ``G_n``, ``Q_n(+-w)``) are skipped.
    """
    rng = random.Random(seed)
    r2 = Fraction(radius) ** 2
    scale = 100 * Fraction(radius).numerator
    mg = transform_mg(avoid_n) if avoid_n is not None else None
    pts = []
    while len(pts) < count:
        re = Fraction(rng.randint(-scale, scale), rng.randint(1, 100))
        im = Fraction(rng.randint(-scale, scale), rng.randint(1, 100)) if rng.random() < 0.75 else Fraction(0)
        z = ExactComplexRational(re, im)
        if z.abs2() > r2 or z == 1:
            continue
        if mg is not None:
            if mg[0](z) == 0 or mg[1](z) == 0:
                continue
        pts.append(z)
    return pts
