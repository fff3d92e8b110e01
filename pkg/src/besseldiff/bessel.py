"""Exact coefficient lists for the Bessel polynomial family.

Polynomials are dense lists of ``Fraction`` in ascending degree order:

* ``y_n(z) = sum_k (n+k)! / ((n-k)! k!) (z/2)^k``
* ``Q_n(z) = n!/(2n)! sum_k (2n-k)!/(n-k)! z^k/k!``, so ``Q_n(0) = 1`` and
  ``Q_n(z) = n!/(2n)! z^n y_n(2/z)``
* ``M_n(z) = (1-z)^n Q_n(z/(z-1))`` and ``G_n(z) = (1-z)^n Q_n(z/(1-z))``
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Tuple


@dataclass(frozen=True)
class RationalPolynomial:
    """Immutable polynomial with exact rational coefficients (ascending order).

    Trailing zeros are trimmed on construction; the zero polynomial is ``(0,)``.
    """

    coeffs: Tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, z):
        """Exact Horner evaluation; ``z`` may be an int, Fraction or ExactComplexRational."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self == RationalPolynomial(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        n = max(len(self), len(other))
        a = self.coeffs + (Fraction(0),) * (n - len(self))
        b = other.coeffs + (Fraction(0),) * (n - len(other))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            return RationalPolynomial(c * other for c in self.coeffs)
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "RationalPolynomial":
        lead = self.coeffs[-1]
        if lead == 0:
            raise ZeroDivisionError("zero polynomial has no monic normalization")
        return RationalPolynomial(c / lead for c in self.coeffs)

    def reversed(self, degree: int | None = None) -> "RationalPolynomial":
        """``z^d p(1/z)`` with ``d`` defaulting to the degree."""
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return RationalPolynomial(reversed(cs[: d + 1]))

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"


def _check_order(n):
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("order n must be an int")
    if n < 1:
        raise ValueError(f"order n must be >= 1, got {n}")


def bessel_y(n: int) -> RationalPolynomial:
    """Bessel polynomial ``y_n`` from the factorial formula."""
    _check_order(n)
    return RationalPolynomial(
        Fraction(factorial(n + k), factorial(n - k) * factorial(k) * 2**k) for k in range(n + 1)
    )


def bessel_y_recurrence(n: int) -> RationalPolynomial:
    """``y_n`` via ``y_n = (2n-1) z y_{n-1} + y_{n-2}``, ``y_0 = 1``, ``y_1 = 1 + z``.

    Independent construction used to cross-check :func:`bessel_y`.
    """
    _check_order(n)
    prev, cur = RationalPolynomial([1]), RationalPolynomial([1, 1])
    for k in range(2, n + 1):
        prev, cur = cur, RationalPolynomial([0, 2 * k - 1]) * cur + prev
    return cur


def bessel_q(n: int) -> RationalPolynomial:
    """Normalized reverse Bessel polynomial ``Q_n`` with ``Q_n(0) = 1``."""
    _check_order(n)
    scale = Fraction(factorial(n), factorial(2 * n))
    return RationalPolynomial(
        scale * Fraction(factorial(2 * n - k), factorial(n - k) * factorial(k)) for k in range(n + 1)
    )


def _one_minus_z_powers(n: int):
    """Coefficient lists of ``(1-z)^j`` for ``j = 0..n`` by repeated convolution."""
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        row = [0] * (len(prev) + 1)
        for i, c in enumerate(prev):
            row[i] += c
            row[i + 1] -= c
        rows.append(row)
    return rows


def transform_mg(n: int) -> Tuple[RationalPolynomial, RationalPolynomial]:
    """Return ``(M_n, G_n)``.

    With ``Q_n = sum q_k z^k``:
    ``M_n = sum q_k (-1)^k z^k (1-z)^(n-k)`` and ``G_n = sum q_k z^k (1-z)^(n-k)``.
    ``M_n`` vanishes at ``1/a_nk`` and ``G_n`` at ``1/b_nk``.
    """
    q = bessel_q(n).coeffs
    powers = _one_minus_z_powers(n)
    m = [Fraction(0)] * (n + 1)
    g = [Fraction(0)] * (n + 1)
    for k, qk in enumerate(q):
        sign = -1 if k % 2 else 1
        for i, c in enumerate(powers[n - k]):
            term = qk * c
            m[k + i] += sign * term
            g[k + i] += term
    return RationalPolynomial(m), RationalPolynomial(g)
