"""The 2n-node differentiation stencil and its application.

For the zeros ``alpha_k`` of ``y_n`` the multipliers are
``a_k = 1 - alpha_k/2`` and ``b_k = 1 + alpha_k/2``, and

    z f'(z) ~ sum_k ( f(a_k z) - f(b_k z) ),

exact for polynomials of degree ``<= 2n``.  The remainder of a Taylor series is
computed from the exact defects ``m - A_m^n`` rather than by subtracting two
nearly equal numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, List, NamedTuple, Sequence, Tuple

from . import exact
from .exact import ExactComplexRational
from .numerics import NumericContext, eval_poly, to_approx
from .roots import Check, ZeroSet, certify


class StencilError(ValueError):
    """Stencil invariants fail; usually the zeros were computed at too low a precision."""


class NodeEvaluationError(RuntimeError):
    def __init__(self, node, cause):
        self.node = node
        self.cause = cause
        super().__init__(f"evaluator failed at node {node}: {cause!r}")


@dataclass(frozen=True)
class Stencil:
    n: int
    a_nodes: Tuple
    b_nodes: Tuple
    precision_bits: int

    @property
    def ctx(self) -> NumericContext:
        return NumericContext(self.precision_bits)

    @property
    def nodes(self):
        """All 2n multipliers, a-nodes first, in canonical order."""
        return self.a_nodes + self.b_nodes


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated series ``f(z) = sum_{m=0}^{M} coeffs[m] z^m``."""

    coeffs: Tuple

    def __init__(self, coeffs: Sequence):
        cs = tuple(coeffs)
        if not cs:
            raise ValueError("empty series")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Rational, ExactComplexRational)) for c in self.coeffs)

    def __call__(self, z, ctx: NumericContext):
        return eval_poly(self.coeffs, z, ctx)

    def z_derivative(self, z, ctx: NumericContext):
        """``z f'(z)`` of the truncated polynomial."""
        if len(self.coeffs) == 1:
            return ctx.mp.mpc(0)
        scaled = [0] + [m * c if isinstance(c, (Rational, ExactComplexRational)) else m * to_approx(c, ctx)
                        for m, c in enumerate(self.coeffs) if m > 0]
        return eval_poly(scaled, z, ctx)


def model_series(order: int) -> TaylorSeries:
    """``g(z) = z/(1-z)`` truncated at ``order``: coefficients ``0, 1, 1, ...``."""
    return TaylorSeries([Fraction(0)] + [Fraction(1)] * order)


def model_g(z):
    return z / (1 - z)


def model_zg_prime(z):
    return z / (1 - z) ** 2


def check_stencil(st: Stencil) -> List[Check]:
    ctx = st.ctx
    mp = ctx.mp
    tol = ctx.two_pow(-(st.precision_bits // 2))
    n = st.n
    a_mods = [abs(a) for a in st.a_nodes]
    b_mods = [abs(b) for b in st.b_nodes]
    checks = []
    m = min(a_mods) - 1
    checks.append(Check("a_outside_unit_circle", m > -tol, m, "|a_nk| > 1"))
    m = 1 - max(b_mods)
    checks.append(Check("b_inside_unit_circle", m > -tol, m, "|b_nk| < 1"))
    m = mp.mpf(n + 2) / (n + 1) - max(a_mods)
    checks.append(Check("a_modulus_cap", m >= -tol, m, "|a_nk| <= (n+2)/(n+1)"))
    nodes = st.nodes
    if len(nodes) > 1:
        dist = min(abs(nodes[i] - nodes[j]) for i in range(len(nodes)) for j in range(i))
    else:
        dist = mp.inf
    checks.append(Check("nodes_distinct", dist > tol, dist - tol, "pairwise distinct multipliers"))
    return checks


def build_stencil(zs: ZeroSet, verify: bool = True) -> Stencil:
    """Stencil from a zero set; both the zeros and the stencil are checked."""
    ctx = zs.ctx
    if verify:
        report = certify(zs)
        if not report.passed:
            bad = ", ".join(c.name for c in report.checks if not c.passed)
            raise StencilError(f"zero set for n={zs.n} is not certified ({bad})")
    half = ctx.mp.mpf(1) / 2
    a = tuple(1 - half * alpha for alpha in zs.alphas)
    b = tuple(1 + half * alpha for alpha in zs.alphas)
    st = Stencil(n=zs.n, a_nodes=a, b_nodes=b, precision_bits=zs.precision_bits)
    if verify:
        bad = [c.name for c in check_stencil(st) if not c.passed]
        if bad:
            raise StencilError(f"stencil invariants violated for n={zs.n}: {', '.join(bad)}")
    return st


def stencil_for(n: int, ctx: NumericContext | None = None) -> Stencil:
    from .roots import find_zeros

    return build_stencil(find_zeros(n, ctx or NumericContext()))


def apply_series(st: Stencil, f: TaylorSeries, z, ctx: NumericContext | None = None):
    """``sum_k (f(a_k z) - f(b_k z))`` with ``f`` the truncated polynomial.

    The caller is responsible for ``|z| max|a_k|`` lying where the truncated
    series represents ``f`` well.
    """
    if not f.coeffs:
        raise ValueError("empty series")
    ctx = ctx or st.ctx
    coeffs = [to_approx(c, ctx) for c in f.coeffs]
    z = to_approx(z, ctx)
    mp = ctx.mp
    return mp.fsum(eval_poly(coeffs, mp.mpc(a) * z, ctx) - eval_poly(coeffs, mp.mpc(b) * z, ctx)
                   for a, b in zip(st.a_nodes, st.b_nodes))


def apply_callable(st: Stencil, f: Callable, z, ctx: NumericContext | None = None):
    """Differentiation sum for a black-box ``f``; nodes are passed in canonical order.

    ``f`` must be pure.  An exception raised by ``f`` is re-raised as
    :class:`NodeEvaluationError` naming the offending node.
    """
    ctx = ctx or st.ctx
    mp = ctx.mp
    z = to_approx(z, ctx)
    total = mp.mpc(0)
    for a, b in zip(st.a_nodes, st.b_nodes):
        values = []
        for node in (mp.mpc(a) * z, mp.mpc(b) * z):
            try:
                values.append(mp.mpc(f(node)))
            except Exception as e:
                raise NodeEvaluationError(node, e) from e
        total += values[0] - values[1]
    return total


class Remainder(NamedTuple):
    value: object
    identically_zero: bool
    order: int


def remainder_series(n: int, f: TaylorSeries, z, ctx: NumericContext | None = None) -> Remainder:
    """Truncated remainder ``sum_{m=2n+1}^{M} (m - A_m^n) f_m z^m`` without cancellation.

    For ``M <= 2n`` the remainder vanishes identically and is returned as an
    exact zero with ``identically_zero`` set.
    """
    ctx = ctx or NumericContext()
    if not f.coeffs:
        raise ValueError("empty series")
    M = f.order
    if M <= 2 * n:
        return Remainder(ctx.mp.mpc(0), True, M)
    d = exact.defects(n, M)
    tail = []
    for m in range(2 * n + 1, M + 1):
        c = f.coeffs[m]
        if isinstance(c, (Rational, ExactComplexRational)):
            tail.append(d[m - 1] * c if isinstance(c, Rational) else c * d[m - 1])
        else:
            tail.append(to_approx(d[m - 1], ctx) * to_approx(c, ctx))
    z = to_approx(z, ctx)
    return Remainder(z ** (2 * n + 1) * eval_poly(tail, z, ctx), False, M)


class TailBounds(NamedTuple):
    stencil_sum: object
    derivative: object
    remainder: object


def truncation_tail_bounds(st: Stencil, z_abs, order: int, coeff_bound=1,
                           ctx: NumericContext | None = None) -> TailBounds:
    """Bounds on what truncation at ``order`` omits when ``|f_m| <= coeff_bound``.

    ``stencil_sum`` bounds the omitted part of ``sum_k (f(a_k z) - f(b_k z))``,
    ``derivative`` that of ``z f'(z)`` and ``remainder`` their sum.  Requires
    ``z_abs * max|a_k| < 1``.
    """
    ctx = ctx or st.ctx
    mp = ctx.mp
    r = to_approx(z_abs, ctx).real
    C = to_approx(coeff_bound, ctx).real
    M = order
    if r * max(abs(a) for a in st.a_nodes) >= 1:
        raise ValueError("tail bound needs |z| max|a_nk| < 1")

    def geometric(s):
        return s ** (M + 1) / (1 - s)

    # the derivative bound is attained when every |f_m| = C; pad both for rounding
    pad = 1 + ctx.two_pow(-(ctx.precision_bits // 2))
    sum_tail = pad * C * mp.fsum(geometric(abs(a) * r) + geometric(abs(b) * r) for a, b in zip(st.a_nodes, st.b_nodes))
    der_tail = pad * C * r ** (M + 1) * ((M + 1) - M * r) / (1 - r) ** 2
    return TailBounds(sum_tail, der_tail, sum_tail + der_tail)
