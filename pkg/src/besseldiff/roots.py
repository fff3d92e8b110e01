"""Zeros of the Bessel polynomials at configurable precision, with certificates.

The solver is a simultaneous Aberth-Ehrlich iteration on the monic ``y_n``
followed by per-root Newton polishing.  Results are only handed out together
with the checks of :func:`certify`: the semi-annulus
``1/(n+2/3) <= |alpha| <= 2/(n+1)``, ``Re alpha < -(n^3(n+1))^(-1/2)``,
simplicity, conjugate closure, ``sum alpha = -1`` and a residual bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

from .bessel import _check_order, bessel_y
from .numerics import NumericContext, eval_poly_with_derivative, from_rational

log = logging.getLogger(__name__)

GUARD_BITS = 32
# root condition numbers of y_n grow like 2^(1.85 n); extra bits per unit of n
GUARD_BITS_PER_ORDER = 2


class ConvergenceError(RuntimeError):
    """Root iteration hit its cap; carries the last step size for diagnostics."""

    def __init__(self, n, iterations, max_step):
        self.n = n
        self.iterations = iterations
        self.max_step = max_step
        super().__init__(f"no convergence for n={n} after {iterations} iterations (last relative step {max_step})")


@dataclass(frozen=True)
class ZeroSet:
    n: int
    alphas: Tuple
    residual_bound: object
    precision_bits: int
    iterations: int = 0

    @property
    def ctx(self) -> NumericContext:
        return NumericContext(self.precision_bits)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    margin: object
    detail: str = ""


@dataclass(frozen=True)
class CertificationReport:
    n: int
    precision_bits: int
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def canonical_order(values):
    return sorted(values, key=lambda a: (a.real, a.imag))


def _initial_guesses(n, work):
    mp = work.mp
    radius = mp.mpf(3) / (2 * n + 2)
    # irrational offset keeps the start off the real axis and off symmetric lines
    offset = (mp.sqrt(2) - 1) * mp.pi / (4 * n)
    return [
        radius * mp.expjpi(mp.mpf(1) / 2 + (k + mp.mpf(1) / 2) / n + offset / mp.pi)
        for k in range(n)
    ]


def _aberth(coeffs, start, work, target_bits, cap):
    mp = work.mp
    z = list(start)
    n = len(z)
    step_tol = mp.ldexp(1, -target_bits + 10)
    max_step = mp.inf
    for it in range(1, cap + 1):
        new = []
        max_step = mp.mpf(0)
        for i, zi in enumerate(z):
            p, dp = eval_poly_with_derivative(coeffs, zi, work)
            if p == 0:
                new.append(zi)
                continue
            ratio = p / dp
            s = mp.fsum(1 / (zi - zj) for j, zj in enumerate(z) if j != i)
            w = ratio / (1 - ratio * s)
            new.append(zi - w)
            rel = abs(w) / abs(zi) if zi != 0 else abs(w)
            if rel > max_step:
                max_step = rel
        z = new
        if max_step < step_tol:
            return z, it
    raise ConvergenceError(n, cap, max_step)


def _newton_polish(coeffs, z, work, steps=3):
    for _ in range(steps):
        p, dp = eval_poly_with_derivative(coeffs, z, work)
        if p == 0 or dp == 0:
            break
        z = z - p / dp
    return z


def _symmetrize(zs, work):
    """Enforce exact conjugate closure (y_n has real coefficients)."""
    mp = work.mp
    tol = mp.ldexp(1, -work.precision_bits // 2)
    real = [z for z in zs if abs(z.imag) <= tol * max(abs(z), 1)]
    upper = [z for z in zs if z.imag > 0 and z not in real]
    lower = [z for z in zs if z.imag < 0 and z not in real]
    if len(upper) != len(lower):
        return zs
    out = [mp.mpc(z.real, 0) for z in real]
    remaining = list(lower)
    for u in upper:
        j = min(range(len(remaining)), key=lambda k: abs(remaining[k] - mp.conj(u)))
        v = remaining.pop(j)
        re = (u.real + v.real) / 2
        im = (u.imag - v.imag) / 2
        out.append(mp.mpc(re, im))
        out.append(mp.mpc(re, -im))
    return out


def _relative_residual(coeffs_exact, alpha, hi):
    """``|y(alpha)| / sum |c_k| |alpha|^k`` evaluated in the wider context ``hi``."""
    a = hi.mp.mpc(alpha)
    val = hi.mp.mpc(0)
    scale = hi.mp.mpf(0)
    absa = abs(a)
    for c in reversed(coeffs_exact):
        val = val * a + from_rational(c, hi)
        scale = scale * absa + abs(from_rational(c, hi))
    return abs(val) / scale


def find_zeros(n: int, ctx: NumericContext | None = None) -> ZeroSet:
    """All ``n`` zeros of ``y_n`` at ``ctx`` precision, canonically ordered."""
    _check_order(n)
    ctx = ctx or NumericContext()
    work = NumericContext(ctx.precision_bits + GUARD_BITS + GUARD_BITS_PER_ORDER * n)
    y = bessel_y(n)
    monic = [from_rational(c, work) for c in y.monic().coeffs]

    zs, iterations = _aberth(monic, _initial_guesses(n, work), work, ctx.precision_bits, cap=200 * n)
    zs = [_newton_polish(monic, z, work) for z in zs]
    zs = _symmetrize(zs, work)
    # real zero of odd-degree y_n: polish along the real axis only
    zs = [_newton_polish(monic, z, work) if z.imag == 0 else z for z in zs]
    alphas = tuple(canonical_order(ctx.mp.mpc(z) for z in zs))

    hi = NumericContext(2 * ctx.precision_bits)
    residual = max(_relative_residual(y.coeffs, a, hi) for a in alphas)
    if residual > ctx.two_pow(-ctx.precision_bits + 20):
        raise ConvergenceError(n, iterations, residual)
    log.debug("find_zeros n=%d bits=%d iterations=%d residual=%s", n, ctx.precision_bits, iterations, residual)
    return ZeroSet(n=n, alphas=alphas, residual_bound=ctx.mp.mpf(residual), precision_bits=ctx.precision_bits,
                   iterations=iterations)


def certify(zs: ZeroSet) -> CertificationReport:
    """Check a zero set against every localization the theory supplies.

    Failures are recorded in the report; nothing is raised.
    """
    ctx = zs.ctx
    mp = ctx.mp
    n = zs.n
    p = zs.precision_bits
    tol = ctx.two_pow(-(p // 2))
    alphas = [mp.mpc(a) for a in zs.alphas]
    mods = [abs(a) for a in alphas]
    checks: List[Check] = []

    if len(alphas) != n:
        checks.append(Check("count", False, mp.mpf(len(alphas) - n), f"expected {n} zeros, got {len(alphas)}"))

    if len(alphas) > 1:
        min_dist = min(abs(alphas[i] - alphas[j]) for i in range(len(alphas)) for j in range(i))
    else:
        min_dist = mp.inf
    checks.append(Check("simple", min_dist > tol, min_dist - tol, "min pairwise distance"))

    lower = 1 / (n + mp.mpf(2) / 3)
    upper = mp.mpf(2) / (n + 1)
    m_lo = min(mods) - lower
    m_hi = upper - max(mods)
    checks.append(Check("annulus_lower", m_lo >= -tol, m_lo, "|alpha| >= 1/(n+2/3)"))
    checks.append(Check("annulus_upper", m_hi >= -tol, m_hi, "|alpha| <= 2/(n+1)"))

    max_re = max(a.real for a in alphas)
    checks.append(Check("left_half_plane", max_re < 0, -max_re, "Re alpha < 0"))
    re_bound = -1 / mp.sqrt(mp.mpf(n) ** 3 * (n + 1))
    m_re = re_bound - max_re
    checks.append(Check("real_part_bound", m_re > -tol, m_re, "Re alpha < -(n^3 (n+1))^(-1/2)"))

    conj_err = max(min(abs(mp.conj(a) - b) for b in alphas) for a in alphas)
    checks.append(Check("conjugate_closure", conj_err <= tol, tol - conj_err, "zero set closed under conjugation"))

    sum_err = abs(mp.fsum(alphas) + 1)
    checks.append(Check("power_sum_1", sum_err <= tol, tol - sum_err, "sum alpha = -1"))

    res_tol = ctx.two_pow(-p + 20)
    checks.append(Check("residual", zs.residual_bound <= res_tol, res_tol - zs.residual_bound,
                        "relative residual |y_n(alpha)| / sum |c_k||alpha|^k"))
    return CertificationReport(n=n, precision_bits=p, checks=tuple(checks))


def numeric_power_sums(zs: ZeroSet, j_max: int) -> list:
    mp = zs.ctx.mp
    return [mp.fsum(a**j for a in zs.alphas) for j in range(1, j_max + 1)]


def certified_zeros(n: int, ctx: NumericContext | None = None) -> ZeroSet:
    """:func:`find_zeros` that refuses to return a zero set failing :func:`certify`."""
    zs = find_zeros(n, ctx)
    report = certify(zs)
    if not report.passed:
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        raise ConvergenceError(n, zs.iterations, f"certification failed: {failed}")
    return zs
