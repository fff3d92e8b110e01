import random
from fractions import Fraction

import pytest

from besseldiff import exact
from besseldiff.exact import ExactComplexRational
from besseldiff.numerics import NumericContext, from_rational
from besseldiff.roots import find_zeros
from besseldiff.stencil import (NodeEvaluationError, StencilError, TaylorSeries, apply_callable, apply_series,
                                build_stencil, check_stencil, model_g, model_series, remainder_series,
                                stencil_for, truncation_tail_bounds)

from conftest import to_fraction


@pytest.fixture(scope="module")
def stencils(ctx):
    return {n: stencil_for(n, ctx) for n in range(1, 16)}


def _random_poly(rng, degree):
    return TaylorSeries([Fraction(rng.randint(-10**6, 10**6), 10**6) for _ in range(degree + 1)])


def _random_point(rng, radius_pct=100):
    return ExactComplexRational(Fraction(rng.randint(-radius_pct, radius_pct), 141),
                                Fraction(rng.randint(-radius_pct, radius_pct), 141))


def test_order_one_nodes(stencils):
    st = stencils[1]
    assert st.a_nodes == (Fraction(3, 2),)
    assert st.b_nodes == (Fraction(1, 2),)


def test_order_two_nodes(stencils, ctx):
    st = stencils[2]
    tol = ctx.two_pow(-250)
    for a in st.a_nodes:
        assert abs(abs(a) ** 2 - from_rational(Fraction(19, 12), ctx)) < tol
        assert abs(a.real - from_rational(Fraction(5, 4), ctx)) < tol
    for b in st.b_nodes:
        assert abs(abs(b) ** 2 - from_rational(Fraction(7, 12), ctx)) < tol
        assert abs(b.real - from_rational(Fraction(3, 4), ctx)) < tol


@pytest.mark.parametrize("n", range(1, 16))
def test_invariants(n, stencils):
    st = stencils[n]
    assert all(c.passed for c in check_stencil(st))
    assert len(st.nodes) == 2 * n
    # a_k - 1 = -alpha_k/2 and |alpha_k| <= 2/(n+1)
    assert max(abs(a - 1) for a in st.a_nodes) <= st.ctx.mp.mpf(1) / (n + 1)
    for nodes in (st.a_nodes, st.b_nodes):
        for v in nodes:
            assert min(abs(v.conjugate() - w) for w in nodes) == 0


def test_uncertified_zero_set_rejected(ctx):
    zs = find_zeros(4, ctx)
    bad = type(zs)(n=4, alphas=(zs.alphas[0] + ctx.mp.mpf(10) ** -3,) + zs.alphas[1:],
                   residual_bound=zs.residual_bound, precision_bits=zs.precision_bits)
    with pytest.raises(StencilError):
        build_stencil(bad)


def test_exact_on_low_degree(stencils, ctx):
    rng = random.Random(20261015)
    p = ctx.precision_bits
    for n in range(1, 16):
        st = stencils[n]
        for _ in range(4):
            f = _random_poly(rng, rng.randint(0, 2 * n))
            z = _random_point(rng)
            err = abs(apply_series(st, f, z, ctx) - f.z_derivative(z, ctx))
            assert err <= ctx.two_pow(-p + 30 + 4 * n)


def test_square(stencils, ctx):
    z = from_rational(ExactComplexRational(Fraction(1, 3), Fraction(-2, 5)), ctx)
    v = apply_series(stencils[1], TaylorSeries([0, 0, 1]), z, ctx)
    assert abs(v - 2 * z * z) < ctx.two_pow(-250)


def test_cube_order_one(stencils, ctx):
    # 3/2^3 - 1/2^3 = 13/4 against 3: remainder -z^3/4
    z = Fraction(1, 2)
    v = apply_series(stencils[1], TaylorSeries([0, 0, 0, 1]), z, ctx)
    assert to_fraction(v.real) == Fraction(13, 32)
    assert to_fraction(TaylorSeries([0, 0, 0, 1]).z_derivative(z, ctx).real) == Fraction(3, 8)
    rem = remainder_series(1, TaylorSeries([0, 0, 0, 1]), z, ctx)
    assert to_fraction(rem.value.real) == Fraction(-1, 32)


def test_model_function_order_one(stencils, ctx):
    v = apply_callable(stencils[1], model_g, Fraction(1, 2), ctx)
    assert abs(v - from_rational(Fraction(8, 3), ctx)) < ctx.two_pow(-250)
    rem = 2 - v
    assert abs(rem - from_rational(Fraction(-2, 3), ctx)) < ctx.two_pow(-250)
    assert exact.model_remainder_exact(1, Fraction(1, 2)) / 2 == Fraction(-2, 3)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_constant_and_identity(n, stencils, ctx):
    st = stencils[n]
    z = from_rational(ExactComplexRational(Fraction(2, 7), Fraction(1, 9)), ctx)
    assert apply_callable(st, lambda w: 5, z, ctx) == 0
    assert abs(apply_callable(st, lambda w: w, z, ctx) - z) < ctx.two_pow(-245)
    assert apply_series(st, TaylorSeries([Fraction(-3, 4)]), z, ctx) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_monomial_remainder(n, ctx):
    z = ExactComplexRational(Fraction(1, 3), Fraction(1, 5))
    f = TaylorSeries([0] * (2 * n + 1) + [1])
    rem = remainder_series(n, f, z, ctx)
    assert not rem.identically_zero
    want = from_rational((-1) ** n * exact.gamma(n) * z ** (2 * n + 1), ctx)
    assert abs(rem.value - want) <= abs(want) * ctx.two_pow(-250)


def test_low_degree_remainder_flagged(ctx):
    rem = remainder_series(3, TaylorSeries([1, 2, 3, 4, 5, 6, 7]), Fraction(1, 4), ctx)
    assert rem.identically_zero and rem.value == 0 and rem.order == 6


def test_model_series_truncated_at_200(stencils, ctx):
    z = Fraction(1, 2)
    rem = remainder_series(1, model_series(200), z, ctx)
    tail = truncation_tail_bounds(stencils[1], z, 200, ctx=ctx)
    target = from_rational(Fraction(-2, 3), ctx)
    assert abs(rem.value - target) <= tail.remainder
    # the omitted tail at M=200 is about (3/4)^200; the 1e-50 level needs a longer series
    longer = remainder_series(1, model_series(450), z, ctx)
    assert abs(longer.value - target) < ctx.mp.mpf(10) ** -50
    assert truncation_tail_bounds(stencils[1], z, 450, ctx=ctx).remainder < ctx.mp.mpf(10) ** -50


def test_model_series_order_13(stencils, ctx):
    st = stencils[13]
    z = Fraction(3, 10)
    f = model_series(60)
    approx = apply_series(st, f, z, ctx)
    zr = from_rational(z, ctx)
    stencil_exact = ctx.mp.fsum(model_g(a * zr) - model_g(b * zr) for a, b in zip(st.a_nodes, st.b_nodes))
    tail = truncation_tail_bounds(st, z, 60, ctx=ctx)
    assert abs(approx - stencil_exact) <= tail.stencil_sum
    assert abs(f.z_derivative(z, ctx) - zr / (1 - zr) ** 2) <= tail.derivative


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_naive_difference_matches_exact_path(n, stencils, ctx):
    rng = random.Random(n)
    st = stencils[n]
    for order in (2 * n + 1, 40, 100):
        f = _random_poly(rng, order)
        z = ExactComplexRational(Fraction(rng.randint(-35, 35), 100), Fraction(rng.randint(-35, 35), 100))
        naive = f.z_derivative(z, ctx) - apply_series(st, f, z, ctx)
        rem = remainder_series(n, f, z, ctx)
        assert abs(naive - rem.value) <= ctx.two_pow(-ctx.precision_bits + 30 + 4 * n)


@pytest.mark.parametrize("n", [3, 6, 12])
def test_real_series_at_real_point(n, stencils, ctx):
    f = _random_poly(random.Random(3 * n), 3 * n)
    v = apply_series(stencils[n], f, Fraction(-2, 5), ctx)
    assert abs(v.imag) <= ctx.two_pow(-240)


def test_evaluator_failure_names_node(stencils, ctx):
    def boom(w):
        if w.real > 1:
            raise OverflowError("too large")
        return w

    with pytest.raises(NodeEvaluationError) as e:
        apply_callable(stencils[2], boom, 1, ctx)
    assert e.value.node in [a * 1 for a in stencils[2].a_nodes]
    assert isinstance(e.value.cause, OverflowError)


def test_series_validation():
    with pytest.raises(ValueError):
        TaylorSeries([])
    assert model_series(3).coeffs == (0, 1, 1, 1)
    assert TaylorSeries([1, 2]).is_exact
    assert not TaylorSeries([1, NumericContext(64).mp.mpf(2)]).is_exact


def test_tail_bound_requires_convergence(stencils):
    with pytest.raises(ValueError):
        truncation_tail_bounds(stencils[1], Fraction(2, 3), 10)
