"""Numerical differentiation of analytic functions with nodes built from Bessel-polynomial zeros.

    z f'(z) ~ sum_{k=1}^n ( f(a_nk z) - f(b_nk z) ),   a_nk = 1 - alpha_nk/2,  b_nk = 1 + alpha_nk/2,

where ``alpha_nk`` are the zeros of the Bessel polynomial ``y_n``.  The sum is
exact for polynomials of degree ``<= 2n``.
"""

from . import exact
from .bessel import RationalPolynomial, bessel_q, bessel_y, transform_mg
from .bounds import (BoundReport, Inequality, convergence_table, lemma_product, model_remainder, n0,
                     prop2_bounds, thm1_bound, thm1_xn_bound)
from .exact import (ExactComplexRational, a_mn, closed_form_exact, defects, gamma, model_remainder_exact,
                    power_sums)
from .numerics import NumericContext, eval_poly, from_rational
from .roots import ZeroSet, certify, find_zeros
from .stencil import (Stencil, TaylorSeries, apply_callable, apply_series, build_stencil, model_g, model_series,
                      remainder_series, stencil_for)

__version__ = "0.1.0"
