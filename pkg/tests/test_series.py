"""Series algebra against sympy expansions and closed-form structure."""
import math
from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpfr
from hypothesis import given, settings, strategies as st

from wigdet import (
    DomainValidationError,
    TruncatedSeries,
    binomial_power,
    coeff_to_f,
    condensed,
    egf_F,
    geometric_even,
    geometric_odd,
    precision_bits,
    series_exp,
    to_mpfr,
)


def sympy_egf_coeffs(mu, nu, b, M):
    """Independent expansion of the closed-form generating function."""
    x = sympy.symbols("x")
    mu_s, nu_s, b_s = [sympy.nsimplify(v, rational=True) for v in (mu, nu, b)]
    b_star = b_s - sympy.Rational(3, 4)
    F = sympy.exp(
        mu_s * nu_s * x / (1 - x**2)
        - sympy.Rational(1, 2) * (mu_s**2 + nu_s**2) * x**2 / (1 - x**2)
        + b_star * x**2
    ) / ((1 - x) ** sympy.Rational(3, 2) * (1 + x) ** sympy.Rational(1, 2))
    poly = sympy.series(F, x, 0, M + 1).removeO()
    return [sympy.nsimplify(poly.coeff(x, k), rational=True) for k in range(M + 1)]


class TestSeriesAlgebra:
    def test_empty_rejected(self):
        with pytest.raises(DomainValidationError):
            TruncatedSeries.from_coeffs([])

    def test_exact_mode_requires_rationals(self):
        with pytest.raises(DomainValidationError):
            TruncatedSeries.from_coeffs([0.5], exact=True)

    def test_mixed_orders_truncate_to_smaller(self):
        a = TruncatedSeries.from_coeffs([1, 2, 3, 4], exact=True)
        b = TruncatedSeries.from_coeffs([1, 1], exact=True)
        assert (a + b).order == 1
        assert (a * b).coeffs == (Fraction(1), Fraction(3))

    def test_derivative(self):
        a = TruncatedSeries.from_coeffs([5, 1, 2, 3], exact=True)
        assert a.derivative().coeffs == (Fraction(1), Fraction(4), Fraction(9))
        with pytest.raises(DomainValidationError):
            TruncatedSeries.from_coeffs([1], exact=True).derivative()

    def test_cauchy_product_matches_polynomial_multiplication(self):
        a = TruncatedSeries.from_coeffs([1, 2, 3], exact=True)
        b = TruncatedSeries.from_coeffs([4, 5, 6], exact=True)
        # (1+2x+3x^2)(4+5x+6x^2) = 4 + 13x + 28x^2 + ...
        assert (a * b).coeffs == (Fraction(4), Fraction(13), Fraction(28))

    def test_geometric_series(self):
        assert [int(c) for c in geometric_odd(6, exact=True).coeffs] == [0, 1, 0, 1, 0, 1, 0]
        assert [int(c) for c in geometric_even(6, exact=True).coeffs] == [0, 0, 1, 0, 1, 0, 1]

    def test_binomial_pinned_examples(self):
        minus = binomial_power(-1, Fraction(-3, 2), 2, exact=True)
        assert minus.coeffs == (Fraction(1), Fraction(3, 2), Fraction(15, 8))
        plus = binomial_power(1, Fraction(-1, 2), 2, exact=True)
        assert plus.coeffs == (Fraction(1), Fraction(-1, 2), Fraction(3, 8))

    def test_binomial_against_sympy(self):
        x = sympy.symbols("x")
        poly = sympy.series((1 - x) ** sympy.Rational(-3, 2), x, 0, 9).removeO()
        got = binomial_power(-1, Fraction(-3, 2), 8, exact=True)
        for k in range(9):
            assert sympy.Rational(str(got.coeffs[k])) == poly.coeff(x, k)

    def test_series_exp_pinned_example(self):
        # exp(x + x^3) = 1 + x + x^2/2 + 7x^3/6 + ...
        a = TruncatedSeries.from_coeffs([0, 1, 0, 1], exact=True)
        got = series_exp(a)
        assert got.coeffs == (Fraction(1), Fraction(1), Fraction(1, 2), Fraction(7, 6))

    def test_series_exp_rejects_nonzero_constant(self):
        with pytest.raises(DomainValidationError):
            series_exp(TruncatedSeries.from_coeffs([1, 1], exact=True))

    @settings(deadline=None, derandomize=True, max_examples=15)
    @given(
        coeffs=st.lists(
            st.fractions(min_value=-2, max_value=2, max_denominator=6),
            min_size=1, max_size=6,
        )
    )
    def test_series_exp_satisfies_its_ode(self, coeffs):
        # E = exp(a) iff E' = a' E with E(0) = 1, checked coefficientwise
        a = TruncatedSeries.from_coeffs([0] + coeffs, exact=True)
        E = series_exp(a)
        lhs = E.derivative()
        rhs = a.derivative() * E
        assert lhs.coeffs == rhs.coeffs[: len(lhs.coeffs)]


class TestGeneratingFunction:
    @pytest.mark.parametrize(
        "mu,nu,b",
        [
            (Fraction(1, 2), Fraction(-1, 3), Fraction(1, 4)),
            (Fraction(0), Fraction(0), Fraction(3, 4)),
            (Fraction(2), Fraction(3, 4), Fraction(3)),
        ],
    )
    def test_exact_coefficients_match_sympy(self, mu, nu, b):
        M = 8
        want = sympy_egf_coeffs(mu, nu, b, M)
        got = egf_F(mu, nu, b, M, exact=True)
        for k in range(M + 1):
            assert sympy.Rational(str(got.coeffs[k])) == want[k]

    def test_gaussian_zero_coefficients_are_binomial_partial_sums(self):
        # at mu = nu = 0. b = 3/4: F = 1/((1-x)sqrt(1-x^2)), so
        # c(2k) = c(2k+1) = sum_{j<=k} C(2j,j) 4^(-j), all positive
        M = 21
        got = egf_F(0, 0, Fraction(3, 4), M, exact=True)
        for k in range(M // 2):
            partial = sum(
                Fraction(math.comb(2 * j, j), 4**j) for j in range(k + 1)
            )
            assert got.coeffs[2 * k] == partial
            assert got.coeffs[2 * k + 1] == partial
            assert partial > 0

    def test_ode_residual_vanishes(self):
        # F' = P F with P = (1+2x)/(1-x^2) + mu nu (1+x^2)/(1-x^2)^2
        #                    - (mu^2+nu^2) x/(1-x^2)^2 + 2 b* x
        M = 24
        mu, nu, b = Fraction(1, 2), Fraction(-1, 3), Fraction(1, 4)
        x = sympy.symbols("x")
        mu_s, nu_s, b_s = [sympy.nsimplify(v, rational=True) for v in (mu, nu, b)]
        P = (
            (1 + 2 * x) / (1 - x**2)
            + mu_s * nu_s * (1 + x**2) / (1 - x**2) ** 2
            - (mu_s**2 + nu_s**2) * x / (1 - x**2) ** 2
            + 2 * (b_s - sympy.Rational(3, 4)) * x
        )
        P_poly = sympy.series(P, x, 0, M + 1).removeO()
        P_series = TruncatedSeries.from_coeffs(
            [Fraction(str(sympy.nsimplify(P_poly.coeff(x, k), rational=True)))
             for k in range(M + 1)],
            exact=True,
        )
        F = egf_F(mu, nu, b, M, exact=True)
        lhs = F.derivative()
        rhs = P_series * F
        for k in range(M - 1):
            assert lhs.coeffs[k] == rhs.coeffs[k]

    def test_matches_condensed_recursion_to_n200(self):
        with precision_bits(128):
            tol = mpfr(2) ** -(128 - 40)
            for mu, nu, b in ((0.4, -0.7, 3), (-1.1, 2, Fraction(1, 4))):
                F = egf_F(mu, nu, b, 200)
                c = condensed(200, mu, nu, b).c
                for N in (0, 1, 2, 3, 10, 50, 100, 200):
                    scale = max(abs(c[N]), mpfr(1))
                    assert abs(F.coeffs[N] - c[N]) <= tol * scale

    def test_coeff_to_f(self):
        F = egf_F(Fraction(1, 2), Fraction(-1, 3), Fraction(1, 4), 3, exact=True)
        assert coeff_to_f(F, 3) == Fraction(343, 108)
        with pytest.raises(DomainValidationError):
            coeff_to_f(F, 4)

    def test_mpfr_mode_tracks_exact_mode(self, bits128):
        exact = egf_F(Fraction(1, 2), Fraction(-1, 3), Fraction(3), 12, exact=True)
        approx = egf_F(Fraction(1, 2), Fraction(-1, 3), Fraction(3), 12)
        tol = mpfr(2) ** -(128 - 16)
        for k in range(13):
            want = to_mpfr(exact.coeffs[k])
            assert abs(approx.coeffs[k] - want) <= tol * max(abs(want), mpfr(1))
