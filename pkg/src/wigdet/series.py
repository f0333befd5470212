"""Truncated power-series algebra and the closed-form generating function.

The exponential generating function of the correlation sequence,

    F(x) = exp( mu nu x/(1-x^2) - (1/2)(mu^2+nu^2) x^2/(1-x^2) + b* x^2 )
           / ( (1-x)^(3/2) (1+x)^(1/2) ),        b* = b - 3/4,

has Taylor coefficients c(N) = f(N)/N!, giving a third exact route for f that
shares nothing with the recursions.  The algebra here is deliberately minimal:
fixed truncation order, Cauchy products, the binomial-series recurrence, and
exp via its ODE recurrence.  Coefficients are either mpfr values at the active
precision (default) or exact Fractions (``exact=True``), the latter for
oracle tests at rational inputs.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

import gmpy2
from gmpy2 import mpfr

from .domain import DomainValidationError, Real, to_mpfr

_MODULE = "series"

Coeff = Union[mpfr, Fraction]


def _convert(x: Real, exact: bool) -> Coeff:
    if exact:
        if isinstance(x, (Fraction, int)) or isinstance(x, numbers.Integral):
            return Fraction(x)
        raise DomainValidationError(
            f"exact mode requires rational inputs, got {x!r}", module=_MODULE
        )
    return to_mpfr(x)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients [x^0..x^M] of a formal power series, truncated at M.

    Operations never read or write beyond index M; combining two series
    truncates to the smaller order explicitly.
    """

    coeffs: Tuple[Coeff, ...]
    exact: bool = False

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, values: Sequence[Real], exact: bool = False) -> "TruncatedSeries":
        if len(values) == 0:
            raise DomainValidationError("a series needs at least the constant term",
                                        module=_MODULE)
        return cls(tuple(_convert(v, exact) for v in values), exact)

    @classmethod
    def zero(cls, M: int, exact: bool = False) -> "TruncatedSeries":
        return cls.from_coeffs([0] * (M + 1), exact)

    def _zero_coeff(self) -> Coeff:
        return Fraction(0) if self.exact else mpfr(0)

    def _wrap(self, coeffs) -> "TruncatedSeries":
        return TruncatedSeries(tuple(coeffs), self.exact)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        M = min(self.order, other.order)
        return self._wrap(self.coeffs[k] + other.coeffs[k] for k in range(M + 1))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        M = min(self.order, other.order)
        return self._wrap(self.coeffs[k] - other.coeffs[k] for k in range(M + 1))

    def scale(self, factor: Real) -> "TruncatedSeries":
        c = _convert(factor, self.exact)
        return self._wrap(c * a for a in self.coeffs)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Cauchy product truncated at the smaller order."""
        M = min(self.order, other.order)
        out = []
        for k in range(M + 1):
            acc = self._zero_coeff()
            for j in range(k + 1):
                acc += self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return self._wrap(out)

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            raise DomainValidationError("cannot differentiate an order-0 series",
                                        module=_MODULE)
        return self._wrap(k * self.coeffs[k] for k in range(1, self.order + 1))


def geometric_odd(M: int, exact: bool = False) -> TruncatedSeries:
    """x/(1-x^2) = x + x^3 + x^5 + ... truncated at M."""
    if M < 0:
        raise DomainValidationError(f"M must be >= 0, got {M}", module=_MODULE)
    return TruncatedSeries.from_coeffs(
        [1 if k % 2 == 1 else 0 for k in range(M + 1)], exact
    )


def geometric_even(M: int, exact: bool = False) -> TruncatedSeries:
    """x^2/(1-x^2) = x^2 + x^4 + ... truncated at M."""
    if M < 0:
        raise DomainValidationError(f"M must be >= 0, got {M}", module=_MODULE)
    return TruncatedSeries.from_coeffs(
        [1 if k % 2 == 0 and k >= 2 else 0 for k in range(M + 1)], exact
    )


def binomial_power(c: Real, alpha: Real, M: int, exact: bool = False) -> TruncatedSeries:
    """(1 + c x)^alpha by the coefficient recurrence a_k = a_{k-1} c (alpha-k+1)/k."""
    if M < 0:
        raise DomainValidationError(f"M must be >= 0, got {M}", module=_MODULE)
    cc = _convert(c, exact) if exact else to_mpfr(c)
    aa = _convert(alpha, exact) if exact else to_mpfr(alpha)
    one = Fraction(1) if exact else mpfr(1)
    coeffs = [one]
    for k in range(1, M + 1):
        coeffs.append(coeffs[-1] * cc * (aa - (k - 1)) / k)
    return TruncatedSeries(tuple(coeffs), exact)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term, via E' = a' E.

    E[0] = 1, E[k] = (1/k) sum_{j=1..k} j a[j] E[k-j].
    """
    if a.coeffs[0] != 0:
        raise DomainValidationError(
            "series_exp requires a zero constant term", module=_MODULE
        )
    one = Fraction(1) if a.exact else mpfr(1)
    out = [one]
    for k in range(1, a.order + 1):
        acc = a._zero_coeff()
        for j in range(1, k + 1):
            acc += j * a.coeffs[j] * out[k - j]
        out.append(acc / k)
    return TruncatedSeries(tuple(out), a.exact)


def egf_F(mu: Real, nu: Real, b: Real, M: int, exact: bool = False) -> TruncatedSeries:
    """Taylor series of F(x) through order M at the given spectral points.

    Composed exactly as the closed form dictates: exp of the three-piece
    exponent, times the two binomial factors (1-x)^(-3/2) and (1+x)^(-1/2).
    """
    mu_c = _convert(mu, exact)
    nu_c = _convert(nu, exact)
    b_c = _convert(b, exact)
    three_quarters = Fraction(3, 4) if exact else to_mpfr(Fraction(3, 4))
    half = Fraction(1, 2) if exact else to_mpfr(Fraction(1, 2))
    b_star = b_c - three_quarters

    exponent = geometric_odd(M, exact).scale(mu_c * nu_c)
    exponent = exponent - geometric_even(M, exact).scale(half * (mu_c * mu_c + nu_c * nu_c))
    if M >= 2:
        x_sq = TruncatedSeries.from_coeffs([0, 0, 1] + [0] * (M - 2), exact)
    else:
        x_sq = TruncatedSeries.zero(M, exact)
    exponent = exponent + x_sq.scale(b_star)

    F = series_exp(exponent)
    F = F * binomial_power(-1, Fraction(-3, 2), M, exact)
    F = F * binomial_power(1, Fraction(-1, 2), M, exact)
    return F


def coeff_to_f(F: TruncatedSeries, N: int) -> Coeff:
    """Recover f(N) = N! * [x^N] F."""
    if not 0 <= N <= F.order:
        raise DomainValidationError(
            f"N={N} outside the series order {F.order}", module=_MODULE
        )
    if F.exact:
        return math.factorial(N) * F.coeffs[N]
    return gmpy2.factorial(N) * F.coeffs[N]
