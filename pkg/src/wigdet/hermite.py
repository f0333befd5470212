"""The mean determinant g(N;mu) = E det(X_N - mu) and its consequences.

g obeys the three-term recursion g(N) = -mu g(N-1) - (N-1) g(N-2) and equals
(-1)^N 2^(-N/2) H_N(mu/sqrt 2) with H_N the physicists' Hermite polynomial;
both routes are implemented and cross-checked in tests.  The centered
correlation subtracts the rank-one mean part:

    f-tilde(N;mu,nu) = f(N;mu,nu) - g(N;mu) g(N;nu).

Because |g(N)| grows like sqrt(N!), scaled evaluations use a normalized
recursion for g(N) e^(-N delta/2) / sqrt(N!) whose per-step factors are
-mu e^(-delta/2)/sqrt(k) and -e^(-delta) sqrt((k-1)/k); magnitudes stay
polynomial, so no log/exp bookkeeping is needed at any N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import gmpy2
from gmpy2 import mpfr

from .domain import (
    DomainValidationError,
    OverflowComputationError,
    Real,
    ScaledWindow,
    scale_to_spectral,
    to_mpfr,
)
from . import recursion

_MODULE = "hermite"


@dataclass(frozen=True)
class MeanDetSequence:
    """g[0..N] with g[0] = 1; g[N] is a degree-N polynomial in mu."""

    g: List[mpfr]


def g_recursion(N_max: int, mu: Real) -> MeanDetSequence:
    """Forward iteration of g(N) = -mu g(N-1) - (N-1) g(N-2), g(0) = 1."""
    if N_max < 0:
        raise DomainValidationError(f"N_max must be >= 0, got {N_max}", module=_MODULE)
    mu = to_mpfr(mu)
    g = [mpfr(1)]
    for k in range(1, N_max + 1):
        prev2 = g[k - 2] if k >= 2 else mpfr(0)
        val = -mu * g[k - 1] - (k - 1) * prev2
        if not gmpy2.is_finite(val):
            raise OverflowComputationError(
                f"g({k}) left the representable range", _MODULE, k
            )
        g.append(val)
    return MeanDetSequence(g=g)


def hermite_H(N: int, x: Real) -> mpfr:
    """Physicists' Hermite H_N(x) via H_N = 2x H_{N-1} - 2(N-1) H_{N-2}."""
    if N < 0:
        raise DomainValidationError(f"N must be >= 0, got {N}", module=_MODULE)
    x = to_mpfr(x)
    h_prev, h = mpfr(1), mpfr(1)
    for k in range(1, N + 1):
        h_prev, h = h, 2 * x * h - 2 * (k - 1) * h_prev
        if not gmpy2.is_finite(h):
            raise OverflowComputationError(
                f"H_{k} left the representable range", _MODULE, k
            )
    return h


def g_via_hermite(N: int, mu: Real) -> mpfr:
    """g(N;mu) through the identity (-1)^N 2^(-N/2) H_N(mu/sqrt 2)."""
    if N < 0:
        raise DomainValidationError(f"N must be >= 0, got {N}", module=_MODULE)
    mu = to_mpfr(mu)
    value = hermite_H(N, mu / gmpy2.sqrt(mpfr(2)))
    scaled = value * gmpy2.exp2(-to_mpfr(N) / 2)
    return -scaled if N % 2 == 1 else scaled


def centered_correlation(N: int, mu: Real, nu: Real, b: Real) -> mpfr:
    """f-tilde(N;mu,nu) = f(N;mu,nu) - g(N;mu) g(N;nu)."""
    if N < 0:
        raise DomainValidationError(f"N must be >= 0, got {N}", module=_MODULE)
    f_val = recursion.condensed(N, mu, nu, b).f(N)
    g_mu = g_recursion(N, mu).g[N]
    g_nu = g_recursion(N, nu).g[N] if to_mpfr(nu) != to_mpfr(mu) else g_mu
    return f_val - g_mu * g_nu


def scaled_mean_det(N: int, mu: Real, delta: Real) -> mpfr:
    """e^(-N delta/2) g(N;mu) / sqrt(N!) by the normalized recursion."""
    if N < 0:
        raise DomainValidationError(f"N must be >= 0, got {N}", module=_MODULE)
    if to_mpfr(delta) < 0:
        raise DomainValidationError(f"delta must be >= 0, got {delta}", module=_MODULE)
    mu = to_mpfr(mu)
    damp_half = gmpy2.exp(-to_mpfr(delta) / 2)
    damp = damp_half * damp_half
    lead = -mu * damp_half
    prev2, prev = mpfr(0), mpfr(1)  # g-hat(-1) unused, g-hat(0) = 1
    val = prev
    for k in range(1, N + 1):
        kk = to_mpfr(k)
        val = lead * prev / gmpy2.sqrt(kk) - damp * gmpy2.sqrt((kk - 1) / kk) * prev2
        prev2, prev = prev, val
    return val


def bound_ratio(N: int, xi: Real, mu_off: Real) -> mpfr:
    """|e^(-N xi^2/4) g(N; mu_N)| / (N^(-1/4) sqrt(N!)) at the scaled point.

    mu_N = sqrt(N) xi + mu_off/(sqrt(N) rho(xi)).  The growth bound says this
    ratio stays bounded in N; we report it, we do not certify a constant.
    """
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    window = ScaledWindow(xi=xi, mu_off=mu_off, nu_off=mu_off)
    args = scale_to_spectral(window, N)
    xi_m = to_mpfr(xi)
    normalized = scaled_mean_det(N, args.mu, xi_m * xi_m / 2)
    return abs(normalized) * gmpy2.root(to_mpfr(N), 4)
