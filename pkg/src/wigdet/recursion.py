"""Exact recursions for the correlation f(N;mu,nu) = E det(X-mu)det(X-nu).

Two independent routes are implemented:

* :func:`full_system` iterates the five-sequence system coupling f with the
  auxiliary one- and two-row-deleted correlations (f11, f11chi, f10, f01).
  It is retained as a verification twin of the condensed route.
* :func:`condensed` iterates a single-sequence recursion for the normalized
  coefficients c(N) = f(N)/N! together with the running even-index partial
  sums s(N) = c(N) + c(N-2) + ...

:func:`damped_condensed` is the range-preserving reparametrization
d(N) = c(N) e^(-N delta), needed because scaled evaluations carry a factor
e^(-N xi^2/2) that would otherwise be formed from two astronomically large
halves.  :func:`scaled_correlation` packages exactly that scaled evaluation.

Terms with a negative index are zero by convention; the guards implement
this literally rather than by padding tricks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
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

_MODULE = "recursion"


def _check_finite(value: mpfr, n: int, what: str) -> None:
    if not gmpy2.is_finite(value):
        raise OverflowComputationError(
            f"{what}({n}) left the representable range", _MODULE, n
        )


@dataclass(frozen=True)
class FullSystemState:
    """The five sequences of the coupled recursion, indexed by matrix size.

    Slots that the equations never define (f11/f11chi below index 2, f10/f01
    below index 1) hold exact zeros; every use site multiplies them by zero.
    """

    f: List[mpfr]
    f11: List[mpfr]
    f11chi: List[mpfr]
    f10: List[mpfr]
    f01: List[mpfr]


@dataclass(frozen=True)
class CondensedState:
    """Sequences c[0..N] and s[0..N]; with damping they hold d(N), s-hat(N).

    d(N) = c(N) e^(-N delta) and s-hat is the matching partial-sum sequence
    s-hat(N) = d(N) + e^(-2 delta) s-hat(N-2).
    """

    c: List[mpfr]
    s: List[mpfr]
    delta: mpfr = field(default_factory=lambda: mpfr(0))

    def f(self, N: int) -> mpfr:
        """Recover f(N) = N! * c(N).  Undamped states only."""
        if self.delta != 0:
            raise DomainValidationError(
                "f(N) is only directly available from an undamped state",
                module=_MODULE,
            )
        if not 0 <= N < len(self.c):
            raise DomainValidationError(f"N={N} outside computed range", module=_MODULE)
        return gmpy2.factorial(N) * self.c[N]


def full_system(N_max: int, mu: Real, nu: Real, b: Real) -> FullSystemState:
    """Iterate the five-sequence system up to size N_max.

    f(N) = (1 + mu nu) f(N-1) + (2b + 1/2)(N-1) f(N-2)
           + (N-1)(N-2) (f11(N-1) + f11chi(N-1))
           + nu (N-1) f10(N-1) + mu (N-1) f01(N-1)
    with the companion recursions for f11, f11chi (indices >= 2) and the
    swap pair f10, f01 (indices >= 1).
    """
    if N_max < 0:
        raise DomainValidationError(f"N_max must be >= 0, got {N_max}", module=_MODULE)
    mu = to_mpfr(mu)
    nu = to_mpfr(nu)
    b = to_mpfr(b)
    zero = mpfr(0)
    one = mpfr(1)
    size = N_max + 1
    f = [zero] * size
    f11 = [zero] * size
    f11chi = [zero] * size
    f10 = [zero] * size
    f01 = [zero] * size
    f[0] = one

    mu_nu = mu * nu
    b_coef = 2 * b + mpfr(1) / 2

    def at(seq: List[mpfr], i: int) -> mpfr:
        # negative index means an undefined term carrying a zero factor
        return seq[i] if i >= 0 else zero

    for k in range(1, size):
        f10[k] = -(k - 1) * f01[k - 1] - nu * f[k - 1]
        f01[k] = -(k - 1) * f10[k - 1] - mu * f[k - 1]
        if k >= 2:
            # the f10/f01 cross terms are grouped into one sum so that a
            # mu <-> nu swap permutes commutative operands only, keeping
            # the symmetry f(N;mu,nu) = f(N;nu,mu) exact in floating point
            f11[k] = (
                mu_nu * f[k - 2]
                + (k - 2) * at(f, k - 3)
                + (k - 2) * (k - 3) * f11[k - 2]
                + (k - 2) * (nu * f10[k - 2] + mu * f01[k - 2])
            )
            f11chi[k] = (
                f[k - 2]
                + (k - 2) * at(f, k - 3)
                + (k - 2) * (k - 3) * f11chi[k - 2]
            )
        f[k] = (
            (1 + mu_nu) * f[k - 1]
            + b_coef * (k - 1) * at(f, k - 2)
            + (k - 1) * (k - 2) * (f11[k - 1] + f11chi[k - 1])
            + (k - 1) * (nu * f10[k - 1] + mu * f01[k - 1])
        )
        _check_finite(f[k], k, "f")
    return FullSystemState(f=f, f11=f11, f11chi=f11chi, f10=f10, f01=f01)


def damped_condensed(
    N_max: int, mu: Real, nu: Real, b: Real, delta: Real
) -> CondensedState:
    """Iterate the condensed recursion for d(N) = c(N) e^(-N delta).

    N d(N) = e^(-d) d(N-1) + N e^(-2d) d(N-2)
             + mu nu (e^(-d) sh(N-1) + e^(-3d) sh(N-3))
             - (mu^2 + nu^2) e^(-2d) sh(N-2)
             + (2b - 3/2) (e^(-2d) d(N-2) - e^(-4d) d(N-4))
    with sh(N) = d(N) + e^(-2d) sh(N-2).  delta = 0 reduces to the undamped
    recursion exactly (every damping factor is the exact constant 1).
    """
    if N_max < 0:
        raise DomainValidationError(f"N_max must be >= 0, got {N_max}", module=_MODULE)
    delta = to_mpfr(delta)
    if delta < 0:
        raise DomainValidationError(f"delta must be >= 0, got {delta}", module=_MODULE)
    mu = to_mpfr(mu)
    nu = to_mpfr(nu)
    b = to_mpfr(b)
    zero = mpfr(0)

    e1 = gmpy2.exp(-delta)
    e2 = e1 * e1
    e3 = e2 * e1
    e4 = e2 * e2

    mu_nu = mu * nu
    sq_sum = mu * mu + nu * nu
    b_coef = 2 * b - mpfr(3) / 2

    size = N_max + 1
    d = [zero] * size
    sh = [zero] * size
    d[0] = mpfr(1)
    sh[0] = d[0]

    def at(seq: List[mpfr], i: int) -> mpfr:
        return seq[i] if i >= 0 else zero

    for k in range(1, size):
        val = (
            e1 * d[k - 1]
            + k * e2 * at(d, k - 2)
            + mu_nu * (e1 * sh[k - 1] + e3 * at(sh, k - 3))
            - sq_sum * e2 * at(sh, k - 2)
            + b_coef * (e2 * at(d, k - 2) - e4 * at(d, k - 4))
        )
        d[k] = val / k
        sh[k] = d[k] + e2 * at(sh, k - 2)
        _check_finite(d[k], k, "c" if delta == 0 else "d")
        _check_finite(sh[k], k, "s" if delta == 0 else "s-hat")
    return CondensedState(c=d, s=sh, delta=delta)


def condensed(N_max: int, mu: Real, nu: Real, b: Real) -> CondensedState:
    """Iterate the undamped condensed recursion for c(N) = f(N)/N!."""
    return damped_condensed(N_max, mu, nu, b, delta=0)


def scaled_correlation(window: ScaledWindow, N: int, b: Real) -> mpfr:
    """The scaled prelimit sqrt(1/2piN) e^(-N xi^2/2) f(N; mu_N, nu_N) / N!.

    Computed as sqrt(1/2piN) d(N) with the damped recursion at
    delta = xi^2/2 and the spectral points from :func:`scale_to_spectral`,
    so no astronomically large intermediate is ever formed.
    """
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    args = scale_to_spectral(window, N)
    xi = to_mpfr(window.xi)
    delta = xi * xi / 2
    state = damped_condensed(N, args.mu, args.nu, b, delta)
    return gmpy2.sqrt(1 / (2 * gmpy2.const_pi() * N)) * state.c[N]
