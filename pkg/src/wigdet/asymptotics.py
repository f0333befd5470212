"""Sine-kernel limit predictors, convergence studies, and the contour route.

The scaled correlation converges, as N grows with the window fixed, to

    exp(b - 3/4) e^(xi(mu+nu)/(2 rho(xi))) rho(xi) sinc(pi (mu - nu))

with rho the semicircle density and sinc t = sin t / t (sinc 0 = 1).  This
module evaluates that limit (and its general-window variant in the offset
eta), runs prelimit-vs-limit convergence studies, computes normalized
correlation ratios, and extracts c(N) = f(N)/N! a fourth way: as a Cauchy
coefficient integral of the closed-form generating function, by trapezoid
quadrature on a circle of radius R = 1 - 1/N.

The trapezoid rule on Taylor coefficients has an exactly known error: it
aliases higher coefficients, err = sum_{k>=1} c(N + k Mq) R^(k Mq).  With
R = 1 - 1/N this decays like e^(-Mq k / N), so the default node count is
proportional to N: Mq = max(64, 24 N) puts the leading alias near e^(-24),
leaving margin for coefficient growth.  (8N, i.e. e^(-8) ~ 3e-4, is kept as
the hard floor of the plan invariant but is far too coarse for tight
tolerances; the error model is unit-tested.)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import gmpy2
from gmpy2 import mpc, mpfr

from .domain import (
    DomainValidationError,
    NumericalComputationError,
    Real,
    ScaledWindow,
    scale_to_spectral,
    semicircle_density,
    to_mpfr,
)
from . import hermite, recursion

_MODULE = "asymptotics"

# relative magnitude below which the sinc factor switches to its Taylor series
SINC_SERIES_CUTOFF = 1e-4


class QuadratureResidueError(NumericalComputationError):
    """Contour quadrature returned a result with a non-negligible imaginary part."""

    def __init__(self, message: str, relative_residue: float):
        super().__init__(message, _MODULE)
        self.relative_residue = relative_residue


@dataclass(frozen=True)
class ContourPlan:
    """Quadrature plan: circle radius 1 - 1/N with Mq equally spaced nodes.

    The radius is stored exactly (as a rational) and realized in whatever
    precision context is active when the quadrature runs.
    """

    N: int
    node_count: int
    radius: Fraction = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.N < 2:
            raise DomainValidationError(
                f"contour evaluation requires N >= 2, got {self.N}", module=_MODULE
            )
        if self.radius is None:
            object.__setattr__(self, "radius", Fraction(self.N - 1, self.N))
        if not 0 < self.radius < 1:
            raise DomainValidationError(
                f"radius must lie in (0, 1), got {self.radius}", module=_MODULE
            )
        if self.node_count < 8 * self.N:
            raise DomainValidationError(
                f"node_count must be >= 8N = {8 * self.N}, got {self.node_count}",
                module=_MODULE,
            )


def default_contour_plan(N: int) -> ContourPlan:
    """Plan with Mq = max(64, 24N): leading aliasing term near e^(-24)."""
    return ContourPlan(N=N, node_count=max(64, 24 * N))


@dataclass(frozen=True)
class ConvergenceRow:
    """One N of a convergence study; abs_dev is |prelimit - limit| verbatim."""

    N: int
    prelimit: mpfr
    limit: mpfr
    abs_dev: mpfr

    def __post_init__(self):
        if self.abs_dev != abs(self.prelimit - self.limit):
            raise DomainValidationError(
                "abs_dev must equal |prelimit - limit| exactly", module=_MODULE
            )

    @classmethod
    def build(cls, N: int, prelimit: mpfr, limit: mpfr) -> "ConvergenceRow":
        return cls(N=N, prelimit=prelimit, limit=limit, abs_dev=abs(prelimit - limit))


def _sinc(t) -> Union[mpfr, mpc]:
    """sin(t)/t with sinc(0) = 1; Taylor branch near 0 avoids the 0/0 form."""
    if t == 0:
        return mpfr(1)
    if abs(t) < SINC_SERIES_CUTOFF:
        # sum (-1)^k t^(2k) / (2k+1)!  until terms fall below the context ulp
        t2 = t * t
        term = mpfr(1) if isinstance(t, mpfr) else mpc(1)
        total = term
        k = 0
        cutoff = mpfr(2) ** (-(gmpy2.get_context().precision + 8))
        while True:
            k += 1
            term = -term * t2 / ((2 * k) * (2 * k + 1))
            total += term
            if abs(term) <= cutoff * abs(total):
                return total
    return gmpy2.sin(t) / t


def sine_kernel_limit(window: ScaledWindow, b: Real) -> mpfr:
    """Limit of the scaled correlation for the window's offsets.

    exp(b - 3/4) * e^(xi (mu_off + nu_off) / (2 rho)) * rho * sinc(pi (mu_off - nu_off)).
    """
    rho = window.rho()
    xi = to_mpfr(window.xi)
    mu_off = to_mpfr(window.mu_off)
    nu_off = to_mpfr(window.nu_off)
    b_excess = to_mpfr(b) - to_mpfr(Fraction(3, 4))
    drift = gmpy2.exp(xi * (mu_off + nu_off) / (2 * rho))
    return gmpy2.exp(b_excess) * drift * rho * _sinc(gmpy2.const_pi() * (mu_off - nu_off))


def sine_kernel_limit_eta(
    xi: Real, eta: Union[Real, Tuple[Real, Real]], b: Real
) -> Union[mpfr, Tuple[mpfr, mpfr]]:
    """General-window limit exp(b - 3/4) sqrt(4-xi^2) sinc(sqrt(4-xi^2) eta).

    eta may be a real or an (re, im) pair; a pair input returns a pair.
    """
    xi = to_mpfr(xi)
    if not abs(xi) < 2:
        raise DomainValidationError(f"|xi| must be < 2, got {xi}", module=_MODULE)
    width = gmpy2.sqrt(4 - xi * xi)
    b_excess = to_mpfr(b) - to_mpfr(Fraction(3, 4))
    front = gmpy2.exp(b_excess) * width
    if isinstance(eta, tuple):
        z = mpc(to_mpfr(eta[0]), to_mpfr(eta[1]))
        value = front * _sinc(width * z)
        return (value.real, value.imag)
    return front * _sinc(width * to_mpfr(eta))


def convergence_study(
    window: ScaledWindow, b: Real, N_list: Sequence[int]
) -> List[ConvergenceRow]:
    """Prelimit-vs-limit rows for each N, ordered by N."""
    if len(N_list) == 0:
        raise DomainValidationError("N_list must be non-empty", module=_MODULE)
    for N in N_list:
        if N < 2:
            raise DomainValidationError(f"all N must be >= 2, got {N}", module=_MODULE)
    limit = sine_kernel_limit(window, b)
    rows = []
    for N in sorted(N_list):
        prelimit = recursion.scaled_correlation(window, N, b)
        rows.append(ConvergenceRow.build(N, prelimit, limit))
    return rows


def scaled_centered_correlation(window: ScaledWindow, N: int, b: Real) -> mpfr:
    """The centered analogue of the scaled prelimit (f replaced by f-tilde).

    Equals scaled_correlation minus sqrt(1/2piN) times the product of the
    normalized damped mean determinants at the two spectral points.
    """
    return recursion.scaled_correlation(window, N, b) - _scaled_mean_part(window, N)


def _scaled_mean_part(window: ScaledWindow, N: int) -> mpfr:
    """sqrt(1/2piN) e^(-N xi^2/2) g(N;mu_N) g(N;nu_N) / N!."""
    args = scale_to_spectral(window, N)
    xi = to_mpfr(window.xi)
    delta = xi * xi / 2
    g_mu = hermite.scaled_mean_det(N, args.mu, delta)
    g_nu = g_mu if args.nu == args.mu else hermite.scaled_mean_det(N, args.nu, delta)
    return gmpy2.sqrt(1 / (2 * gmpy2.const_pi() * N)) * g_mu * g_nu


def centering_gap(window: ScaledWindow, N: int, b: Real) -> mpfr:
    """N * |scaled prelimit - scaled centered prelimit|.

    The two prelimits differ by exactly the rank-one mean part, so the gap is
    computed from that product directly; b does not enter (the mean
    determinant is law-independent) but is kept in the signature to mirror
    the quantities being compared.
    """
    del b  # the difference is b-free; see docstring
    return N * abs(_scaled_mean_part(window, N))


def general_window_prelimit(window: ScaledWindow, N: int, b: Real) -> mpfr:
    """Prelimit sqrt(2pi/N) e^(-xi_N^2/2) f(N; xi_N + eta/sqrt N, xi_N - eta/sqrt N)/N!.

    Uses the window's xi_N rule (default sqrt(N) xi) and its real eta offset;
    converges to sine_kernel_limit_eta(xi, eta, b) as N grows.
    """
    if window.eta is None or isinstance(window.eta, tuple):
        raise DomainValidationError(
            "general_window_prelimit needs a real eta in the window", module=_MODULE
        )
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    xi_n = window.xi_n(N)
    sqrt_n = gmpy2.sqrt(to_mpfr(N))
    eta = to_mpfr(window.eta)
    mu = xi_n + eta / sqrt_n
    nu = xi_n - eta / sqrt_n
    delta = (xi_n * xi_n) / (2 * N)
    state = recursion.damped_condensed(N, mu, nu, b, delta)
    return gmpy2.sqrt(2 * gmpy2.const_pi() / N) * state.c[N]


def normalized_ratio(
    window: ScaledWindow, N: int, b: Real, centered: bool = False
) -> mpfr:
    """f(N;mu_N,nu_N)/sqrt(f(N;mu_N,mu_N) f(N;nu_N,nu_N)), or the f-tilde version.

    Works on c(N) = f(N)/N! (the factorials cancel); the centered variant
    subtracts the normalized mean-determinant product from each c.  The limit
    in N is the sinc factor alone, both raw and centered.
    """
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    args = scale_to_spectral(window, N)
    if args.mu == args.nu:
        return mpfr(1)  # Cauchy-Schwarz equality case, exact by definition

    def c_value(x, y) -> mpfr:
        c = recursion.condensed(N, x, y, b).c[N]
        if not centered:
            return c
        g_x = hermite.scaled_mean_det(N, x, 0)
        g_y = g_x if x == y else hermite.scaled_mean_det(N, y, 0)
        return c - g_x * g_y

    cross = c_value(args.mu, args.nu)
    var_mu = c_value(args.mu, args.mu)
    var_nu = c_value(args.nu, args.nu)
    if var_mu <= 0 or var_nu <= 0:
        raise NumericalComputationError(
            f"nonpositive variance denominator at N={N}", _MODULE
        )
    return cross / gmpy2.sqrt(var_mu * var_nu)


def ratio_sinc_limit(window: ScaledWindow) -> mpfr:
    """Limit of the normalized ratio: sinc(pi (mu_off - nu_off)).

    The drift and density factors of the correlation limit cancel between
    numerator and denominator, raw and centered alike.
    """
    gap = to_mpfr(window.mu_off) - to_mpfr(window.nu_off)
    return _sinc(gmpy2.const_pi() * gap)


def _egf_closed_form(z: mpc, mu: mpfr, nu: mpfr, b: mpfr) -> mpc:
    """F(z) by the closed form, complex arithmetic at the active precision."""
    one = mpfr(1)
    z2 = z * z
    denom_g = one - z2
    b_star = b - to_mpfr(Fraction(3, 4))
    expo = mu * nu * z / denom_g - (mu * mu + nu * nu) / 2 * z2 / denom_g + b_star * z2
    root_minus = gmpy2.sqrt(one - z)  # principal branch; Re(1 +- z) > 0 on |z| < 1
    root_plus = gmpy2.sqrt(one + z)
    return gmpy2.exp(expo) / (root_minus * root_minus * root_minus * root_plus)


def contour_coefficient_diag(
    mu: Real, nu: Real, b: Real, plan: ContourPlan,
    imag_rel_tol: float = 1e-20,
) -> Tuple[mpfr, mpfr]:
    """c(N) by trapezoid quadrature; returns (value, relative imaginary residue).

    (1/Mq) sum_j F(R e^(i theta_j)) (R e^(i theta_j))^(-N), theta_j = 2 pi j/Mq,
    summed in fixed node order.  The integrand's coefficients are real, so the
    imaginary part of the sum is pure numerical noise; it is reported, and a
    violation of |Im| <= imag_rel_tol |Re| raises QuadratureResidueError.
    """
    mu = to_mpfr(mu)
    nu = to_mpfr(nu)
    b = to_mpfr(b)
    R = to_mpfr(plan.radius)
    Mq = plan.node_count
    two_pi = 2 * gmpy2.const_pi()
    total = mpc(0)
    for j in range(Mq):
        theta = two_pi * j / Mq
        z = mpc(R * gmpy2.cos(theta), R * gmpy2.sin(theta))
        total += _egf_closed_form(z, mu, nu, b) * z ** (-plan.N)
    total = total / Mq
    residue = abs(total.imag) / abs(total.real) if total.real != 0 else gmpy2.inf()
    if residue > imag_rel_tol:
        raise QuadratureResidueError(
            f"imaginary residue {float(residue):.3e} exceeds {imag_rel_tol:.1e} "
            f"(relative) at N={plan.N}, Mq={Mq}",
            float(residue),
        )
    return total.real, residue


def contour_coefficient(
    mu: Real, nu: Real, b: Real, plan: ContourPlan, imag_rel_tol: float = 1e-20
) -> mpfr:
    """c(N) by contour quadrature (see contour_coefficient_diag)."""
    value, _ = contour_coefficient_diag(mu, nu, b, plan, imag_rel_tol)
    return value
