"""Core types, the precision context, and spectral scaling maps.

Everything downstream works with Hermitian Wigner matrices normalized so that
the entry law Q has mean 0 and variance a = 1/2 (diagonal entries are sqrt(2)*q,
off-diagonal entries q_re + i*q_im).  The variance is structural, not data:
admitting other normalizations would silently invalidate every recursion in
this package.  The only law-dependent quantity that survives in any formula is
the fourth moment b = E q^4.

High-precision arithmetic is provided by gmpy2 (MPFR).  A precision context of
P bits (P in {53, 128, 256}) is activated with :func:`precision_bits`; all
library routines compute in whatever context is active.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import gmpy2
from gmpy2 import mpfr

PRECISION_TIERS = (53, 128, 256)

Real = Union[int, float, Fraction, mpfr]


class DomainValidationError(ValueError):
    """Invalid argument or type invariant violation (CLI exit code 2)."""

    def __init__(self, message: str, module: str = "domain"):
        super().__init__(message)
        self.module = module


class NumericalComputationError(ArithmeticError):
    """Numerical failure: overflow, residue violation, degeneracy (exit 3)."""

    def __init__(self, message: str, module: str):
        super().__init__(message)
        self.module = module


class OverflowComputationError(NumericalComputationError):
    """A recursion step left the representable range (carries the failing N)."""

    def __init__(self, message: str, module: str, failing_n: int):
        super().__init__(message, module)
        self.failing_n = failing_n


def precision_bits(bits: int) -> gmpy2.context:
    """Return a gmpy2 context with the given mantissa precision.

    Use as ``with precision_bits(128): ...``.  Only the tiers 53, 128 and 256
    are accepted; 53-bit exists for Monte Carlo cross-checks, 128-bit is the
    default working precision, 256-bit is for large-N scaled evaluations where
    the mu*nu*s - (mu^2+nu^2)*s combination cancels severely.
    """
    if bits not in PRECISION_TIERS:
        raise DomainValidationError(
            f"precision must be one of {PRECISION_TIERS}, got {bits}"
        )
    ctx = gmpy2.context()
    ctx.precision = bits
    return ctx


def active_precision() -> int:
    """Mantissa precision (bits) of the active context."""
    return gmpy2.get_context().precision


def to_mpfr(x: Real) -> mpfr:
    """Convert to mpfr at the active precision; Fractions convert exactly."""
    if isinstance(x, Fraction):
        return mpfr(gmpy2.mpq(x.numerator, x.denominator))
    return mpfr(x)


@dataclass(frozen=True)
class MomentProfile:
    """An entry law Q described by its moments plus a sampling recipe.

    The second moment is fixed at 1/2 by construction and is not a field.
    ``fourth_moment_b`` is b = E q^4 (Jensen forces b >= 1/4).  The excess
    b* = b - 3/4 is derived, never stored.
    """

    label: str
    fourth_moment_b: Real
    sampler_kind: str = "none"

    _KINDS = ("gaussian", "rademacher", "uniform", "none")

    def __post_init__(self):
        if self.sampler_kind not in self._KINDS:
            raise DomainValidationError(
                f"sampler_kind must be one of {self._KINDS}, got {self.sampler_kind!r}"
            )
        if not isinstance(self.fourth_moment_b, numbers.Real):
            raise DomainValidationError("fourth_moment_b must be a real number")
        if self.fourth_moment_b < Fraction(1, 4):
            raise DomainValidationError(
                f"fourth moment must be >= 1/4 (Jensen), got {self.fourth_moment_b}"
            )

    @property
    def b_star(self) -> Real:
        """Fourth-moment excess b - 3/4 (exact when b is a Fraction)."""
        if isinstance(self.fourth_moment_b, Fraction):
            return self.fourth_moment_b - Fraction(3, 4)
        return self.fourth_moment_b - 0.75


# Shipped laws.  Parameters are pinned by mean 0 and variance 1/2:
# gaussian N(0, 1/2); rademacher on {-1/sqrt(2), +1/sqrt(2)};
# uniform on [-sqrt(3/2), +sqrt(3/2)].  Fourth moments by direct integration.
GAUSSIAN_PROFILE = MomentProfile("gaussian", Fraction(3, 4), "gaussian")
RADEMACHER_PROFILE = MomentProfile("rademacher", Fraction(1, 4), "rademacher")
UNIFORM_PROFILE = MomentProfile("uniform", Fraction(9, 20), "uniform")

SHIPPED_PROFILES = {
    p.label: p for p in (GAUSSIAN_PROFILE, RADEMACHER_PROFILE, UNIFORM_PROFILE)
}


@dataclass(frozen=True)
class SpectralArgs:
    """Matrix size and the two real spectral points of the correlation."""

    N: int
    mu: Real
    nu: Real

    def __post_init__(self):
        if not isinstance(self.N, numbers.Integral) or self.N < 0:
            raise DomainValidationError(f"N must be a non-negative integer, got {self.N}")


@dataclass(frozen=True)
class ScaledWindow:
    """Bulk location xi and local window offsets for the scaled evaluation.

    The spectral points at size N are xi_N + off/(sqrt(N) rho(xi)) with
    rho the semicircle density and xi_N = sqrt(N) xi by default; an alternate
    growth rule (any callable (window, N) -> real, evaluated in the active
    precision context) may be supplied for general-window studies, which also
    carry the optional offset ``eta`` (a real, or an (re, im) pair).
    """

    xi: Real
    mu_off: Real
    nu_off: Real
    eta: Optional[Union[Real, tuple]] = None
    xi_sequence_rule: Optional[Callable[["ScaledWindow", int], Real]] = None

    def __post_init__(self):
        if not abs(self.xi) < 2:
            raise DomainValidationError(f"|xi| must be < 2 strictly, got xi={self.xi}")
        if self.eta is not None and not isinstance(self.eta, numbers.Real):
            if not (isinstance(self.eta, tuple) and len(self.eta) == 2):
                raise DomainValidationError("eta must be a real or an (re, im) pair")

    def rho(self) -> mpfr:
        """Semicircle density at xi, in the active precision context."""
        return semicircle_density(self.xi)

    def xi_n(self, N: int) -> mpfr:
        """The bulk center xi_N at matrix size N (default sqrt(N)*xi)."""
        if self.xi_sequence_rule is not None:
            return to_mpfr(self.xi_sequence_rule(self, N))
        return gmpy2.sqrt(to_mpfr(N)) * to_mpfr(self.xi)


def semicircle_density(xi: Real) -> mpfr:
    """Limiting bulk eigenvalue density (1/2pi) sqrt(4 - xi^2) on [-2, 2]."""
    x = to_mpfr(xi)
    if abs(x) > 2:
        raise DomainValidationError(f"|xi| must be <= 2, got xi={xi}")
    return gmpy2.sqrt(4 - x * x) / (2 * gmpy2.const_pi())


def scale_to_spectral(window: ScaledWindow, N: int) -> SpectralArgs:
    """Map window offsets to absolute spectral points at matrix size N.

    mu = xi_N + mu_off / (sqrt(N) rho(xi)), same for nu.  Equal offsets give
    mu == nu exactly (the shared terms are computed once).
    """
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}")
    sqrt_n = gmpy2.sqrt(to_mpfr(N))
    xi_n = window.xi_n(N)
    denom = sqrt_n * window.rho()
    mu_off = to_mpfr(window.mu_off)
    nu_off = to_mpfr(window.nu_off)
    mu = xi_n + mu_off / denom
    nu = mu if nu_off == mu_off else xi_n + nu_off / denom
    return SpectralArgs(N=N, mu=mu, nu=nu)
