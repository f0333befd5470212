"""Correlations of characteristic polynomials of Hermitian Wigner matrices.

The central quantity is the second-order correlation

    f(N; mu, nu) = E[ det(X_N - mu I) det(X_N - nu I) ],

for an N x N Hermitian Wigner matrix X_N whose entry law Q has mean 0,
variance 1/2, and fourth moment b.  The package evaluates f by four
independent exact routes (a five-sequence recursion, a condensed
single-sequence recursion, the closed-form exponential generating function,
and Cauchy contour quadrature on that generating function), estimates it by
direct Monte Carlo simulation, and checks the convergence of its scaled form
to the universal sine-kernel limit with the non-universal factor e^(b - 3/4).

All exact arithmetic runs in an arbitrary-precision context (gmpy2/MPFR)
selected via :func:`precision_bits`; the Monte Carlo kernels run in float64
with a compiled elimination core and a numpy fallback.
"""
from .domain import (
    PRECISION_TIERS,
    DomainValidationError,
    GAUSSIAN_PROFILE,
    MomentProfile,
    NumericalComputationError,
    OverflowComputationError,
    RADEMACHER_PROFILE,
    SHIPPED_PROFILES,
    ScaledWindow,
    SpectralArgs,
    UNIFORM_PROFILE,
    active_precision,
    precision_bits,
    scale_to_spectral,
    semicircle_density,
    to_mpfr,
)
from .recursion import (
    CondensedState,
    FullSystemState,
    condensed,
    damped_condensed,
    full_system,
    scaled_correlation,
)
from .series import (
    TruncatedSeries,
    binomial_power,
    coeff_to_f,
    egf_F,
    geometric_even,
    geometric_odd,
    series_exp,
)
from .hermite import (
    MeanDetSequence,
    bound_ratio,
    centered_correlation,
    g_recursion,
    g_via_hermite,
    hermite_H,
    scaled_mean_det,
)
from .asymptotics import (
    ContourPlan,
    ConvergenceRow,
    QuadratureResidueError,
    centering_gap,
    contour_coefficient,
    contour_coefficient_diag,
    convergence_study,
    default_contour_plan,
    general_window_prelimit,
    normalized_ratio,
    ratio_sinc_limit,
    scaled_centered_correlation,
    sine_kernel_limit,
    sine_kernel_limit_eta,
)
from .montecarlo import (
    CHUNK_SAMPLES,
    EstimatorResult,
    LAW_DRAWS,
    ResidueCheckError,
    WignerSampler,
    kernel_backend,
    mc_correlation,
    mc_correlation_batch,
    mc_mean_det,
    sample_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "PRECISION_TIERS",
    "DomainValidationError",
    "GAUSSIAN_PROFILE",
    "MomentProfile",
    "NumericalComputationError",
    "OverflowComputationError",
    "RADEMACHER_PROFILE",
    "SHIPPED_PROFILES",
    "ScaledWindow",
    "SpectralArgs",
    "UNIFORM_PROFILE",
    "active_precision",
    "precision_bits",
    "scale_to_spectral",
    "semicircle_density",
    "to_mpfr",
    "CondensedState",
    "FullSystemState",
    "condensed",
    "damped_condensed",
    "full_system",
    "scaled_correlation",
    "TruncatedSeries",
    "binomial_power",
    "coeff_to_f",
    "egf_F",
    "geometric_even",
    "geometric_odd",
    "series_exp",
    "MeanDetSequence",
    "bound_ratio",
    "centered_correlation",
    "g_recursion",
    "g_via_hermite",
    "hermite_H",
    "scaled_mean_det",
    "ContourPlan",
    "ConvergenceRow",
    "QuadratureResidueError",
    "centering_gap",
    "contour_coefficient",
    "contour_coefficient_diag",
    "convergence_study",
    "default_contour_plan",
    "general_window_prelimit",
    "normalized_ratio",
    "ratio_sinc_limit",
    "scaled_centered_correlation",
    "sine_kernel_limit",
    "sine_kernel_limit_eta",
    "CHUNK_SAMPLES",
    "EstimatorResult",
    "LAW_DRAWS",
    "ResidueCheckError",
    "WignerSampler",
    "kernel_backend",
    "mc_correlation",
    "mc_correlation_batch",
    "mc_mean_det",
    "sample_matrix",
    "__version__",
]
