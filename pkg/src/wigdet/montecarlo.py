"""Direct simulation of Hermitian Wigner matrices and determinant estimators.

Matrices follow the normalized construction: diagonal entries sqrt(2) q with
q ~ Q, off-diagonal entries q_re + i q_im above the diagonal (independent
q_re, q_im ~ Q), conjugates below.  Estimators average det(X - mu) det(X - nu)
(or a single determinant) over i.i.d. matrices.

Determinism: draws come from counter-based Philox streams keyed by
(seed, stream_id, chunk index) with a fixed chunk size, and chunk statistics
are merged in chunk order, so a given (seed, stream_id, n_samples) always
produces a bit-identical result.  Batch evaluation of several (mu, nu) pairs
reuses one draw stream and is bitwise identical, pair by pair, to separate
single-pair runs with the same seed.

Two determinant backends exist: a compiled elimination kernel and a numpy
fallback (LAPACK), selected at import; set WIGDET_FORCE_FALLBACK=1 to force
the fallback.  Both consume identical numpy-generated draws.

The entry laws are looked up by profile label (then sampler kind) in the
module-level ``LAW_DRAWS`` registry; tests register synthetic laws there.

Every sampled determinant product at real spectral points is mathematically
real.  A sample fails the realness check only if its imaginary part is both
large relative to the real part (> 1e-8 |Re|) and above an absolute
rounding-noise floor derived from the matrix row scales; the floor matters
because lattice-valued laws produce exactly singular matrices with positive
probability, where the relative test alone is meaningless noise over noise.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

import gmpy2
from gmpy2 import mpfr

from .domain import (
    DomainValidationError,
    MomentProfile,
    NumericalComputationError,
    Real,
)

_MODULE = "montecarlo"

CHUNK_SAMPLES = 1 << 17
IMAG_REL_TOL = 1e-8
LOG_MODE_MIN_N = 65  # above this, determinants accumulate as sign * log|det|

try:
    from . import _detkernel as _compiled
except ImportError:  # pragma: no cover - build-dependent
    _compiled = None

from . import _fallback

if _compiled is not None and not os.environ.get("WIGDET_FORCE_FALLBACK"):
    _backend = _compiled
    _BACKEND_NAME = "compiled"
else:
    _backend = _fallback
    _BACKEND_NAME = "fallback"


def kernel_backend() -> str:
    """Name of the active determinant backend: 'compiled' or 'fallback'."""
    return _BACKEND_NAME


class ResidueCheckError(NumericalComputationError):
    """A sampled determinant product failed the imaginary-residue check."""

    def __init__(self, message: str):
        super().__init__(message, _MODULE)


def _draw_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) / np.sqrt(2.0)


def _draw_rademacher(rng: np.random.Generator, shape) -> np.ndarray:
    signs = rng.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0
    return signs / np.sqrt(2.0)


def _draw_uniform(rng: np.random.Generator, shape) -> np.ndarray:
    half_width = np.sqrt(1.5)
    return rng.uniform(-half_width, half_width, size=shape)


LAW_DRAWS: Dict[str, Callable[[np.random.Generator, tuple], np.ndarray]] = {
    "gaussian": _draw_gaussian,
    "rademacher": _draw_rademacher,
    "uniform": _draw_uniform,
}


@dataclass(frozen=True)
class WignerSampler:
    """A profile plus the (seed, stream_id) pair naming its draw stream."""

    profile: MomentProfile
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainValidationError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}",
                module=_MODULE,
            )
        if not 0 <= self.stream_id < 2**32:
            raise DomainValidationError(
                f"stream_id must fit in 32 bits, got {self.stream_id}", module=_MODULE
            )
        self._resolve_draw()

    def _resolve_draw(self) -> Callable[[np.random.Generator, tuple], np.ndarray]:
        fn = LAW_DRAWS.get(self.profile.label) or LAW_DRAWS.get(self.profile.sampler_kind)
        if fn is None:
            raise DomainValidationError(
                f"no sampling recipe for profile {self.profile.label!r} "
                f"(kind {self.profile.sampler_kind!r})",
                module=_MODULE,
            )
        return fn

    def chunk_rng(self, chunk_index: int) -> np.random.Generator:
        key = (self.stream_id << 32) | (chunk_index & 0xFFFFFFFF)
        return np.random.Generator(np.random.Philox(key=[self.seed, key]))


@dataclass(frozen=True)
class EstimatorResult:
    """Sample mean with its standard error over n_samples draws."""

    mean: Real
    std_error: Real
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 2:
            raise DomainValidationError(
                f"n_samples must be >= 2, got {self.n_samples}", module=_MODULE
            )


def _chunk_bounds(n_samples: int):
    start = 0
    index = 0
    while start < n_samples:
        size = min(CHUNK_SAMPLES, n_samples - start)
        yield index, size
        start += size
        index += 1


def _draw_chunk(sampler: WignerSampler, N: int, chunk_index: int, size: int):
    """One chunk of raw entry draws: diag, off_re, off_im, in that order."""
    rng = sampler.chunk_rng(chunk_index)
    draw = sampler._resolve_draw()
    noff = N * (N - 1) // 2
    diag = np.ascontiguousarray(draw(rng, (size, N)))
    off_re = np.ascontiguousarray(draw(rng, (size, noff)))
    off_im = np.ascontiguousarray(draw(rng, (size, noff)))
    return diag, off_re, off_im


def sample_matrix(N: int, sampler: WignerSampler, index: int = 0) -> np.ndarray:
    """One Hermitian sample matrix, deterministic in (seed, stream_id, index)."""
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    diag, off_re, off_im = _draw_chunk(sampler, N, index, 1)
    return _fallback._assemble_batch(diag, off_re, off_im, 0.0)[0]


def _check_residues(p: np.ndarray, floor: np.ndarray, what: str) -> None:
    im = np.abs(p.imag)
    bad = (im > IMAG_REL_TOL * np.abs(p.real)) & (im > floor)
    if bad.any():
        worst = int(np.argmax(np.where(bad, im, -np.inf)))
        raise ResidueCheckError(
            f"{int(bad.sum())} sample(s) failed the {what} realness check; "
            f"worst Im={p.imag[worst]:.3e} vs Re={p.real[worst]:.3e}, "
            f"noise floor {floor[worst]:.3e}"
        )


def _merge_mean_m2(count_a, mean_a, m2_a, count_b, mean_b, m2_b):
    """Chan's parallel update, applied in fixed chunk order."""
    count = count_a + count_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (count_b / count)
    m2 = m2_a + m2_b + delta * delta * (count_a * count_b / count)
    return count, mean, m2


def _accumulate(values_by_chunk) -> Tuple[int, float, float]:
    count, mean, m2 = 0, 0.0, 0.0
    for values in values_by_chunk:
        c_count = values.size
        c_mean = float(values.mean())
        c_m2 = float(((values - c_mean) ** 2).sum())
        if count == 0:
            count, mean, m2 = c_count, c_mean, c_m2
        else:
            count, mean, m2 = _merge_mean_m2(count, mean, m2, c_count, c_mean, c_m2)
    return count, mean, m2


def _result_from_moments(count: int, mean: float, m2: float) -> EstimatorResult:
    std_error = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    return EstimatorResult(mean=mean, std_error=std_error, n_samples=count)


def _validate_run(N: int, n_samples: int) -> None:
    if N < 1:
        raise DomainValidationError(f"N must be >= 1, got {N}", module=_MODULE)
    if n_samples < 2:
        raise DomainValidationError(
            f"n_samples must be >= 2, got {n_samples}", module=_MODULE
        )


def mc_correlation_batch(
    N: int,
    pairs: Sequence[Tuple[Real, Real]],
    sampler: WignerSampler,
    n_samples: int,
) -> List[EstimatorResult]:
    """Estimate E det(X-mu) det(X-nu) for several (mu, nu) pairs at once.

    All pairs are evaluated on the same draw stream, so each entry of the
    result is bitwise identical to a single-pair run with the same sampler.
    """
    _validate_run(N, n_samples)
    if len(pairs) == 0:
        raise DomainValidationError("pairs must be non-empty", module=_MODULE)
    if N >= LOG_MODE_MIN_N:
        return [
            _mc_log_mode(N, [float(mu), float(nu)], sampler, n_samples)
            for mu, nu in pairs
        ]
    pair_floats = [(float(mu), float(nu)) for mu, nu in pairs]
    accums = [(0, 0.0, 0.0)] * len(pairs)
    for chunk_index, size in _chunk_bounds(n_samples):
        diag, off_re, off_im = _draw_chunk(sampler, N, chunk_index, size)
        out_p = np.empty(size, dtype=np.complex128)
        out_floor = np.empty(size, dtype=np.float64)
        for i, (mu_f, nu_f) in enumerate(pair_floats):
            _backend.det_product_samples(
                diag, off_re, off_im, mu_f, nu_f, out_p, out_floor
            )
            _check_residues(out_p, out_floor, "determinant-product")
            count, mean, m2 = accums[i]
            values = out_p.real
            c_mean = float(values.mean())
            c_m2 = float(((values - c_mean) ** 2).sum())
            if count == 0:
                accums[i] = (size, c_mean, c_m2)
            else:
                accums[i] = _merge_mean_m2(count, mean, m2, size, c_mean, c_m2)
    return [_result_from_moments(*acc) for acc in accums]


def mc_correlation(
    N: int, mu: Real, nu: Real, sampler: WignerSampler, n_samples: int
) -> EstimatorResult:
    """Estimate the correlation E det(X-mu) det(X-nu) by simulation."""
    return mc_correlation_batch(N, [(mu, nu)], sampler, n_samples)[0]


def mc_mean_det(
    N: int, mu: Real, sampler: WignerSampler, n_samples: int
) -> EstimatorResult:
    """Estimate the mean determinant E det(X-mu) by simulation."""
    _validate_run(N, n_samples)
    if N >= LOG_MODE_MIN_N:
        return _mc_log_mode(N, [float(mu)], sampler, n_samples)
    mu_f = float(mu)
    chunks = []
    for chunk_index, size in _chunk_bounds(n_samples):
        diag, off_re, off_im = _draw_chunk(sampler, N, chunk_index, size)
        out_d = np.empty(size, dtype=np.complex128)
        out_floor = np.empty(size, dtype=np.float64)
        _backend.det_samples(diag, off_re, off_im, mu_f, out_d, out_floor)
        _check_residues(out_d, out_floor, "determinant")
        chunks.append(out_d.real.copy())
    return _result_from_moments(*_accumulate(chunks))


def _mc_log_mode(
    N: int, shifts: Sequence[float], sampler: WignerSampler, n_samples: int
) -> EstimatorResult:
    """Large-N estimator: per-sample sign and log magnitude, mpfr assembly.

    Per sample the estimand is the product of det(X - t) over the one or two
    given spectral shifts, carried as sign * e^(sum of logabsdets); means and
    second moments are accumulated as mpfr from per-chunk shifted sums, so
    the result survives magnitudes far past the float64 exponent range.
    """
    total = mpfr(0)
    total_sq = mpfr(0)
    count = 0
    phase_noise = 16.0 * N * N * float(np.finfo(np.float64).eps)
    for chunk_index, size in _chunk_bounds(n_samples):
        diag, off_re, off_im = _draw_chunk(sampler, N, chunk_index, size)
        sign = np.ones(size, dtype=np.complex128)
        log_p = np.zeros(size, dtype=np.float64)
        previous = None
        for t in shifts:
            if previous is not None and t == previous[0]:
                s, l = previous[1], previous[2]
            else:
                A = _fallback._assemble_batch(diag, off_re, off_im, t)
                s, l = np.linalg.slogdet(A)
                previous = (t, s, l)
            sign = sign * s
            log_p = log_p + l
        # spectra are real, so the det signs are real up to rounding noise
        bad = np.abs(sign.imag) > np.maximum(IMAG_REL_TOL * np.abs(sign.real),
                                             phase_noise)
        if bad.any():
            raise ResidueCheckError(
                f"{int(bad.sum())} sample(s) failed the sign realness check "
                f"in log mode at N={N}"
            )
        shift = float(np.max(log_p))
        if not math.isfinite(shift):
            shift = 0.0  # every sample in the chunk was exactly singular
        finite = np.isfinite(log_p)
        scaled = np.where(finite, sign.real * np.exp(log_p - shift), 0.0)
        scaled_sq = scaled * scaled
        e_shift = gmpy2.exp(mpfr(shift))
        total += e_shift * mpfr(float(scaled.sum()))
        total_sq += e_shift * e_shift * mpfr(float(scaled_sq.sum()))
        count += size
    mean = total / count
    # unbiased variance from the raw second moment, then standard error
    variance = (total_sq - count * mean * mean) / (count - 1)
    if variance < 0:
        variance = mpfr(0)
    std_error = gmpy2.sqrt(variance / count)
    return EstimatorResult(mean=mean, std_error=std_error, n_samples=count)
