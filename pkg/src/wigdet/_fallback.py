"""Pure-numpy twin of the compiled determinant kernel.

Same entry points and semantics as the compiled module: batched assembly of
the shifted Hermitian matrices and determinants via LAPACK (complex LU with
partial pivoting), plus the identical rounding-noise floor definition
(16 N^2 eps times the product of row maxima of |re| + |im|).  Results agree
with the compiled kernel to elimination rounding; each backend is
individually deterministic.
"""
from __future__ import annotations

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


def _assemble_batch(diag: np.ndarray, off_re: np.ndarray, off_im: np.ndarray,
                    shift: float) -> np.ndarray:
    n, N = diag.shape
    X = np.zeros((n, N, N), dtype=np.complex128)
    if N > 1:
        iu = np.triu_indices(N, 1)
        upper = off_re + 1j * off_im
        X[:, iu[0], iu[1]] = upper
        X[:, iu[1], iu[0]] = np.conj(upper)
    idx = np.arange(N)
    X[:, idx, idx] = np.sqrt(2.0) * diag - shift
    return X


def _floor_batch(A: np.ndarray) -> np.ndarray:
    N = A.shape[1]
    row_max = (np.abs(A.real) + np.abs(A.imag)).max(axis=2)
    return 16.0 * N * N * _EPS * np.prod(row_max, axis=1)


def det_product_samples(diag, off_re, off_im, mu, nu, out_p, out_floor):
    """Per sample: det(X - mu) * det(X - nu) and its imaginary-noise floor."""
    A_mu = _assemble_batch(diag, off_re, off_im, mu)
    fl_mu = _floor_batch(A_mu)
    d_mu = np.linalg.det(A_mu)
    if nu == mu:
        d_nu, fl_nu = d_mu, fl_mu
    else:
        A_nu = _assemble_batch(diag, off_re, off_im, nu)
        fl_nu = _floor_batch(A_nu)
        d_nu = np.linalg.det(A_nu)
    np.multiply(d_mu, d_nu, out=out_p)
    a_mu = np.abs(d_mu.real) + np.abs(d_mu.imag)
    a_nu = np.abs(d_nu.real) + np.abs(d_nu.imag)
    out_floor[:] = a_nu * fl_mu + a_mu * fl_nu + fl_mu * fl_nu


def det_samples(diag, off_re, off_im, mu, out_d, out_floor):
    """Per sample: det(X - mu) and its imaginary-noise floor."""
    A = _assemble_batch(diag, off_re, off_im, mu)
    out_floor[:] = _floor_batch(A)
    out_d[:] = np.linalg.det(A)
