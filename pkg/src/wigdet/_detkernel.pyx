# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-sample determinant kernel for Wigner matrix simulation.

For each sample the Hermitian matrix is assembled in place from raw entry
draws (diagonal q's and off-diagonal re/im q's), shifted by the spectral
point, and reduced by complex LU elimination with partial pivoting (pivot
metric re^2 + im^2, no square roots).  Alongside each determinant (product)
an absolute rounding-noise floor is produced from the product of row maxima
of |re| + |im|, used by the caller to validate that imaginary residues are
elimination noise rather than structural errors.
"""
from libc.stdlib cimport free, malloc

cdef double EPS = 2.220446049250313e-16


cdef double complex _lu_det(double complex* a, Py_ssize_t N) noexcept nogil:
    """In-place LU with partial pivoting; returns the determinant."""
    cdef Py_ssize_t col, i, j, piv
    cdef double best, cand
    cdef double complex tmp, factor, det = 1.0
    for col in range(N):
        piv = col
        best = (a[col * N + col].real * a[col * N + col].real
                + a[col * N + col].imag * a[col * N + col].imag)
        for i in range(col + 1, N):
            cand = (a[i * N + col].real * a[i * N + col].real
                    + a[i * N + col].imag * a[i * N + col].imag)
            if cand > best:
                best = cand
                piv = i
        if best == 0.0:
            return 0.0
        if piv != col:
            for j in range(N):
                tmp = a[col * N + j]
                a[col * N + j] = a[piv * N + j]
                a[piv * N + j] = tmp
            det = -det
        for i in range(col + 1, N):
            factor = a[i * N + col] / a[col * N + col]
            for j in range(col + 1, N):
                a[i * N + j] = a[i * N + j] - factor * a[col * N + j]
    for col in range(N):
        det = det * a[col * N + col]
    return det


cdef void _assemble(double complex* a, Py_ssize_t N, double shift, double sqrt2,
                    const double* diag, const double* off_re,
                    const double* off_im) noexcept nogil:
    """a = X - shift*I from one sample's raw draws (row-major, Hermitian)."""
    cdef Py_ssize_t i, j, k = 0
    cdef double re, im
    for i in range(N):
        a[i * N + i] = sqrt2 * diag[i] - shift
        for j in range(i + 1, N):
            re = off_re[k]
            im = off_im[k]
            a[i * N + j] = re + 1j * im
            a[j * N + i] = re - 1j * im
            k += 1


cdef double _row_max_product(const double complex* a, Py_ssize_t N) noexcept nogil:
    """Product over rows of max_j (|re| + |im|): scale for rounding noise."""
    cdef Py_ssize_t i, j
    cdef double rmax, e, prod = 1.0
    for i in range(N):
        rmax = 0.0
        for j in range(N):
            e = abs(a[i * N + j].real) + abs(a[i * N + j].imag)
            if e > rmax:
                rmax = e
        prod *= rmax
    return prod


def det_product_samples(const double[:, ::1] diag, const double[:, ::1] off_re,
                        const double[:, ::1] off_im, double mu, double nu,
                        double complex[::1] out_p, double[::1] out_floor):
    """Per sample: det(X - mu) * det(X - nu) and its imaginary-noise floor.

    diag is (n, N) raw q draws (scaled by sqrt(2) internally); off_re/off_im
    are (n, N(N-1)/2) raw draws walking the upper triangle row by row.
    mu == nu factorizes one LU per sample instead of two.
    """
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t N = diag.shape[1]
    cdef Py_ssize_t noff = N * (N - 1) // 2
    if off_re.shape[0] != n or off_im.shape[0] != n:
        raise ValueError("draw arrays disagree on sample count")
    if off_re.shape[1] != noff or off_im.shape[1] != noff:
        raise ValueError("off-diagonal draw arrays must have N(N-1)/2 columns")
    if out_p.shape[0] != n or out_floor.shape[0] != n:
        raise ValueError("output arrays must have length n")
    cdef double complex* a = <double complex*> malloc(N * N * sizeof(double complex))
    if a == NULL:
        raise MemoryError()
    cdef double sqrt2 = 2.0 ** 0.5
    cdef Py_ssize_t s
    cdef double complex d_mu, d_nu
    cdef double fl_mu, fl_nu, a_mu, a_nu
    cdef bint same = mu == nu
    try:
        with nogil:
            for s in range(n):
                _assemble(a, N, mu, sqrt2, &diag[s, 0],
                          &off_re[s, 0] if noff else NULL,
                          &off_im[s, 0] if noff else NULL)
                fl_mu = 16.0 * N * N * EPS * _row_max_product(a, N)
                d_mu = _lu_det(a, N)
                if same:
                    d_nu = d_mu
                    fl_nu = fl_mu
                else:
                    _assemble(a, N, nu, sqrt2, &diag[s, 0],
                              &off_re[s, 0] if noff else NULL,
                              &off_im[s, 0] if noff else NULL)
                    fl_nu = 16.0 * N * N * EPS * _row_max_product(a, N)
                    d_nu = _lu_det(a, N)
                out_p[s] = d_mu * d_nu
                a_mu = abs(d_mu.real) + abs(d_mu.imag)
                a_nu = abs(d_nu.real) + abs(d_nu.imag)
                out_floor[s] = a_nu * fl_mu + a_mu * fl_nu + fl_mu * fl_nu
    finally:
        free(a)


def det_samples(const double[:, ::1] diag, const double[:, ::1] off_re,
                const double[:, ::1] off_im, double mu,
                double complex[::1] out_d, double[::1] out_floor):
    """Per sample: det(X - mu) and its imaginary-noise floor."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t N = diag.shape[1]
    cdef Py_ssize_t noff = N * (N - 1) // 2
    if off_re.shape[0] != n or off_im.shape[0] != n:
        raise ValueError("draw arrays disagree on sample count")
    if off_re.shape[1] != noff or off_im.shape[1] != noff:
        raise ValueError("off-diagonal draw arrays must have N(N-1)/2 columns")
    if out_d.shape[0] != n or out_floor.shape[0] != n:
        raise ValueError("output arrays must have length n")
    cdef double complex* a = <double complex*> malloc(N * N * sizeof(double complex))
    if a == NULL:
        raise MemoryError()
    cdef double sqrt2 = 2.0 ** 0.5
    cdef Py_ssize_t s
    try:
        with nogil:
            for s in range(n):
                _assemble(a, N, mu, sqrt2, &diag[s, 0],
                          &off_re[s, 0] if noff else NULL,
                          &off_im[s, 0] if noff else NULL)
                out_floor[s] = 16.0 * N * N * EPS * _row_max_product(a, N)
                out_d[s] = _lu_det(a, N)
    finally:
        free(a)
