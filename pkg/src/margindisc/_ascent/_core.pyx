# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled projected-gradient ascent kernel.

Mirrors margindisc._ascent.fallback.ascent_margin step for step; matrix
products go through BLAS zgemm and the completeness projection through LAPACK
zheev, both called directly so the whole iteration stays in C.
"""

import numpy as np

from scipy.linalg.cython_blas cimport zgemm
from scipy.linalg.cython_lapack cimport zheev

from libc.math cimport sqrt
from libc.string cimport memcpy, memset

BACKEND_NAME = "compiled"

cdef double LAMBDA_FLOOR = 1e-15


cdef inline void _gemm(char ta, char tb, int d,
                       double complex alpha, double complex *a, double complex *b,
                       double complex beta, double complex *c) noexcept nogil:
    # row-major C = alpha * op_ta(A) @ op_tb(B) + beta * C, op flags 'N'/'C';
    # implemented by the operand-swap trick on column-major zgemm
    zgemm(&tb, &ta, &d, &d, &d, &alpha, b, &d, a, &d, &beta, c, &d)


cdef inline double _re_trace_prod(int d, double complex *a, double complex *b) noexcept nogil:
    # Re tr(A @ B) for row-major buffers
    cdef int j, k
    cdef double acc = 0.0
    for j in range(d):
        for k in range(d):
            acc += (a[j * d + k] * b[k * d + j]).real
    return acc


cdef int _inv_sqrt(int d, double complex *s, double complex *t,
                   double *evals, double complex *work, int lwork,
                   double *rwork) noexcept nogil:
    # t = s^{-1/2} for Hermitian row-major s (eigenvalues floored)
    cdef char jobz = b'V'
    cdef char uplo = b'L'
    cdef int info = 0
    cdef int a, i, j
    cdef double lam, floor_val
    cdef double complex acc
    zheev(&jobz, &uplo, &d, s, &d, evals, work, &lwork, rwork, &info)
    if info != 0:
        return info
    floor_val = evals[d - 1] * LAMBDA_FLOOR
    if floor_val <= 0.0:
        floor_val = LAMBDA_FLOOR
    for a in range(d):
        lam = evals[a]
        if lam < floor_val:
            lam = floor_val
        evals[a] = 1.0 / sqrt(lam)
    # the buffer now holds (column-major) eigenvectors of conj(S); the
    # eigenvectors of S are their conjugates, so
    # T[i,j] = sum_a f_a conj(V[a*d+i]) V[a*d+j]
    for i in range(d):
        for j in range(d):
            acc = 0.0
            for a in range(d):
                acc = acc + evals[a] * s[a * d + i].conjugate() * s[a * d + j]
            t[i * d + j] = acc
    return 0


def ascent_margin(double complex[:, :, ::1] weighted, double margin,
                  double complex[:, :, ::1] factors,
                  int iters, double step0, double decay,
                  double penalty0, double penalty_max, double feas_tol):
    """Run the ascent; returns (best_p_success, best_p_error, best_factors)."""
    cdef int n = weighted.shape[0]
    cdef int d = weighted.shape[1]
    cdef int nf = factors.shape[0]
    if nf != n + 1 or weighted.shape[2] != d or factors.shape[1] != d or factors.shape[2] != d:
        raise ValueError("shape mismatch between weighted outputs and factors")

    scratch = np.empty((7, d, d), dtype=np.complex128)
    cdef double complex[:, :, ::1] sc = scratch
    cdef double complex *s_buf = &sc[0, 0, 0]
    cdef double complex *t_buf = &sc[1, 0, 0]
    cdef double complex *a_buf = &sc[2, 0, 0]
    cdef double complex *g_buf = &sc[3, 0, 0]
    cdef double complex *e_buf = &sc[4, 0, 0]
    cdef double complex *c_buf = &sc[5, 0, 0]
    cdef double complex *r_buf = &sc[6, 0, 0]

    best = np.array(factors, copy=True)
    cdef double complex[:, :, ::1] bestv = best
    cdef double complex *best_ptr = &bestv[0, 0, 0]
    cdef double complex *fac = &factors[0, 0, 0]
    cdef double complex *wmat = &weighted[0, 0, 0]

    evals_arr = np.empty(d, dtype=np.float64)
    rwork_arr = np.empty(max(1, 3 * d - 2), dtype=np.float64)
    cdef double[::1] evals = evals_arr
    cdef double[::1] rwork = rwork_arr

    # LAPACK workspace query
    cdef char jobz = b'V'
    cdef char uplo = b'L'
    cdef int info = 0
    cdef int lwork = -1
    cdef double complex wk_query
    zheev(&jobz, &uplo, &d, s_buf, &d, &evals[0], &wk_query, &lwork, &rwork[0], &info)
    lwork = <int>wk_query.real
    if lwork < 2 * d - 1:
        lwork = 2 * d - 1
    work_arr = np.empty(lwork, dtype=np.complex128)
    cdef double complex[::1] work = work_arr

    cdef int i, j, t_iter, sz = d * d
    cdef double po, px, step, coeff, sub
    cdef double best_po = -1.0
    cdef double best_px = np.inf
    cdef double w = penalty0
    cdef bint infeasible

    # R = sum_i weighted_i
    memset(r_buf, 0, sz * sizeof(double complex))
    for i in range(n):
        for j in range(sz):
            r_buf[j] = r_buf[j] + wmat[i * sz + j]

    with nogil:
        info = _apply_projection(n, d, fac, s_buf, t_buf, g_buf,
                                 &evals[0], &work[0], lwork, &rwork[0])
    if info != 0:
        raise RuntimeError(f"zheev failed with info={info}")

    for t_iter in range(iters + 1):
        with nogil:
            # probabilities of the current POVM
            po = 0.0
            memset(c_buf, 0, sz * sizeof(double complex))
            for i in range(n):
                _gemm(b'N', b'C', d, 1.0, fac + (i + 1) * sz, fac + (i + 1) * sz, 0.0, e_buf)
                po += _re_trace_prod(d, wmat + i * sz, e_buf)
                for j in range(sz):
                    c_buf[j] = c_buf[j] + e_buf[j]
            px = _re_trace_prod(d, r_buf, c_buf) - po

            if px <= margin + feas_tol and po > best_po:
                best_po = po
                best_px = px
                memcpy(best_ptr, fac, (n + 1) * sz * sizeof(double complex))

            if t_iter < iters:
                infeasible = px > margin
                step = step0 / (1.0 + decay * t_iter)
                if infeasible:
                    step /= 1.0 + w
                    coeff = 1.0 + w
                    sub = w
                else:
                    coeff = 1.0
                    sub = 0.0
                for i in range(n):
                    for j in range(sz):
                        a_buf[j] = coeff * wmat[i * sz + j] - sub * r_buf[j]
                    _gemm(b'N', b'N', d, 1.0, a_buf, fac + (i + 1) * sz, 0.0, g_buf)
                    for j in range(sz):
                        fac[(i + 1) * sz + j] = fac[(i + 1) * sz + j] + step * g_buf[j]
                info = _apply_projection(n, d, fac, s_buf, t_buf, g_buf,
                                         &evals[0], &work[0], lwork, &rwork[0])
        if info != 0:
            raise RuntimeError(f"zheev failed with info={info}")
        if t_iter < iters and (t_iter + 1) % 64 == 0 and px > margin + feas_tol:
            w = min(2.0 * w, penalty_max)

    return best_po, best_px, best


cdef int _apply_projection(int n, int d, double complex *fac,
                           double complex *s_buf, double complex *t_buf,
                           double complex *g_buf, double *evals,
                           double complex *work, int lwork,
                           double *rwork) noexcept nogil:
    cdef int i, j, sz = d * d
    cdef int info
    memset(s_buf, 0, sz * sizeof(double complex))
    for i in range(n + 1):
        _gemm(b'N', b'C', d, 1.0, fac + i * sz, fac + i * sz, 1.0, s_buf)
    info = _inv_sqrt(d, s_buf, t_buf, evals, work, lwork, rwork)
    if info != 0:
        return info
    for i in range(n + 1):
        _gemm(b'N', b'N', d, 1.0, t_buf, fac + i * sz, 0.0, g_buf)
        memcpy(fac + i * sz, g_buf, sz * sizeof(double complex))
    return 0
