# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: packed polynomial-map evaluation and per-point
damped Newton.  Mirrors ``_pykernels`` exactly in signature and semantics."""

import numpy as np

from libc.math cimport sqrt
from libc.stdlib cimport malloc, free

NAME = "compiled"

cdef int MAX_HALVINGS = 11
cdef double BLOWUP = 1e8


cdef extern from "complex.h" nogil:
    double cabs(double complex)


cdef inline void _powers(const double complex* z, int n, int D, double complex* pw) noexcept nogil:
    cdef int v, k
    for v in range(n):
        pw[v * (D + 1)] = 1.0
        for k in range(1, D + 1):
            pw[v * (D + 1) + k] = pw[v * (D + 1) + k - 1] * z[v]


cdef void _eval(const long long[:, ::1] exps, const double complex[::1] coeffs,
                const long long[::1] offs, int npolys, int n, int D,
                const double complex* z, double complex* pw, double complex* out) noexcept nogil:
    cdef int p, v
    cdef long long t, e
    cdef double complex acc, term
    _powers(z, n, D, pw)
    for p in range(npolys):
        acc = 0
        for t in range(offs[p], offs[p + 1]):
            term = coeffs[t]
            for v in range(n):
                e = exps[t, v]
                if e:
                    term = term * pw[v * (D + 1) + e]
            acc = acc + term
        out[p] = acc


cdef double _norm(const double complex* F, int m) noexcept nogil:
    cdef double s = 0
    cdef int k
    for k in range(m):
        s += F[k].real * F[k].real + F[k].imag * F[k].imag
    return sqrt(s)


cdef int _solve(double complex* A, double complex* b, int m) noexcept nogil:
    """Gaussian elimination with partial pivoting, in place; b <- A^{-1} b.
    Returns 0 on success, 1 if singular."""
    cdef int col, row, piv, k
    cdef double best, a
    cdef double complex tmp, factor
    for col in range(m):
        piv = col
        best = cabs(A[col * m + col])
        for row in range(col + 1, m):
            a = cabs(A[row * m + col])
            if a > best:
                best = a
                piv = row
        if not (best > 1e-300):
            return 1
        if piv != col:
            for k in range(m):
                tmp = A[col * m + k]
                A[col * m + k] = A[piv * m + k]
                A[piv * m + k] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        for row in range(col + 1, m):
            factor = A[row * m + col] / A[col * m + col]
            if factor != 0:
                for k in range(col, m):
                    A[row * m + k] = A[row * m + k] - factor * A[col * m + k]
                b[row] = b[row] - factor * b[col]
    for row in range(m - 1, -1, -1):
        tmp = b[row]
        for k in range(row + 1, m):
            tmp = tmp - A[row * m + k] * b[k]
        b[row] = tmp / A[row * m + row]
    for k in range(m):
        if b[k].real != b[k].real or b[k].imag != b[k].imag:
            return 1
    return 0


def eval_map(const long long[:, ::1] exps, const double complex[::1] coeffs, const long long[::1] offsets,
             int maxdeg, Z):
    """Evaluate every polynomial of a packed map at each row of ``Z``."""
    cdef const double complex[:, ::1] Zv = np.ascontiguousarray(Z, dtype=np.complex128)
    cdef int N = Zv.shape[0]
    cdef int n = Zv.shape[1]
    cdef int npolys = offsets.shape[0] - 1
    out = np.empty((N, npolys), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double complex* pw = <double complex*> malloc(max(n, 1) * (maxdeg + 1) * sizeof(double complex))
    cdef int i
    if pw == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(N):
                _eval(exps, coeffs, offsets, npolys, n, maxdeg, &Zv[i, 0] if n else NULL, pw, &ov[i, 0])
    finally:
        free(pw)
    return out


def newton_batch(const long long[:, ::1] gexps, const double complex[::1] gcoeffs, const long long[::1] goffs,
                 const long long[:, ::1] jexps, const double complex[::1] jcoeffs, const long long[::1] joffs,
                 int maxdeg, W, Z0, double tol, int maxit):
    """Damped Newton for g(z) = w from each start; see ``_pykernels``."""
    cdef const double complex[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.complex128)
    Zout = np.array(Z0, dtype=np.complex128, copy=True, order="C")
    cdef double complex[:, ::1] Zv = Zout
    cdef int N = Zv.shape[0]
    cdef int m = Zv.shape[1]
    ok_arr = np.zeros(N, dtype=np.uint8)
    res_arr = np.empty(N, dtype=np.float64)
    cdef unsigned char[::1] ok = ok_arr
    cdef double[::1] resid = res_arr
    cdef double complex* buf = <double complex*> malloc(
        (6 * m + m * m + m * (maxdeg + 1)) * sizeof(double complex))
    if buf == NULL:
        raise MemoryError()
    cdef double complex* z = buf
    cdef double complex* zt = buf + m
    cdef double complex* F = buf + 2 * m
    cdef double complex* Ft = buf + 3 * m
    cdef double complex* d = buf + 4 * m
    cdef double complex* J = buf + 6 * m
    cdef double complex* pw = buf + 6 * m + m * m
    cdef int i, k, it, h, improved, blown
    cdef double r, rt, lam
    try:
        with nogil:
            for i in range(N):
                for k in range(m):
                    z[k] = Zv[i, k]
                _eval(gexps, gcoeffs, goffs, m, m, maxdeg, z, pw, F)
                for k in range(m):
                    F[k] = F[k] - Wv[i, k]
                r = _norm(F, m)
                for it in range(maxit + 1):
                    if r <= tol:
                        # one polishing step, kept only if it does not hurt
                        _eval(jexps, jcoeffs, joffs, m * m, m, maxdeg, z, pw, J)
                        for k in range(m):
                            d[k] = F[k]
                        if _solve(J, d, m) == 0:
                            for k in range(m):
                                zt[k] = z[k] - d[k]
                            _eval(gexps, gcoeffs, goffs, m, m, maxdeg, zt, pw, Ft)
                            for k in range(m):
                                Ft[k] = Ft[k] - Wv[i, k]
                            rt = _norm(Ft, m)
                            if rt <= r:
                                for k in range(m):
                                    z[k] = zt[k]
                                r = rt
                        ok[i] = 1
                        break
                    if it == maxit:
                        break
                    _eval(jexps, jcoeffs, joffs, m * m, m, maxdeg, z, pw, J)
                    for k in range(m):
                        d[k] = F[k]
                    if _solve(J, d, m) != 0:
                        break
                    lam = 1.0
                    improved = 0
                    for h in range(MAX_HALVINGS):
                        for k in range(m):
                            zt[k] = z[k] - lam * d[k]
                        _eval(gexps, gcoeffs, goffs, m, m, maxdeg, zt, pw, Ft)
                        for k in range(m):
                            Ft[k] = Ft[k] - Wv[i, k]
                        rt = _norm(Ft, m)
                        if rt < r:
                            improved = 1
                            break
                        lam = lam * 0.5
                    if not improved:
                        break
                    blown = 0
                    for k in range(m):
                        z[k] = zt[k]
                        F[k] = Ft[k]
                        if cabs(z[k]) > BLOWUP:
                            blown = 1
                    r = rt
                    if blown:
                        break
                for k in range(m):
                    Zv[i, k] = z[k]
                resid[i] = r
    finally:
        free(buf)
    return Zout, ok_arr.astype(bool), res_arr
