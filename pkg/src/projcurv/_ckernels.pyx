# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled polynomial kernels; same contract as ``projcurv._pykernels``."""
import numpy as np
cimport numpy as cnp

BACKEND = "cython"

cdef inline void _powers(const double complex[:, ::1] Z, Py_ssize_t p,
                         double complex[:, ::1] pw, Py_ssize_t dmax) noexcept nogil:
    cdef Py_ssize_t i, e
    for i in range(Z.shape[1]):
        pw[i, 0] = 1.0
        for e in range(1, dmax + 1):
            pw[i, e] = pw[i, e - 1] * Z[p, i]


def poly_eval(const cnp.int64_t[:, ::1] exps, const double complex[::1] coeffs,
              Z_in):
    cdef const double complex[:, ::1] Z = np.ascontiguousarray(Z_in, dtype=np.complex128)
    cdef Py_ssize_t P = Z.shape[0], n = Z.shape[1], T = exps.shape[0]
    out_arr = np.zeros(P, dtype=np.complex128)
    if T == 0:
        return out_arr
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t dmax = int(np.max(exps))
    cdef double complex[:, ::1] pw = np.empty((n, dmax + 1), dtype=np.complex128)
    cdef Py_ssize_t p, t, i
    cdef double complex acc, mono
    with nogil:
        for p in range(P):
            _powers(Z, p, pw, dmax)
            acc = 0.0
            for t in range(T):
                mono = coeffs[t]
                for i in range(n):
                    mono = mono * pw[i, exps[t, i]]
                acc = acc + mono
            out[p] = acc
    return out_arr


def poly_grad(const cnp.int64_t[:, ::1] exps, const double complex[::1] coeffs,
              Z_in):
    cdef const double complex[:, ::1] Z = np.ascontiguousarray(Z_in, dtype=np.complex128)
    cdef Py_ssize_t P = Z.shape[0], n = Z.shape[1], T = exps.shape[0]
    out_arr = np.zeros((P, n), dtype=np.complex128)
    if T == 0:
        return out_arr
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t dmax = int(np.max(exps))
    cdef double complex[:, ::1] pw = np.empty((n, dmax + 1), dtype=np.complex128)
    cdef Py_ssize_t p, t, i, j
    cdef cnp.int64_t e
    cdef double complex mono
    with nogil:
        for p in range(P):
            _powers(Z, p, pw, dmax)
            for t in range(T):
                for i in range(n):
                    e = exps[t, i]
                    if e == 0:
                        continue
                    mono = coeffs[t] * e * pw[i, e - 1]
                    for j in range(n):
                        if j != i:
                            mono = mono * pw[j, exps[t, j]]
                    out[p, i] = out[p, i] + mono
    return out_arr


def poly_hess(const cnp.int64_t[:, ::1] exps, const double complex[::1] coeffs,
              Z_in):
    cdef const double complex[:, ::1] Z = np.ascontiguousarray(Z_in, dtype=np.complex128)
    cdef Py_ssize_t P = Z.shape[0], n = Z.shape[1], T = exps.shape[0]
    out_arr = np.zeros((P, n, n), dtype=np.complex128)
    if T == 0:
        return out_arr
    cdef double complex[:, :, ::1] out = out_arr
    cdef Py_ssize_t dmax = int(np.max(exps))
    cdef double complex[:, ::1] pw = np.empty((n, dmax + 1), dtype=np.complex128)
    cdef Py_ssize_t p, t, i, j, l
    cdef cnp.int64_t ei, ej
    cdef double complex mono
    with nogil:
        for p in range(P):
            _powers(Z, p, pw, dmax)
            for t in range(T):
                for i in range(n):
                    ei = exps[t, i]
                    if ei == 0:
                        continue
                    for j in range(i, n):
                        ej = exps[t, j]
                        if i == j:
                            if ei < 2:
                                continue
                            mono = coeffs[t] * (ei * (ei - 1)) * pw[i, ei - 2]
                            for l in range(n):
                                if l != i:
                                    mono = mono * pw[l, exps[t, l]]
                        else:
                            if ej == 0:
                                continue
                            mono = coeffs[t] * (ei * ej) * pw[i, ei - 1] * pw[j, ej - 1]
                            for l in range(n):
                                if l != i and l != j:
                                    mono = mono * pw[l, exps[t, l]]
                        out[p, i, j] = out[p, i, j] + mono
            for i in range(n):
                for j in range(i + 1, n):
                    out[p, j, i] = out[p, i, j]
    return out_arr


def fiber_coeffs(const cnp.int64_t[:, ::1] exps, const double complex[::1] coeffs,
                 W_in, Py_ssize_t k, Py_ssize_t degree):
    cdef const double complex[:, ::1] W = np.ascontiguousarray(W_in, dtype=np.complex128)
    cdef Py_ssize_t P = W.shape[0], n = W.shape[1], T = exps.shape[0]
    out_arr = np.zeros((P, degree + 1), dtype=np.complex128)
    if T == 0:
        return out_arr
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t dmax = int(np.max(exps))
    cdef double complex[:, ::1] pw = np.empty((n, dmax + 1), dtype=np.complex128)
    cdef Py_ssize_t p, t, i
    cdef double complex mono
    with nogil:
        for p in range(P):
            _powers(W, p, pw, dmax)
            for t in range(T):
                mono = coeffs[t]
                for i in range(n):
                    if i != k:
                        mono = mono * pw[i, exps[t, i]]
                out[p, degree - exps[t, k]] = out[p, degree - exps[t, k]] + mono
    return out_arr
