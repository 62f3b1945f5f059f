# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled spectral-sum kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def imag_axis_sum(gaps, weights, u):
    cdef const double[::1] g = np.ascontiguousarray(gaps, dtype=np.float64)
    cdef const double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t nk = g.shape[0], nm = w.shape[1], nu = uu.shape[0]
    cdef Py_ssize_t a, k, m
    cdef double u2, kern
    out = np.zeros((nu, nm), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for a in range(nu):
            u2 = uu[a] * uu[a]
            for k in range(nk):
                kern = 2.0 * g[k] / (g[k] * g[k] + u2)
                for m in range(nm):
                    o[a, m] += kern * w[k, m]
    return out


def real_axis_sum(gaps, weights, omega):
    cdef const double[::1] g = np.ascontiguousarray(gaps, dtype=np.float64)
    cdef const double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] om = np.ascontiguousarray(omega, dtype=np.float64)
    cdef Py_ssize_t nk = g.shape[0], nm = w.shape[1], na = om.shape[0]
    cdef Py_ssize_t a, k, m
    cdef double kern
    out = np.zeros((na, nm), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for a in range(na):
            for k in range(nk):
                kern = 1.0 / (g[k] - om[a]) + 1.0 / (g[k] + om[a])
                for m in range(nm):
                    o[a, m] += kern * w[k, m]
    return out


def pair_sum(gaps_a, weights_a, gaps_b, weights_b):
    cdef const double[::1] ga = np.ascontiguousarray(gaps_a, dtype=np.float64)
    cdef const double[:, ::1] wa = np.ascontiguousarray(weights_a, dtype=np.float64)
    cdef const double[::1] gb = np.ascontiguousarray(gaps_b, dtype=np.float64)
    cdef const double[:, ::1] wb = np.ascontiguousarray(weights_b, dtype=np.float64)
    cdef Py_ssize_t na = ga.shape[0], nb = gb.shape[0]
    cdef Py_ssize_t pa = wa.shape[1], pb = wb.shape[1]
    cdef Py_ssize_t i, j, p, q
    cdef double inv
    # partial[i, q] = sum_j wb[j, q] / (ga_i + gb_j)
    partial = np.zeros((na, pb), dtype=np.float64)
    cdef double[:, ::1] s = partial
    out = np.zeros((pa, pb), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(na):
            for j in range(nb):
                inv = 1.0 / (ga[i] + gb[j])
                for q in range(pb):
                    s[i, q] += inv * wb[j, q]
        for i in range(na):
            for p in range(pa):
                for q in range(pb):
                    o[p, q] += wa[i, p] * s[i, q]
    return out
