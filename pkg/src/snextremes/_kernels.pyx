# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: composite Gauss-Legendre sums and streaming SN maxima."""
import numpy as np
cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport exp, fabs, sqrt, INFINITY
from numpy.random cimport bitgen_t
from scipy.special.cython_special cimport erfcx

cnp.import_array()

cdef extern from "_quadrature.h":
    void owen_panel_sums(const double *h, const double *hi, double *out, long m,
                         int panels, const double *nodes, const double *weights) nogil

cdef extern from "numpy/random/distributions.h":
    double random_standard_normal(bitgen_t *bitgen_state) nogil

_nodes, _weights = np.polynomial.legendre.leggauss(16)
cdef double[::1] NODES = np.ascontiguousarray(_nodes)
cdef double[::1] WEIGHTS = np.ascontiguousarray(_weights)
cdef int NG = 16


def owen_scaled(h, hi, int panels):
    cdef double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef double[::1] hiv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t m = hv.shape[0]
    out = np.empty(m)
    if m == 0:
        return out
    cdef double[::1] ov = out
    with nogil:
        owen_panel_sums(&hv[0], &hiv[0], &ov[0], m, panels, &NODES[0], &WEIGHTS[0])
    return out


def tail_scaled(x, double k, hi, int panels):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] hiv = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], i
    cdef int j, q
    cdef double c = 1.0 + k * k, r2 = sqrt(2.0)
    cdef double width, left, s, acc, xi
    out = np.empty(m)
    cdef double[::1] ov = out
    for i in range(m):
        width = hiv[i] / panels
        xi = xv[i]
        acc = 0.0
        for j in range(panels):
            left = j * width
            for q in range(NG):
                s = left + 0.5 * width * (NODES[q] + 1.0)
                acc += WEIGHTS[q] * exp(-c * s * (xi + 0.5 * s)) * erfcx(k * (xi + s) / r2)
        ov[i] = 0.5 * width * acc
    return out


def block_max(bitgen, Py_ssize_t n, double delta, double omega):
    cdef const char *name = "BitGenerator"
    capsule = bitgen.capsule
    if not PyCapsule_IsValid(capsule, name):
        raise ValueError("invalid bit generator")
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, name)
    cdef Py_ssize_t i
    cdef double u0, u1, v, best = -INFINITY
    with bitgen.lock, nogil:
        for i in range(n):
            u0 = random_standard_normal(rng)
            u1 = random_standard_normal(rng)
            v = delta * fabs(u0) + omega * u1
            if v > best:
                best = v
    return best
