# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-loop kernels for the power family.

Fused loops over the flattened pair arrays: no temporaries, one pass.
Signatures mirror the *_power functions of `_kernels_np`; the generic
Young-function path stays in NumPy.
"""

from libc.math cimport fabs, pow

import numpy as np
cimport numpy as cnp

name = "compiled"


def modular_sum_power(double[::1] u, int[::1] ii, int[::1] jj,
                      double[::1] inv_d, double[::1] wp,
                      double coeff, double p, double lam):
    cdef Py_ssize_t k, n = ii.shape[0]
    cdef double acc = 0.0, h
    for k in range(n):
        h = lam * fabs(u[ii[k]] - u[jj[k]]) * inv_d[k]
        acc += wp[k] * coeff * pow(h, p)
    return acc


def pairing_sum_power(double[::1] u, double[::1] v, int[::1] ii, int[::1] jj,
                      double[::1] inv_d, double[::1] wp,
                      double coeff, double p, double lam):
    cdef Py_ssize_t k, n = ii.shape[0]
    cdef double acc = 0.0, du, h, m
    for k in range(n):
        du = u[ii[k]] - u[jj[k]]
        h = lam * du * inv_d[k]
        if h > 0:
            m = coeff * p * pow(h, p - 1.0)
        elif h < 0:
            m = -coeff * p * pow(-h, p - 1.0)
        else:
            m = 0.0
        acc += wp[k] * m * (v[ii[k]] - v[jj[k]]) * inv_d[k]
    return acc


def gradient_add_power(double[::1] u, int[::1] ii, int[::1] jj,
                       double[::1] inv_d, double[::1] wp,
                       double coeff, double p, double lam,
                       double[::1] out):
    cdef Py_ssize_t k, n = ii.shape[0]
    cdef double du, h, m, g
    for k in range(n):
        du = u[ii[k]] - u[jj[k]]
        h = lam * du * inv_d[k]
        if h > 0:
            m = coeff * p * pow(h, p - 1.0)
        elif h < 0:
            m = -coeff * p * pow(-h, p - 1.0)
        else:
            m = 0.0
        g = wp[k] * m * lam * inv_d[k]
        out[ii[k]] += g
        out[jj[k]] -= g
    return np.asarray(out)
