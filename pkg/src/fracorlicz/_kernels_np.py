"""NumPy reference implementations of the pair-loop kernels.

Each function works on flattened unordered pair arrays (ii < jj) with the
symmetry factor already folded into the pair weight.  The compiled module
`_kernels` implements the same signatures for the power family; this module
is the always-available fallback and the generic (arbitrary Young function)
path.
"""

import numpy as np

name = "numpy"


def modular_sum_power(u, ii, jj, inv_d, wp, coeff, p, lam):
    h = lam * np.abs(u[ii] - u[jj]) * inv_d
    return float(np.sum(wp * coeff * np.power(h, p)))


def pairing_sum_power(u, v, ii, jj, inv_d, wp, coeff, p, lam):
    du = u[ii] - u[jj]
    h = lam * du * inv_d
    mval = coeff * p * np.power(np.abs(h), p - 1.0) * np.sign(h)
    return float(np.sum(wp * mval * (v[ii] - v[jj]) * inv_d))


def gradient_add_power(u, ii, jj, inv_d, wp, coeff, p, lam, out):
    du = u[ii] - u[jj]
    h = lam * du * inv_d
    g = wp * coeff * p * np.power(np.abs(h), p - 1.0) * np.sign(h) * lam * inv_d
    out += np.bincount(ii, weights=g, minlength=out.size)
    out -= np.bincount(jj, weights=g, minlength=out.size)
    return out


def modular_sum_generic(u, ii, jj, inv_d, wp, mfun, lam):
    h = lam * np.abs(u[ii] - u[jj]) * inv_d
    return float(np.sum(wp * mfun.evaluate(h)))


def pairing_sum_generic(u, v, ii, jj, inv_d, wp, mfun, lam):
    h = lam * (u[ii] - u[jj]) * inv_d
    return float(np.sum(wp * mfun.density(h) * (v[ii] - v[jj]) * inv_d))


def gradient_add_generic(u, ii, jj, inv_d, wp, mfun, lam, out):
    h = lam * (u[ii] - u[jj]) * inv_d
    g = wp * mfun.density(h) * lam * inv_d
    out += np.bincount(ii, weights=g, minlength=out.size)
    out -= np.bincount(jj, weights=g, minlength=out.size)
    return out
