"""Orlicz modulars and norms of grid functions.

The Luxemburg norm is the gauge of the modular unit ball, computed by a
log-space bisection that returns the feasible end of the final bracket: the
modular of u over its norm is guaranteed <= 1 and is within tolerance of 1.
The Orlicz norm itself is evaluated through its infimum representation
inf_k (1 + modular(k u))/k, which avoids optimising over a dual ball and is
classically sandwiched between one and two Luxemburg norms.
"""

from __future__ import annotations

import math

import numpy as np

from .domain import QuadratureRule
from .errors import RangeError

_GAUGE_TOL = 1e-12


def modular(u, mfun, lam=1.0, rule=None):
    """Integral of M(lam * u) over the box."""
    rule = rule or QuadratureRule()
    w = u.domain.weights(scheme=rule.scheme)
    return float(np.sum(w * mfun.evaluate(lam * np.abs(u.flat()))))


def modular_gauge(phi, c_hint, tol=_GAUGE_TOL):
    """Largest c > 0 with phi(c) <= 1, for a non-decreasing phi, phi(0)=0.

    phi may raise RangeError for arguments beyond the trusted range of the
    underlying Young function; that is treated as "above 1".
    """

    def safe(c):
        try:
            return phi(c)
        except RangeError:
            return math.inf

    c = max(c_hint, 1e-290)
    guard = 0
    while safe(c) > 1.0:
        c *= 0.5
        guard += 1
        if c < 1e-290 or guard > 2000:
            return 0.0
    lo = c
    hi = c * 2.0
    guard = 0
    while safe(hi) <= 1.0:
        lo = hi
        hi *= 2.0
        guard += 1
        if guard > 2000:
            return lo  # modular stays below 1: gauge is unbounded in range
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if safe(mid) <= 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * lo:
            break
    return lo


def luxemburg_norm(u, mfun, rule=None):
    """inf { lam > 0 : modular(u / lam) <= 1 }."""
    rule = rule or QuadratureRule()
    peak = u.sup_norm()
    if peak == 0.0:
        return 0.0
    w = u.domain.weights(scheme=rule.scheme)
    absu = np.abs(u.flat())
    vol = float(np.sum(w))

    def phi(c):
        return float(np.sum(w * mfun.evaluate(c * absu)))

    hint = mfun.inverse(min(1.0 / vol, 0.9 * mfun.evaluate(mfun.domain_cap))) / peak
    c_star = modular_gauge(phi, hint)
    if c_star == 0.0:
        raise RangeError("luxemburg_norm: could not bracket the modular gauge")
    return 1.0 / c_star


def orlicz_norm_amemiya(u, mfun, rule=None):
    """inf over k > 0 of (1 + modular(k u)) / k."""
    rule = rule or QuadratureRule()
    peak = u.sup_norm()
    if peak == 0.0:
        return 0.0
    w = u.domain.weights(scheme=rule.scheme)
    absu = np.abs(u.flat())

    def phi(c):
        try:
            return float(np.sum(w * mfun.evaluate(c * absu)))
        except RangeError:
            return math.inf

    def objective(k):
        return (1.0 + phi(k)) / k

    vol = float(np.sum(w))
    k0 = modular_gauge(phi, mfun.inverse(min(1.0 / vol, 0.9 * mfun.evaluate(mfun.domain_cap))) / peak)
    if k0 == 0.0:
        raise RangeError("orlicz_norm: could not bracket the modular gauge")
    return _log_golden_min(objective, k0 / 256.0, k0 * 256.0)


def _log_golden_min(f, k_lo, k_hi, iters=160):
    """Golden-section minimum of a unimodal f over [k_lo, k_hi] in log scale."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(k_lo), math.log(k_hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(math.exp(d))
        if b - a <= 1e-13:
            break
    return min(fc, fd)


def holder_gap(u, v, mfun, rule=None):
    """2 ||u||_M ||v||_Mbar  -  integral of |u v|; non-negative by the
    Orlicz-Hoelder inequality (up to gauge tolerance)."""
    rule = rule or QuadratureRule()
    w = u.domain.weights(scheme=rule.scheme)
    cross = float(np.sum(w * np.abs(u.flat() * v.flat())))
    nu = luxemburg_norm(u, mfun, rule)
    nv = luxemburg_norm(v, mfun.conjugate(), rule)
    return 2.0 * nu * nv - cross
