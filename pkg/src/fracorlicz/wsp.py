"""Classical fractional Sobolev quantities, computed directly.

This module deliberately does not reuse the pair workspace: the seminorm
here is a straight double sum over the kernel |u(x)-u(y)|^p / |x-y|^{N+sp},
written against the same banded pair convention, so it can serve as an
independent cross-check for the power-family reduction of the Orlicz
seminorm.
"""

from __future__ import annotations

import numpy as np

from .domain import QuadratureRule, band_widths
from .errors import RangeError

__all__ = ["lp_norm", "wsp_seminorm", "wsp_norm"]


def lp_norm(u, p, rule=None):
    """( sum w |u|^p )^(1/p) over the box."""
    if p < 1.0:
        raise RangeError("lp_norm requires p >= 1, got p=%g" % p)
    rule = rule if rule is not None else QuadratureRule()
    w = u.domain.weights(extended=False, scheme=rule.scheme)
    return float(np.sum(w * np.abs(u.values.ravel()) ** p) ** (1.0 / p))


def wsp_seminorm(u, s, p, rule=None):
    """Banded double sum for [u]_{s,p}, raised to 1/p.

    Zero-extended functions are summed over the halo-extended box, plain
    ones over the box itself; pairs closer than the finest ladder width are
    dropped, matching the convention used by the Orlicz-side seminorm.
    """
    if not 0.0 < s < 1.0:
        raise RangeError("wsp_seminorm requires 0 < s < 1, got s=%g" % s)
    if p < 1.0:
        raise RangeError("wsp_seminorm requires p >= 1, got p=%g" % p)
    rule = rule if rule is not None else QuadratureRule()
    extended = u.extension == "zero"
    dom = u.domain
    coords = dom.node_coords(extended=extended)
    w = dom.weights(extended=extended, scheme=rule.scheme)
    uf = u.flat(extended=extended)
    cut = band_widths(dom, rule)[-1]
    if rule.diagonal == "pv_pair":
        cut = 0.0

    ii, jj = np.triu_indices(len(uf), k=1)
    diff = coords[ii] - coords[jj]
    r = np.sqrt(np.sum(diff * diff, axis=1))
    keep = r >= cut - 1e-13
    ii, jj, r = ii[keep], jj[keep], r[keep]
    du = np.abs(uf[ii] - uf[jj])
    total = 2.0 * np.sum(w[ii] * w[jj] * du ** p / r ** (dom.ndim + s * p))
    return float(total ** (1.0 / p))


def wsp_norm(u, s, p, rule=None):
    """L^p norm over the box plus the banded seminorm."""
    return lp_norm(u, p, rule) + wsp_seminorm(u, s, p, rule)
