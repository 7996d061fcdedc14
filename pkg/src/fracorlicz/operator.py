"""Nonlocal operator built from the Young-function density.

Pointwise form at a node x:

    L u(x) = 2 sum over y != x of  w(y) m( (u(x)-u(y)) / D(x,y) ) / D(x,y),
    D(x,y) = |x-y|^s M^{-1}(|x-y|^N),

summed over the halo-extended grid for zero-extended u.  The near-diagonal
band is handled by the same ring ladder as the double integrals: values are
accumulated ring by ring and extrapolated per node.  The density's odd
extension supplies the sign factor, with m(0) = 0 covering coincident
values.

The weak pairing sums m(h(u)) h(v) against the pair weights and is, by
construction, the exact directional derivative of the pair modular at the
banded level; the proportionality constant against the classical fractional
p-Laplacian is p for M(t) = t^p and is measured, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._pairs import workspace_for
from .domain import GridFunction, band_widths
from .errors import PreconditionError
from .fracspace import pair_workspace

__all__ = [
    "apply_pv", "apply_pv_field", "ApplyFieldReport", "weak_pairing",
    "p_laplacian_reference", "p_laplacian_field", "pair_quotient",
    "halo_sensitivity", "HaloReport",
]


def _require_zero_extension(*funcs):
    for u in funcs:
        if u.extension != "zero":
            raise PreconditionError(
                "operator inputs must use the zero extension (got %r)" % u.extension)


def _aitken_tail(ladder):
    """Aitken step on the last three rungs of each per-node ladder.

    ladder has shape (depth, nnodes).  Returns (values, converged mask);
    nodes where the differences grow keep the finest rung and are flagged.
    """
    x0, x1, x2 = ladder[-3], ladder[-2], ladder[-1]
    d1 = x1 - x0
    d2 = x2 - x1
    denom = d2 - d1
    scale = np.maximum(np.abs(x2), 1.0)
    ok = np.abs(denom) > 1e-14 * scale
    out = np.where(ok, x2 - np.divide(d2 * d2, denom, out=np.zeros_like(d2), where=ok), x2)
    converged = (np.abs(d2) < np.abs(d1)) | (np.abs(d2) <= 1e-13 * scale)
    return out, converged


def _field_ladder(uf, rings, w, term):
    """Per-node cumulative ring sums of 2 w(y) term(du, pair) for each ring."""
    n = len(uf)
    rows = []
    total = np.zeros(n)
    for ring in rings:
        ii, jj = ring["ii"], ring["jj"]
        t = term(uf, ring)
        total = total + 2.0 * (np.bincount(ii, weights=w[jj] * t, minlength=n)
                               - np.bincount(jj, weights=w[ii] * t, minlength=n))
        rows.append(total.copy())
    return np.array(rows)


@dataclass(frozen=True)
class ApplyFieldReport:
    field: GridFunction
    finest: GridFunction
    converged: np.ndarray
    band_widths: tuple


def apply_pv_field(u, params):
    """Operator values at every node of the box, ladder-extrapolated.

    Returns an ApplyFieldReport whose ``field`` holds the per-node Aitken
    value (falling back to the finest banded sum where the ladder diverges,
    flagged in ``converged``) and whose ``finest`` holds the banded sums.
    """
    _require_zero_extension(u)
    ws = pair_workspace(u, params)
    uf = u.flat(extended=ws.extended)
    w = ws.node_weights
    mfun = params.mfun

    def term(uv, ring):
        return mfun.density((uv[ring["ii"]] - uv[ring["jj"]]) * ring["inv_d"]) * ring["inv_d"]

    ladder = _field_ladder(uf, ws.rings, w, term)
    if ladder.shape[0] >= 3:
        vals, conv = _aitken_tail(ladder)
    else:
        vals, conv = ladder[-1], np.zeros(ladder.shape[1], bool)
    dom = u.domain
    shape = dom.extended_shape if ws.extended else dom.shape
    cut = dom.core_slices() if ws.extended else (slice(None),) * dom.ndim

    def core(a):
        return np.reshape(a, shape)[cut]

    return ApplyFieldReport(
        field=GridFunction(dom, core(vals), extension="undefined"),
        finest=GridFunction(dom, core(ladder[-1]), extension="undefined"),
        converged=core(conv),
        band_widths=ws.band_widths,
    )


def apply_pv(u, node, params):
    """Operator value at one interior node, via an independent single-node sum.

    ``node`` indexes the box grid (an int in 1D or an index tuple).  The
    ring partition and weights match apply_pv_field, so the two paths agree
    to rounding; this one recomputes distances directly.
    """
    _require_zero_extension(u)
    dom = u.domain
    idx = (int(node),) if np.isscalar(node) else tuple(int(k) for k in node)
    if len(idx) != dom.ndim:
        raise PreconditionError("node index must have %d components" % dom.ndim)
    for k, n in zip(idx, dom.shape):
        if not 0 <= k < n:
            raise PreconditionError("node index %r outside the box grid" % (idx,))

    ext_idx = tuple(k + h for k, h in zip(idx, dom.halo_nodes))
    coords = dom.node_coords(extended=True)
    w = dom.weights(extended=True, scheme=params.rule.scheme)
    uf = u.flat(extended=True)
    flat = int(np.ravel_multi_index(ext_idx, dom.extended_shape))

    diff = coords - coords[flat]
    r = np.sqrt(np.sum(diff * diff, axis=1))
    du = uf[flat] - uf
    mfun = params.mfun
    widths = list(band_widths(dom, params.rule))
    if params.rule.diagonal == "pv_pair":
        widths = widths + [0.0]
    mask_far = r >= widths[0] - 1e-13
    ladder = []
    total = 0.0
    inner = mask_far
    for k, cut in enumerate(widths):
        if k > 0:
            inner = (r >= cut - 1e-13) & (r < widths[k - 1] - 1e-13)
        sel = inner & (r > 0.0)
        if np.any(sel):
            inv_d = 1.0 / (r[sel] ** params.s * mfun.inverse(r[sel] ** dom.ndim))
            total += 2.0 * float(np.sum(w[sel] * mfun.density(du[sel] * inv_d) * inv_d))
        ladder.append(total)
    arr = np.array(ladder)[:, None]
    if len(ladder) >= 3:
        vals, _ = _aitken_tail(arr)
        return float(vals[0])
    return float(arr[-1, 0])


def weak_pairing(u, v, params, lam=1.0):
    """sum over pairs of w m(lam h(u)) h(v): the weak form of the operator.

    Equals the directional derivative (d/d eps) Phi(lam(u + eps v)) / lam at
    eps = 0 exactly at the banded level, since both are built from the same
    ring sums.
    """
    _require_zero_extension(u, v)
    if u.domain != v.domain:
        raise PreconditionError("weak_pairing requires matching domains")
    ws = pair_workspace(u, params)
    return ws.pairing(u.flat(extended=ws.extended), v.flat(extended=ws.extended), lam)


def p_laplacian_field(u, s, p, rule=None):
    """Classical fractional p-Laplacian on the grid, explicit power kernel.

    Independent of the Young-function machinery: the kernel
    |du|^{p-2} du / r^{N+sp} is coded directly against the same ring
    partition, so ratios against apply_pv_field isolate the density factor.
    """
    from .domain import QuadratureRule

    _require_zero_extension(u)
    rule = rule if rule is not None else QuadratureRule()
    dom = u.domain
    coords = dom.node_coords(extended=True)
    w = dom.weights(extended=True, scheme=rule.scheme)
    uf = u.flat(extended=True)
    widths = list(band_widths(dom, rule))
    if rule.diagonal == "pv_pair":
        widths = widths + [0.0]

    n = len(uf)
    ii, jj = np.triu_indices(n, k=1)
    diff = coords[ii] - coords[jj]
    r = np.sqrt(np.sum(diff * diff, axis=1))
    keep = r >= widths[-1] - 1e-13
    ii, jj, r = ii[keep], jj[keep], r[keep]
    du = uf[ii] - uf[jj]
    t = np.abs(du) ** (p - 1.0) * np.sign(du) / r ** (dom.ndim + s * p)
    ladder = []
    total = np.zeros(n)
    edges = widths
    for k, cut in enumerate(edges):
        lo = cut - 1e-13
        hi = np.inf if k == 0 else edges[k - 1] - 1e-13
        sel = (r >= lo) & (r < hi)
        total = total + 2.0 * (np.bincount(ii[sel], weights=w[jj[sel]] * t[sel], minlength=n)
                               - np.bincount(jj[sel], weights=w[ii[sel]] * t[sel], minlength=n))
        ladder.append(total.copy())
    arr = np.array(ladder)
    if arr.shape[0] >= 3:
        vals, _ = _aitken_tail(arr)
    else:
        vals = arr[-1]
    core = np.reshape(vals, dom.extended_shape)[dom.core_slices()]
    return GridFunction(dom, core, extension="undefined")


def p_laplacian_reference(u, node, s, p, rule=None):
    """Single-node value of the classical fractional p-Laplacian."""
    field = p_laplacian_field(u, s, p, rule)
    idx = (int(node),) if np.isscalar(node) else tuple(int(k) for k in node)
    return float(field.values[idx])


def pair_quotient(u, params, i, j):
    """(h, k) for one node pair: difference quotient and its sign factor.

    Indices address the grid matching u's extension convention (extended
    flat indices for zero-extended u).  h is antisymmetric under swapping
    i and j; k is 0 exactly when the values coincide.
    """
    ws = pair_workspace(u, params)
    dom = u.domain
    coords = dom.node_coords(extended=ws.extended)
    uf = u.flat(extended=ws.extended)
    r = float(np.sqrt(np.sum((coords[int(i)] - coords[int(j)]) ** 2)))
    if r == 0.0:
        raise PreconditionError("pair_quotient needs distinct nodes")
    du = float(uf[int(i)] - uf[int(j)])
    h = du / (r ** params.s * float(params.mfun.inverse(r ** dom.ndim)))
    k = 0.0 if du == 0.0 else float(np.sign(du))
    return h, k


@dataclass(frozen=True)
class HaloReport:
    factors: tuple
    modulars: tuple
    rel_changes: tuple


def halo_sensitivity(u, params, factors=(1.0, 2.0)):
    """Pair modular of the zero-extended u under enlarged halos.

    The exterior tail these halos truncate decays only algebraically, so
    this is a diagnostic table, not a convergence guarantee: rel_changes[k]
    is the relative change from factors[k] to factors[k+1].
    """
    from .fracspace import frac_modular

    _require_zero_extension(u)
    base = u.domain
    vals = []
    for fac in factors:
        dom = base.scaled(fac)
        uu = GridFunction(dom, u.values, extension="zero")
        vals.append(frac_modular(uu, params))
    rel = tuple(abs(vals[k + 1] - vals[k]) / max(abs(vals[k]), 1e-300)
                for k in range(len(vals) - 1))
    return HaloReport(tuple(factors), tuple(vals), rel)
