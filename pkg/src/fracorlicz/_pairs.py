"""Pair workspace: the precomputed geometry of double integrals.

For a fixed (domain, extension, order s, Young function M, quadrature rule)
the denominators |x-y|^s M^{-1}(|x-y|^N) of the difference quotients and the
tensor quadrature weights depend only on the node pair, not on the function.
The workspace computes them once, groups the pairs into the distance rings
of the band-exclusion ladder, and exposes the three hot operations (modular
sum, weak pairing, modular gradient) with backend dispatch: compiled loops
for the power family when the extension is available, NumPy otherwise.

Pairs are stored unordered (i < j) with the factor 2 folded into the weight;
every kernel here is symmetric or antisymmetric in the pair, so nothing is
lost and memory halves.
"""

from __future__ import annotations

import threading

import numpy as np

from . import _backend, _kernels_np
from .domain import band_widths
from .errors import RangeError


class PairWorkspace:
    """Precomputed pair data bound to one (domain, extended, s, M, rule)."""

    def __init__(self, dom, extended, s, mfun, rule):
        if not 0.0 < s < 1.0:
            raise RangeError("fractional order must satisfy 0 < s < 1, got s=%g" % s)
        self.dom = dom
        self.extended = bool(extended)
        self.s = float(s)
        self.mfun = mfun
        self.rule = rule
        coords = dom.node_coords(extended=extended)
        w = dom.weights(extended=extended, scheme=rule.scheme)
        self.node_weights = w
        self.n_nodes = coords.shape[0]

        ii, jj = np.triu_indices(self.n_nodes, k=1)
        diff = coords[ii] - coords[jj]
        r = np.sqrt(np.sum(diff * diff, axis=-1)) if dom.ndim > 1 else np.abs(diff[:, 0])

        widths = band_widths(dom, rule)
        edges = list(widths) + ([0.0] if rule.diagonal == "pv_pair" else [])
        self.band_widths = tuple(edges)

        n_dim = dom.ndim
        inv_d_all = 1.0 / (np.power(r, self.s) * mfun.inverse(np.power(r, n_dim)))
        wp_all = 2.0 * w[ii] * w[jj]

        # ring membership tolerates linspace rounding at the edges so the
        # partition matches the direct double sums elsewhere bit for bit
        self.rings = []
        upper = np.inf
        for edge in edges:
            sel = (r >= edge - 1e-13) & (r < upper - 1e-13)
            self.rings.append({
                "ii": np.ascontiguousarray(ii[sel], dtype=np.intc),
                "jj": np.ascontiguousarray(jj[sel], dtype=np.intc),
                "inv_d": np.ascontiguousarray(inv_d_all[sel]),
                "wp": np.ascontiguousarray(wp_all[sel]),
            })
            upper = edge
        self._max_quotient_cache = {}

    # -- dispatch ---------------------------------------------------------

    def _use_compiled(self):
        return _backend.compiled is not None and self.mfun.family == "power"

    def _ring_modular(self, ring, u, lam, backend=None):
        if ring["ii"].size == 0:
            return 0.0
        if backend is None:
            backend = _backend.compiled if self._use_compiled() else None
        if backend is not None and self.mfun.family == "power":
            p, coeff = self.mfun.params
            return backend.modular_sum_power(u, ring["ii"], ring["jj"],
                                             ring["inv_d"], ring["wp"], coeff, p, lam)
        return _kernels_np.modular_sum_generic(u, ring["ii"], ring["jj"],
                                               ring["inv_d"], ring["wp"],
                                               self.mfun, lam)

    # -- public operations ------------------------------------------------

    def modular_rings(self, u, lam=1.0, backend=None):
        """Per-ring contributions, outermost first."""
        u = np.ascontiguousarray(u, dtype=float)
        return np.array([self._ring_modular(ring, u, lam, backend) for ring in self.rings])

    def modular(self, u, lam=1.0, backend=None):
        """Banded modular: the sum over every stored ring."""
        return float(np.sum(self.modular_rings(u, lam, backend)))

    def modular_ladder(self, u, lam=1.0):
        """Cumulative ring sums, one per band width (outermost width first)."""
        return tuple(np.cumsum(self.modular_rings(u, lam)))

    def pairing(self, u, v, lam=1.0, backend=None):
        """Weak-form pairing sum_{pairs} w  m(h_u) h_v with the density's odd
        extension carrying the sign."""
        u = np.ascontiguousarray(u, dtype=float)
        v = np.ascontiguousarray(v, dtype=float)
        total = 0.0
        use_comp = backend is not None or self._use_compiled()
        eng = backend or (_backend.compiled if self._use_compiled() else None)
        for ring in self.rings:
            if ring["ii"].size == 0:
                continue
            if eng is not None and self.mfun.family == "power":
                p, coeff = self.mfun.params
                total += eng.pairing_sum_power(u, v, ring["ii"], ring["jj"],
                                               ring["inv_d"], ring["wp"], coeff, p, lam)
            else:
                total += _kernels_np.pairing_sum_generic(u, v, ring["ii"], ring["jj"],
                                                         ring["inv_d"], ring["wp"],
                                                         self.mfun, lam)
        return total

    def gradient(self, u, lam=1.0, backend=None):
        """Exact gradient of the banded modular with respect to nodal values."""
        u = np.ascontiguousarray(u, dtype=float)
        out = np.zeros(self.n_nodes)
        eng = backend or (_backend.compiled if self._use_compiled() else None)
        for ring in self.rings:
            if ring["ii"].size == 0:
                continue
            if eng is not None and self.mfun.family == "power":
                p, coeff = self.mfun.params
                eng.gradient_add_power(u, ring["ii"], ring["jj"], ring["inv_d"],
                                       ring["wp"], coeff, p, lam, out)
            else:
                _kernels_np.gradient_add_generic(u, ring["ii"], ring["jj"], ring["inv_d"],
                                                 ring["wp"], self.mfun, lam, out)
        return out

    def max_quotient(self, u):
        """max over stored pairs of |u_i - u_j| * inv_d (bracketing aid)."""
        u = np.ascontiguousarray(u, dtype=float)
        best = 0.0
        for ring in self.rings:
            if ring["ii"].size == 0:
                continue
            q = np.abs(u[ring["ii"]] - u[ring["jj"]]) * ring["inv_d"]
            best = max(best, float(np.max(q)))
        return best

    def total_weight(self):
        return float(sum(np.sum(ring["wp"]) for ring in self.rings))


_CACHE = {}
_CACHE_LIMIT = 24
_CACHE_LOCK = threading.Lock()


def workspace_for(dom, extended, s, mfun, rule):
    """Cached workspace lookup; Young functions are keyed by identity."""
    key = (dom, bool(extended), float(s), id(mfun), rule)
    with _CACHE_LOCK:
        ws = _CACHE.get(key)
    if ws is None:
        ws = PairWorkspace(dom, extended, s, mfun, rule)
        with _CACHE_LOCK:
            if len(_CACHE) >= _CACHE_LIMIT:
                _CACHE.pop(next(iter(_CACHE)))
            _CACHE[key] = ws
    return ws
