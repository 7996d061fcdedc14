"""Boxes, grid functions and quadrature.

A :class:`Domain` is an axis-aligned box in one or two dimensions carrying a
uniform tensor grid and a halo: a band of exterior nodes of prescribed width
used whenever an integral has to reach outside the box (nonlocal operators,
zero-extension seminorms).  A :class:`GridFunction` stores nodal values on
the core grid together with its extension convention: ``"zero"`` (the
function vanishes outside the box, and on the boundary band of the grid) or
``"undefined"`` (no exterior values; only integrals over the box itself are
meaningful).

Double integrals over node pairs exclude a diagonal band and report a ladder
of estimates at shrinking band widths; the ladder is extrapolated with
Aitken's delta-squared rule, which reproduces the one-term power model of
the missing band mass without knowing its exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ConfigError, DegenerateInputError, ResolutionError

_FMT = "%.17g"


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature policy.

    scheme: per-axis rule for single integrals ("trapezoid" or "simpson").
    diagonal: how double integrals treat the neighbourhood of x = y:
        "exclude_band" drops pairs with |x-y| < w for a ladder of widths
        w = band_multiple*h*2^k, "pv_pair" keeps every off-diagonal pair
        (principal-value style; the ladder is then purely diagnostic).
    band_multiple: innermost band width in units of the grid spacing.
    ladder_depth: number of ladder rungs (>= 2 so convergence is observable).
    """

    scheme: str = "trapezoid"
    diagonal: str = "exclude_band"
    band_multiple: int = 1
    ladder_depth: int = 3

    def __post_init__(self):
        if self.scheme not in ("trapezoid", "simpson"):
            raise ConfigError("rule.scheme: unknown scheme %r" % (self.scheme,))
        if self.diagonal not in ("exclude_band", "pv_pair"):
            raise ConfigError("rule.diagonal: unknown policy %r" % (self.diagonal,))
        if int(self.band_multiple) != self.band_multiple or self.band_multiple < 1:
            raise ConfigError("rule.band_multiple: need a positive integer")
        if int(self.ladder_depth) != self.ladder_depth or self.ladder_depth < 2:
            raise ConfigError("rule.ladder_depth: need an integer >= 2")

    def describe(self):
        return {"scheme": self.scheme, "diagonal": self.diagonal,
                "band_multiple": int(self.band_multiple),
                "ladder_depth": int(self.ladder_depth)}


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box with a uniform grid and an exterior halo.

    bounds: ((lo, hi), ...) per axis; shape: node counts per axis (>= 8);
    halo: width of the exterior band in length units (defaults to the box
    diameter, which is what exterior-inclusive integrals assume).
    """

    bounds: tuple
    shape: tuple
    halo: float = None

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        shape = tuple(int(n) for n in self.shape)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "shape", shape)
        if len(bounds) not in (1, 2):
            raise ConfigError("domain: only 1-d and 2-d boxes are supported")
        if len(shape) != len(bounds):
            raise ConfigError("domain: bounds and shape disagree on dimension")
        for lo, hi in bounds:
            if not hi > lo:
                raise ConfigError("domain: empty axis [%g, %g]" % (lo, hi))
        for n in shape:
            if n < 8:
                raise ConfigError("domain: need at least 8 nodes per axis, got %d" % n)
        if self.halo is None:
            object.__setattr__(self, "halo", self.diameter)
        else:
            object.__setattr__(self, "halo", float(self.halo))
            if self.halo < 0:
                raise ConfigError("domain: halo must be >= 0")

    # -- geometry ---------------------------------------------------------

    @property
    def ndim(self):
        return len(self.bounds)

    @property
    def spacing(self):
        return tuple((hi - lo) / (n - 1) for (lo, hi), n in zip(self.bounds, self.shape))

    @property
    def diameter(self):
        return float(np.hypot.reduce([hi - lo for lo, hi in self.bounds]))

    @property
    def volume(self):
        out = 1.0
        for lo, hi in self.bounds:
            out *= hi - lo
        return out

    @property
    def halo_nodes(self):
        """Exterior nodes per side and axis needed to cover the halo width."""
        return tuple(int(np.ceil(self.halo / h - 1e-9)) for h in self.spacing)

    @property
    def extended_shape(self):
        return tuple(n + 2 * m for n, m in zip(self.shape, self.halo_nodes))

    def axis_coords(self, axis, extended=False):
        lo, hi = self.bounds[axis]
        h = self.spacing[axis]
        n = self.shape[axis]
        if not extended:
            return lo + h * np.arange(n)
        m = self.halo_nodes[axis]
        return lo + h * (np.arange(n + 2 * m) - m)

    def node_coords(self, extended=False):
        """All grid nodes as an (n_nodes, ndim) array in C order."""
        axes = [self.axis_coords(a, extended) for a in range(self.ndim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def core_slices(self):
        return tuple(slice(m, m + n) for n, m in zip(self.shape, self.halo_nodes))

    def _axis_weights(self, n, h, scheme):
        if scheme == "trapezoid":
            w = np.full(n, h)
            w[0] = w[-1] = 0.5 * h
            return w
        if n % 2 == 0:
            raise ConfigError("simpson rule needs an odd node count, got %d" % n)
        w = np.empty(n)
        w[0::2] = 2.0 * h / 3.0
        w[1::2] = 4.0 * h / 3.0
        w[0] = w[-1] = h / 3.0
        return w

    def weights(self, extended=False, scheme="trapezoid"):
        """Flattened tensor-product quadrature weights."""
        parts = []
        for a in range(self.ndim):
            n = self.extended_shape[a] if extended else self.shape[a]
            parts.append(self._axis_weights(n, self.spacing[a], scheme))
        if self.ndim == 1:
            return parts[0]
        return np.multiply.outer(parts[0], parts[1]).ravel()

    def scaled(self, factor):
        """Same box and resolution with the halo scaled by ``factor``."""
        return Domain(self.bounds, self.shape, halo=self.halo * factor)

    def refined(self, factor=2):
        """Same box with (n-1)*factor+1 nodes per axis."""
        shape = tuple((n - 1) * factor + 1 for n in self.shape)
        return Domain(self.bounds, shape, halo=self.halo)

    def describe(self):
        return {"bounds": [list(b) for b in self.bounds],
                "shape": list(self.shape), "halo": self.halo}


class GridFunction:
    """Nodal values on a domain's core grid plus an extension convention."""

    def __init__(self, domain, values, extension="undefined"):
        values = np.asarray(values, dtype=float)
        if values.shape != domain.shape:
            raise DegenerateInputError(
                "grid function shape %s does not match domain shape %s"
                % (values.shape, domain.shape))
        if not np.all(np.isfinite(values)):
            raise DegenerateInputError("grid function contains non-finite values")
        if extension not in ("zero", "undefined"):
            raise ConfigError("extension must be 'zero' or 'undefined'")
        if extension == "zero":
            band = _boundary_band_values(values)
            if np.any(band != 0.0):
                raise DegenerateInputError(
                    "zero-extended grid function must vanish on the boundary band "
                    "(max |value| there is %g)" % float(np.max(np.abs(band))))
        self.domain = domain
        self.values = values
        self.extension = extension

    # -- basic algebra ----------------------------------------------------

    def _merge_ext(self, other):
        return "zero" if self.extension == other.extension == "zero" else "undefined"

    def __add__(self, other):
        self._check_compatible(other)
        return GridFunction(self.domain, self.values + other.values, self._merge_ext(other))

    def __sub__(self, other):
        self._check_compatible(other)
        return GridFunction(self.domain, self.values - other.values, self._merge_ext(other))

    def __mul__(self, c):
        return GridFunction(self.domain, self.values * float(c), self.extension)

    __rmul__ = __mul__

    def _check_compatible(self, other):
        if other.domain != self.domain:
            raise DegenerateInputError("grid functions live on different domains")

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def flat(self, extended=False):
        if not extended:
            return self.values.ravel()
        return self.extended_values().ravel()

    def extended_values(self):
        if self.extension != "zero":
            raise DegenerateInputError(
                "extension to the halo requires a zero-extended function")
        pads = [(m, m) for m in self.domain.halo_nodes]
        return np.pad(self.values, pads)

    # -- serialisation ----------------------------------------------------

    def to_csv(self, path):
        coords = self.domain.node_coords()
        cols = ["x%d" % a for a in range(self.domain.ndim)] + ["value"]
        flat = self.values.ravel()
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for row, v in zip(coords, flat):
                fh.write(",".join(_FMT % c for c in row) + "," + _FMT % v + "\n")

    @classmethod
    def from_csv(cls, path, domain, extension="undefined"):
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        if data.ndim == 1:
            data = data[None, :]
        if data.shape[1] != domain.ndim + 1:
            raise ConfigError("%s: expected %d columns" % (path, domain.ndim + 1))
        coords = domain.node_coords()
        if data.shape[0] != coords.shape[0]:
            raise ConfigError("%s: %d rows but the grid has %d nodes"
                              % (path, data.shape[0], coords.shape[0]))
        h = min(domain.spacing)
        if np.max(np.abs(data[:, :-1] - coords)) > 1e-8 * h:
            raise ConfigError("%s: node coordinates do not match the domain grid" % path)
        return cls(domain, data[:, -1].reshape(domain.shape), extension)

    def to_json(self, path=None):
        doc = {"domain": self.domain.describe(), "extension": self.extension,
               "values": self.values.ravel().tolist()}
        if path is None:
            return doc
        with open(path, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            with open(doc) as fh:
                doc = json.load(fh)
        d = doc["domain"]
        dom = Domain(tuple(tuple(b) for b in d["bounds"]), tuple(d["shape"]), d["halo"])
        vals = np.asarray(doc["values"], dtype=float).reshape(dom.shape)
        return cls(dom, vals, doc.get("extension", "undefined"))


def _boundary_band_values(values):
    mask = np.zeros(values.shape, dtype=bool)
    for a in range(values.ndim):
        sl = [slice(None)] * values.ndim
        sl[a] = 0
        mask[tuple(sl)] = True
        sl[a] = -1
        mask[tuple(sl)] = True
    return values[mask]


# ---------------------------------------------------------------------------
# single integrals
# ---------------------------------------------------------------------------


def integrate(u, rule=None):
    """Quadrature of a grid function over its box."""
    rule = rule or QuadratureRule()
    w = u.domain.weights(scheme=rule.scheme)
    return float(np.sum(w * u.flat()))


# ---------------------------------------------------------------------------
# pair machinery and double integrals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LadderResult:
    """Band-exclusion ladder for a double integral.

    ``estimates[k]`` integrates over pairs with |x-y| >= band_widths[k];
    ``value`` is the Aitken extrapolation of the ladder (the last rung when
    extrapolation is not applicable) and ``converged`` records whether the
    rung differences were decaying.
    """

    estimates: tuple
    band_widths: tuple
    value: float
    converged: bool


def ladder_extrapolate(estimates):
    """Aitken delta-squared limit of a ladder (value, converged)."""
    e = list(estimates)
    if len(e) == 1:
        return e[0], True
    d_last = e[-1] - e[-2]
    if len(e) == 2:
        return e[-1], abs(d_last) <= 1e-12 * max(1.0, abs(e[-1]))
    d_prev = e[-2] - e[-3]
    if d_last == 0.0:
        return e[-1], True
    if abs(d_last) >= abs(d_prev):
        return e[-1], False
    q = d_last / d_prev
    return e[-1] + d_last * q / (1.0 - q), True


def band_widths(dom, rule):
    """Ladder band widths, outermost first: band_multiple*h*2^(depth-1-k)."""
    h = min(dom.spacing)
    d = int(rule.ladder_depth)
    return tuple(rule.band_multiple * h * 2.0 ** (d - 1 - k) for k in range(d))


def pair_rings(coords, widths):
    """Group ordered node pairs (i != j) into distance rings.

    Returns (rings, r_rings): rings[0] holds pairs with r >= widths[0],
    rings[k] those with widths[k] <= r < widths[k-1], and rings[-1] the
    remainder 0 < r < widths[-1] (the innermost band, excluded from every
    ladder rung).  Each entry is an (ii, jj) pair of index arrays.
    """
    n = coords.shape[0]
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    off = ii != jj
    ii, jj = ii[off], jj[off]
    d = coords[ii] - coords[jj]
    r = np.sqrt(np.sum(d * d, axis=-1)) if coords.ndim > 1 else np.abs(d[:, 0])
    edges = list(widths) + [0.0]
    rings, r_rings = [], []
    upper = np.inf
    for w in edges:
        sel = (r >= w) & (r < upper)
        rings.append((ii[sel], jj[sel]))
        r_rings.append(r[sel])
        upper = w
    return rings, r_rings


def double_integrate(kernel, dom, rule=None, extended=False):
    """Tensor quadrature of kernel(x, y) over the (possibly halo-extended)
    product box minus a diagonal band.

    kernel takes two (k, ndim) coordinate blocks and returns (k,) values.
    Returns a :class:`LadderResult`; with the "pv_pair" policy every
    off-diagonal pair is kept and the ladder is the cumulative ring sum.
    """
    rule = rule or QuadratureRule()
    coords = dom.node_coords(extended=extended)
    w = dom.weights(extended=extended, scheme=rule.scheme)
    widths = band_widths(dom, rule)
    rings, _ = pair_rings(coords, widths)
    ring_sums = []
    for (ii, jj) in rings:
        if ii.size == 0:
            ring_sums.append(0.0)
            continue
        vals = kernel(coords[ii], coords[jj])
        ring_sums.append(float(np.sum(w[ii] * w[jj] * vals)))
    if rule.diagonal == "pv_pair":
        estimates = tuple(np.cumsum(ring_sums))
        return LadderResult(estimates=estimates, band_widths=widths + (0.0,),
                            value=float(estimates[-1]), converged=True)
    estimates = tuple(np.cumsum(ring_sums[:-1]))
    value, converged = ladder_extrapolate(estimates)
    return LadderResult(estimates=estimates, band_widths=widths,
                        value=float(value), converged=converged)


# ---------------------------------------------------------------------------
# mollification
# ---------------------------------------------------------------------------


def _bump_profile(rho2):
    """exp(1 - 1/(1-rho^2)) on rho^2 < 1, zero outside; peak value 1."""
    out = np.zeros_like(rho2)
    inside = rho2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - rho2[inside]))
    return out


def mollifier_kernel(dom, eps):
    """Discrete radial bump kernel of radius eps, normalised to unit mass."""
    hs = dom.spacing
    if eps < 2.0 * max(hs):
        raise ResolutionError(
            "mollifier radius eps=%g needs eps >= 2h (h=%g)" % (eps, max(hs)))
    ks = [int(np.floor(eps / h + 1e-12)) for h in hs]
    axes = [np.arange(-k, k + 1) * h for k, h in zip(ks, hs)]
    mesh = np.meshgrid(*axes, indexing="ij")
    rho2 = sum(m * m for m in mesh) / (eps * eps)
    kern = _bump_profile(rho2)
    cell = float(np.prod(hs))
    kern /= kern.sum() * cell
    return kern * cell  # discrete weights summing to 1


def mollify(u, eps):
    """Convolve with the unit-mass bump of radius eps.

    Requires eps >= 2h so the kernel is resolved.  Padding follows the
    extension convention: zero-extended functions see the zero exterior,
    plain ones replicate their boundary values, which keeps constants fixed
    points of the smoothing.  The unit kernel mass makes the discrete total
    mass of a compactly supported function exact.
    """
    kern = mollifier_kernel(u.domain, eps)
    mode = "constant" if u.extension == "zero" else "nearest"
    out = ndimage.convolve(u.values, kern, mode=mode, cval=0.0)
    ext = u.extension
    if ext == "zero":
        band = _boundary_band_values(out)
        peak = float(np.max(np.abs(out))) or 1.0
        if np.max(np.abs(band)) <= 1e-12 * peak:
            out2 = out.copy()
            _zero_boundary_band(out2)
            out = out2
        else:
            ext = "undefined"
    return GridFunction(u.domain, out, ext)


def _zero_boundary_band(values):
    for a in range(values.ndim):
        sl = [slice(None)] * values.ndim
        sl[a] = 0
        values[tuple(sl)] = 0.0
        sl[a] = -1
        values[tuple(sl)] = 0.0


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------


def make_test_function(dom, kind, seed=0, **params):
    """Deterministic test inputs on a domain.

    kinds: "bump" (smooth, compactly supported), "hat" (tensor piecewise
    linear), "random" (smoothed noise, zero boundary band), "linear"
    (a.x + b, undefined outside), "constant".  Seeded kinds draw their shape
    parameters from numpy's Generator, so equal seeds give equal functions.
    """
    rng = np.random.default_rng(seed)
    coords = dom.node_coords().reshape(dom.shape + (dom.ndim,))
    if kind == "bump":
        center, width = _seeded_center_width(dom, rng, params)
        rho2 = np.zeros(dom.shape)
        for a in range(dom.ndim):
            rho2 += ((coords[..., a] - center[a]) / width[a]) ** 2
        vals = params.get("amplitude", 1.0) * _bump_profile(rho2)
        _zero_boundary_band(vals)
        return GridFunction(dom, vals, "zero")
    if kind == "hat":
        center, width = _seeded_center_width(dom, rng, params)
        vals = np.ones(dom.shape)
        for a in range(dom.ndim):
            vals *= np.clip(1.0 - np.abs(coords[..., a] - center[a]) / width[a], 0.0, None)
        vals *= params.get("amplitude", 1.0)
        _zero_boundary_band(vals)
        return GridFunction(dom, vals, "zero")
    if kind == "random":
        sigma = params.get("smoothness", 2.0)
        noise = rng.standard_normal(dom.shape)
        vals = ndimage.gaussian_filter(noise, sigma=sigma, mode="constant")
        # taper to zero at the boundary with a wide tensor bump
        for a in range(dom.ndim):
            lo, hi = dom.bounds[a]
            t = (coords[..., a] - lo) / (hi - lo)
            vals = vals * _bump_profile(((t - 0.5) * 2.0) ** 2)
        peak = float(np.max(np.abs(vals)))
        if peak > 0:
            vals = vals / peak
        _zero_boundary_band(vals)
        return GridFunction(dom, vals, "zero")
    if kind == "linear":
        a_vec = np.atleast_1d(np.asarray(params.get("a", 1.0), dtype=float))
        if a_vec.size == 1 and dom.ndim == 2:
            a_vec = np.repeat(a_vec, 2)
        b = float(params.get("b", 0.0))
        vals = np.tensordot(coords, a_vec, axes=([-1], [0])) + b
        return GridFunction(dom, vals, "undefined")
    if kind == "constant":
        return GridFunction(dom, np.full(dom.shape, float(params.get("value", 1.0))),
                            "undefined")
    raise ConfigError("unknown test function kind %r" % (kind,))


def _seeded_center_width(dom, rng, params):
    center, width = [], []
    for a in range(dom.ndim):
        lo, hi = dom.bounds[a]
        span = hi - lo
        if "center" in params:
            c = np.atleast_1d(params["center"])[a]
        else:
            c = lo + span * rng.uniform(0.42, 0.58)
        if "width" in params:
            w = np.atleast_1d(params["width"])[a]
        else:
            w = span * rng.uniform(0.18, 0.32)
        center.append(float(c))
        width.append(float(w))
    return center, width
