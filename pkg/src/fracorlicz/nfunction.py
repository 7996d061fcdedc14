"""Scalar calculus of Young functions (N-functions).

An N-function ``M`` is the primitive of a non-decreasing density ``m`` with
``m(0) = 0``, ``m(t) > 0`` for ``t > 0`` and ``m(t) -> inf``; consequently
``M`` is convex with ``M(t)/t -> 0`` at zero and ``-> inf`` at infinity.
This module provides the builtin families, pointwise-exact conjugation,
Young-inequality diagnostics, doubling and dominance measurements, the
Sobolev-conjugate construction driven by the near-zero integrability
condition, and the small-argument linear truncation used by the embedding
machinery.

Functions are extended evenly to negative arguments (the density oddly), and
every family carries a trusted range ``[0, domain_cap]``; arguments beyond it
raise :class:`~fracorlicz.errors.RangeError`.  All pointwise operations are
vectorised: scalars in, scalars out, arrays in, arrays out.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    ConfigError,
    DegenerateInputError,
    PreconditionError,
    RangeError,
)

_TINY = 1e-300
_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(16)


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _sup_inverse(f, s, cap, iters=90):
    """Largest t in [0, cap] with f(t) <= s, for non-decreasing f.

    This is the monotone generalized inverse, sup over the empty set being 0.
    Bisection runs in log space so the answer is accurate in relative terms
    across the whole trusted range.  Queries with f(cap) <= s clamp to cap.
    """
    s_arr, scalar = _as_array(s)
    if np.any(s_arr < 0):
        raise RangeError("generalized inverse queried at a negative value")
    shape = s_arr.shape
    lo = np.full(shape, math.log(_TINY))
    hi = np.full(shape, math.log(cap))
    at_top = f(np.full(shape, cap)) <= s_arr
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        ok = f(np.exp(mid)) <= s_arr
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    out = np.exp(lo)
    out = np.where(out <= _TINY * 1e10, 0.0, out)
    out = np.where(at_top, cap, out)
    return _ret(out, scalar)


def _gauss_panel(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.sum(_GAUSS_W * f(mid + half * _GAUSS_X)))


# ---------------------------------------------------------------------------
# family implementations (positive arguments only; the facade handles signs,
# caps and scalar/array bookkeeping)
# ---------------------------------------------------------------------------


class _PowerImpl:
    is_nfunction = True

    def __init__(self, p, coeff):
        self.p = float(p)
        self.coeff = float(coeff)
        self.cap = (1e290 / max(self.coeff, 1.0)) ** (1.0 / self.p)

    def evaluate(self, t):
        return self.coeff * np.power(t, self.p)

    def density(self, t):
        return self.coeff * self.p * np.power(t, self.p - 1.0)

    def inverse(self, y):
        return np.power(y / self.coeff, 1.0 / self.p)


class _PowerLogImpl:
    """M(t) = t^p log(1+t), whose density p t^(p-1) log(1+t) + t^p/(1+t)
    is non-decreasing for p >= 1."""

    is_nfunction = True

    def __init__(self, p):
        self.p = float(p)
        self.cap = 1e288 ** (1.0 / self.p)

    def evaluate(self, t):
        return np.power(t, self.p) * np.log1p(t)

    def density(self, t):
        tp = np.power(t, self.p)
        return self.p * np.power(t, self.p - 1.0) * np.log1p(t) + tp / (1.0 + t)

    def inverse(self, y):
        return _sup_inverse(self.evaluate, y, self.cap)


class _ExpQuadImpl:
    is_nfunction = True
    cap = 26.0

    def evaluate(self, t):
        return np.expm1(t * t)

    def density(self, t):
        return 2.0 * t * np.exp(t * t)

    def inverse(self, y):
        return np.sqrt(np.log1p(y))


class _TabulatedDensityImpl:
    """Density given by samples; values come from the exact antiderivative of
    the shape-preserving (PCHIP) interpolant, so the table ``m(s) = s``
    reproduces M(t) = t^2/2 exactly."""

    is_nfunction = True

    def __init__(self, t, m):
        self._pchip = PchipInterpolator(t, m, extrapolate=False)
        self._anti = self._pchip.antiderivative()
        self.cap = float(t[-1])

    def evaluate(self, t):
        return self._anti(t)

    def density(self, t):
        return self._pchip(t)

    def inverse(self, y):
        return _sup_inverse(self.evaluate, y, self.cap)


class _TabulatedValuesImpl:
    """Function values given by samples (used for constructed functions such
    as the Sobolev conjugate); density is the interpolant's derivative."""

    is_nfunction = True

    def __init__(self, arg, val):
        self._pchip = PchipInterpolator(arg, val, extrapolate=False)
        self._deriv = self._pchip.derivative()
        self.cap = float(arg[-1])

    def evaluate(self, t):
        return self._pchip(t)

    def density(self, t):
        return self._deriv(t)

    def inverse(self, y):
        return _sup_inverse(self.evaluate, y, self.cap)


class _ConjugateImpl:
    """Pointwise-exact Legendre conjugate.

    The conjugate density is the monotone generalized inverse of the base
    density, found by bisection at each query; values follow from the
    Legendre identity  Mbar(s) = s t* - M(t*)  with t* = mbar(s).  Avoiding
    an interpolated table here is what keeps the Young gap above -1e-12.
    """

    def __init__(self, base):
        self._base = base
        self.is_nfunction = base.is_nfunction
        probe = base.cap
        cap = float(np.asarray(base.density(np.asarray(probe))))
        while not math.isfinite(cap):
            probe *= 0.98
            cap = float(np.asarray(base.density(np.asarray(probe))))
        self.cap = cap

    def density(self, s):
        return _sup_inverse(self._base.density, s, self._base.cap)

    def evaluate(self, s):
        tstar = self.density(s)
        return s * tstar - self._base.evaluate(tstar)

    def inverse(self, y):
        return _sup_inverse(self.evaluate, y, self.cap)


class _TruncatedImpl:
    """Linear replacement below the truncation point alpha: slope
    M(alpha)/alpha on [0, alpha], the base function beyond.  A Young
    function but not an N-function (the density does not vanish at 0)."""

    is_nfunction = False

    def __init__(self, base, alpha):
        self._base = base
        self.alpha = float(alpha)
        self.slope = float(np.asarray(base.evaluate(np.asarray(alpha)))) / alpha
        self.cap = base.cap

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        small = t <= self.alpha
        out = np.where(small, self.slope * t, 0.0)
        if np.any(~small):
            out = np.where(small, out, self._base.evaluate(np.where(small, self.alpha, t)))
        return out

    def density(self, t):
        t = np.asarray(t, dtype=float)
        small = t <= self.alpha
        out = np.full(t.shape, self.slope)
        if np.any(~small):
            out = np.where(small, out, self._base.density(np.where(small, self.alpha, t)))
        return out

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        knee = self.slope * self.alpha
        small = y <= knee
        out = np.where(small, y / self.slope, 0.0)
        if np.any(~small):
            out = np.where(small, out, self._base.inverse(np.where(small, knee, y)))
        return out


# ---------------------------------------------------------------------------
# result records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegrabilityResult:
    """Outcome of the two growth integrals behind the Sobolev conjugate.

    ``near_zero`` estimates the integral of M^{-1}(tau)/tau^{(N+s)/N} over
    (0, 1]; ``near_zero_converged`` is False when the dyadic refinement shows
    no decay (the divergent regime, e.g. s*p >= N for power functions).
    ``tail`` is the same integrand integrated over [1, tau_max]; growth of
    the tail across horizons is evidence for the complementary condition.
    """

    near_zero: float
    tail: float
    near_zero_converged: bool
    blocks_used: int
    block_ratio: float


@dataclass(frozen=True)
class GrowthEstimate:
    """Constant K_eps for the sub-homogeneous bound

        [Mstar(t)]^((N-s)/N) <= Mstar(t)/(2 eps) + (K_eps/eps) t

    together with the switch point t0 used in its construction."""

    k_eps: float
    t0: float
    eps: float
    exponent: float
    mstar: "NFunction"


# ---------------------------------------------------------------------------
# public facade
# ---------------------------------------------------------------------------


class NFunction:
    """A Young function with density, values, inverse and conjugate.

    Instances are immutable value objects; build them through the family
    constructors (:meth:`power`, :meth:`power_log`, :meth:`exp_quad`,
    :meth:`from_density_table`) or :meth:`from_config`.
    """

    def __init__(self, family, params, impl, info=None):
        self.family = family
        self.params = params
        self._impl = impl
        self.info = info or {}
        self._conj = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def power(cls, p, coeff=1.0):
        """M(t) = coeff * t^p with p > 1."""
        if p <= 1.0:
            raise DegenerateInputError("power family needs p > 1, got p=%g" % p)
        if coeff <= 0.0:
            raise DegenerateInputError("power family needs coeff > 0")
        return cls("power", (float(p), float(coeff)), _PowerImpl(p, coeff))

    @classmethod
    def power_log(cls, p):
        """M(t) = t^p log(1+t) with p >= 1."""
        if p < 1.0:
            raise DegenerateInputError("power_log family needs p >= 1")
        return cls("power_log", (float(p),), _PowerLogImpl(p))

    @classmethod
    def exp_quad(cls):
        """M(t) = exp(t^2) - 1."""
        return cls("exp_quad", (), _ExpQuadImpl())

    @classmethod
    def from_density_table(cls, t, m):
        """Tabulated family: density samples (t_i, m(t_i)).

        t must be strictly increasing and m non-decreasing and non-negative;
        the point (0, 0) is prepended when absent.  Values come from the
        exact antiderivative of the monotone PCHIP interpolant.
        """
        t = np.asarray(t, dtype=float)
        m = np.asarray(m, dtype=float)
        if t.ndim != 1 or t.shape != m.shape or t.size < 2:
            raise DegenerateInputError("density table needs two 1-d columns of equal length >= 2")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(m)):
            raise DegenerateInputError("density table contains non-finite entries")
        if t[0] < 0.0:
            raise DegenerateInputError("density table arguments must be >= 0")
        if np.any(np.diff(t) <= 0.0):
            k = int(np.argmax(np.diff(t) <= 0.0))
            raise DegenerateInputError(
                "density table arguments must be strictly increasing (rows %d/%d)" % (k + 1, k + 2)
            )
        if np.any(m < 0.0) or np.any(np.diff(m) < 0.0):
            raise DegenerateInputError("density table must be non-negative and non-decreasing")
        if m[-1] <= 0.0:
            raise DegenerateInputError("density table is identically zero")
        if t[0] > 0.0:
            t = np.concatenate(([0.0], t))
            m = np.concatenate(([0.0], m))
        if m[0] != 0.0:
            raise DegenerateInputError("density must vanish at 0 (m(0)=0)")
        impl = _TabulatedDensityImpl(t, m)
        # structural check at the grid extremes: M(t)/t has to grow
        t_lo = t[1] if t[1] > 0 else t[-1] * 1e-6
        r_lo = float(impl.evaluate(np.asarray(t_lo))) / t_lo
        r_hi = float(impl.evaluate(np.asarray(t[-1]))) / t[-1]
        if not r_hi > r_lo:
            raise DegenerateInputError("tabulated M(t)/t does not grow across the table")
        return cls("tabulated", (tuple(t.tolist()), tuple(m.tolist())), impl)

    @classmethod
    def from_density_csv(cls, path):
        """Read a two-column CSV of (t, m(t)) samples.

        A single non-numeric header row is tolerated; any other bad row is
        reported with its line number.
        """
        with open(path, "r", newline="") as fh:
            text = fh.read()
        rows_t, rows_m = [], []
        reader = csv.reader(io.StringIO(text))
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            cells = [c.strip() for c in row if c.strip() != ""]
            if len(cells) != 2:
                raise ConfigError("%s: line %d: expected two columns, got %d" % (path, lineno, len(cells)))
            try:
                tv, mv = float(cells[0]), float(cells[1])
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ConfigError("%s: line %d: non-numeric entry %r" % (path, lineno, row))
            rows_t.append(tv)
            rows_m.append(mv)
        if len(rows_t) < 2:
            raise ConfigError("%s: need at least two data rows" % path)
        try:
            return cls.from_density_table(rows_t, rows_m)
        except DegenerateInputError as exc:
            raise ConfigError("%s: %s" % (path, exc)) from exc

    @classmethod
    def from_config(cls, cfg, path="nfunction"):
        """Build from a JSON-style dict, e.g. {"family": "power", "p": 2.0}."""
        if not isinstance(cfg, dict):
            raise ConfigError("%s: expected an object" % path)
        fam = cfg.get("family")
        if fam is None:
            raise ConfigError("%s.family: missing" % path)
        allowed = {
            "power": {"family", "p", "coeff"},
            "power_log": {"family", "p"},
            "exp_quad": {"family"},
            "tabulated": {"family", "csv", "t", "m"},
        }
        if fam not in allowed:
            raise ConfigError("%s.family: unknown family %r (choose from %s)"
                              % (path, fam, sorted(allowed)))
        extra = set(cfg) - allowed[fam]
        if extra:
            raise ConfigError("%s: unknown keys %s for family %r"
                              % (path, sorted(extra), fam))
        try:
            if fam == "power":
                if "p" not in cfg:
                    raise ConfigError("%s.p: missing" % path)
                return cls.power(float(cfg["p"]), float(cfg.get("coeff", 1.0)))
            if fam == "power_log":
                if "p" not in cfg:
                    raise ConfigError("%s.p: missing" % path)
                return cls.power_log(float(cfg["p"]))
            if fam == "exp_quad":
                return cls.exp_quad()
            if "csv" in cfg:
                if "t" in cfg or "m" in cfg:
                    raise ConfigError("%s: give either csv or inline t/m, not both" % path)
                return cls.from_density_csv(cfg["csv"])
            if "t" not in cfg or "m" not in cfg:
                raise ConfigError("%s: tabulated family needs csv or inline t and m" % path)
            return cls.from_density_table(cfg["t"], cfg["m"])
        except DegenerateInputError as exc:
            raise ConfigError("%s: %s" % (path, exc)) from exc

    # -- basic calculus ---------------------------------------------------

    @property
    def domain_cap(self):
        return self._impl.cap

    @property
    def is_nfunction(self):
        return self._impl.is_nfunction

    def _check_range(self, a):
        cap = self._impl.cap
        if np.any(a > cap * (1.0 + 1e-12)):
            worst = float(np.max(a))
            raise RangeError(
                "argument %g exceeds the trusted range [0, %g] of family %r"
                % (worst, cap, self.family)
            )

    def evaluate(self, t):
        """M(t), extended evenly to negative t."""
        arr, scalar = _as_array(t)
        a = np.abs(arr)
        self._check_range(a)
        a = np.minimum(a, self._impl.cap)
        return _ret(self._impl.evaluate(a), scalar)

    __call__ = evaluate

    def density(self, t):
        """m(t), extended oddly to negative t."""
        arr, scalar = _as_array(t)
        a = np.abs(arr)
        self._check_range(a)
        a = np.minimum(a, self._impl.cap)
        return _ret(np.sign(arr) * self._impl.density(a), scalar)

    def inverse(self, y):
        """The inverse of M on [0, M(cap)]."""
        arr, scalar = _as_array(y)
        if np.any(arr < 0):
            raise RangeError("inverse queried at a negative value")
        top = float(np.asarray(self._impl.evaluate(np.asarray(self._impl.cap))))
        if np.any(arr > top * (1.0 + 1e-12)):
            raise RangeError(
                "inverse argument %g exceeds M(domain_cap)=%g for family %r"
                % (float(np.max(arr)), top, self.family)
            )
        arr = np.minimum(arr, top)
        return _ret(self._impl.inverse(arr), scalar)

    def conjugate(self):
        """The Legendre conjugate, closed-form for the power family."""
        if self._conj is None:
            if self.family == "power":
                p, c = self.params
                q = p / (p - 1.0)
                cbar = (p - 1.0) * p ** (-q) * c ** (1.0 - q)
                self._conj = NFunction.power(q, cbar)
            else:
                self._conj = NFunction("conjugate", (self.family,) + tuple(self.params),
                                       _ConjugateImpl(self._impl))
        return self._conj

    def young_gap(self, s, t):
        """M(t) + Mbar(s) - s t; non-negative, zero exactly when s = m(t)."""
        s_arr, s_scalar = _as_array(s)
        t_arr, t_scalar = _as_array(t)
        gap = self.evaluate(t_arr) + self.conjugate().evaluate(s_arr) - s_arr * t_arr
        return _ret(np.asarray(gap), s_scalar and t_scalar)

    # -- growth diagnostics ----------------------------------------------

    def delta2_constant(self, t0, T, samples=512):
        """sup of M(2t)/M(t) over a log grid on [t0, T] (t0 clamped off 0)."""
        if T <= 0:
            raise RangeError("delta2_constant needs T > 0")
        if 2.0 * T > self._impl.cap * (1.0 + 1e-12):
            raise RangeError("delta2_constant: 2T=%g beyond trusted range of %r"
                             % (2.0 * T, self.family))
        lo = max(t0, 1e-8 * T)
        grid = np.geomspace(lo, T, samples)
        vals = self._impl.evaluate(grid)
        doubled = self._impl.evaluate(2.0 * grid)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(vals > 0, doubled / vals, np.inf)
        return float(np.max(ratios))

    def integrability(self, N, s, tau_max=1e6):
        """Estimate the two integrals of M^{-1}(tau)/tau^{(N+s)/N}.

        The near-zero piece runs over dyadic blocks toward 0 and flags
        divergence when the block contributions stop decaying; the tail runs
        from 1 out to ``tau_max``.
        """
        if not (0.0 < s < 1.0):
            raise RangeError("integrability needs 0 < s < 1")
        if N < 1:
            raise RangeError("integrability needs dimension N >= 1")
        expo = (N + s) / N

        def g(tau):
            return self._impl.inverse(tau) / np.power(tau, expo)

        total = 0.0
        prev_block = None
        ratios = []
        blocks = 0
        converged = False
        b = 1.0
        while blocks < 20000 and b > 1e-280:
            a = 0.5 * b
            blk = _gauss_panel(g, a, b)
            total += blk
            blocks += 1
            if prev_block is not None and prev_block > 0.0:
                ratios.append(blk / prev_block)
                if len(ratios) >= 10:
                    recent = ratios[-5:]
                    geo = float(np.exp(np.mean(np.log(np.maximum(recent, 1e-30)))))
                    if geo >= 0.9995:
                        converged = False
                        break
                    if blk < 1e-13 * max(total, _TINY):
                        total += blk * geo / (1.0 - geo)  # geometric tail
                        converged = True
                        break
            prev_block = blk
            b = a
        else:
            converged = b <= 1e-280  # integrand underflowed: everything counted

        tail = 0.0
        b = 1.0
        while b < tau_max:
            top = min(2.0 * b, tau_max)
            tail += _gauss_panel(g, b, top)
            b = top

        last_ratio = float(ratios[-1]) if ratios else float("nan")
        return IntegrabilityResult(near_zero=total, tail=tail,
                                   near_zero_converged=converged,
                                   blocks_used=blocks, block_ratio=last_ratio)

    # -- constructions ----------------------------------------------------

    def sobolev_conjugate(self, N, s, t_lo=1e-8, t_hi=1e8, points=257):
        """Optimal-growth conjugate built from the inverse-function integral.

        The inverse of the result is tabulated as
        ``Mstar^{-1}(t) = integral_0^t M^{-1}(tau)/tau^{(N+s)/N} dtau`` on a
        geometric grid, then flipped into value samples.  Raises
        :class:`PreconditionError` when the near-zero integral diverges
        (e.g. s*p >= N for the power family).
        """
        check = self.integrability(N, s, tau_max=10.0)
        if not check.near_zero_converged:
            raise PreconditionError(
                "sobolev_conjugate: near-zero integrability fails for %r with N=%g, s=%g "
                "(dyadic block ratio %.4f)" % (self.family, N, s, check.block_ratio)
            )
        expo = (N + s) / N
        top = float(np.asarray(self._impl.evaluate(np.asarray(self._impl.cap))))
        t_hi = min(t_hi, 0.5 * top)

        def g(tau):
            return self._impl.inverse(tau) / np.power(tau, expo)

        ts = np.geomspace(t_lo, t_hi, points)
        # integral from 0 to ts[0] by dyadic blocks
        head = 0.0
        b = ts[0]
        for _ in range(2000):
            a = 0.5 * b
            blk = _gauss_panel(g, a, b)
            head += blk
            b = a
            if blk < 1e-15 * max(head, _TINY) or b < 1e-280:
                break
        ys = np.empty_like(ts)
        ys[0] = head
        for k in range(len(ts) - 1):
            ys[k + 1] = ys[k] + _gauss_panel(g, ts[k], ts[k + 1])

        if not np.all(np.diff(ys) > 0.0):
            raise DegenerateInputError("sobolev_conjugate: inverse table is not strictly increasing")
        # convexity of the value table (slopes of t as a function of y grow)
        slopes = np.diff(ts) / np.diff(ys)
        if np.any(np.diff(slopes) < -1e-9 * slopes[:-1]):
            raise DegenerateInputError("sobolev_conjugate: value table failed the convexity check")

        arg = np.concatenate(([0.0], ys))
        val = np.concatenate(([0.0], ts))
        impl = _TabulatedValuesImpl(arg, val)
        info = {"arg": ys, "val": ts, "N": float(N), "s": float(s), "base": self.family}
        return NFunction("sobolev_conjugate", (self.family, float(N), float(s)), impl, info=info)

    def young_truncation(self):
        """Find alpha <= 1 with M(t) <= t on [0, alpha] and linearise below it.

        Returns ``(alpha, M1)`` where M1 has density M(alpha)/alpha on
        [0, alpha] and the original density beyond.  Since M(t)/t is
        non-decreasing, alpha is the monotone inverse of that ratio at 1,
        clamped to the unit interval; ties resolve toward smaller alpha.
        """
        def ratio(t):
            return self._impl.evaluate(t) / t

        alpha = float(np.asarray(_sup_inverse(ratio, 1.0, 1.0)))
        if alpha <= 1e-280:
            raise DegenerateInputError("young_truncation: M(t) <= t fails near 0")
        impl = _TruncatedImpl(self._impl, alpha)
        m1 = NFunction("truncated", (self.family, alpha) + tuple(self.params), impl,
                       info={"alpha": alpha, "slope": impl.slope, "base": self.family})
        return alpha, m1

    def growth_estimate(self, eps, N, s, points=2048):
        """Constant K_eps of the sub-homogeneous growth bound for Mstar.

        With h(t) = [Mstar(t)]^((N-s)/N)/t and g(t) = Mstar(t)/t, the switch
        point t0 is the first probe with h <= g/(2 eps) and
        K_eps = eps * sup h on (0, t0]; the bound then holds by construction
        on both sides of t0.
        """
        if eps <= 0:
            raise RangeError("growth_estimate needs eps > 0")
        key = ("mstar", float(N), float(s))
        mstar = self.info.get(key) if isinstance(self.info, dict) else None
        if mstar is None:
            mstar = self.sobolev_conjugate(N, s)
            self.info[key] = mstar
        expo = (N - s) / N
        lo = float(mstar.info["arg"][0]) * 2.0
        hi = mstar.domain_cap * 0.999
        grid = np.geomspace(lo, hi, points)
        vals = mstar.evaluate(grid)
        if not np.all(np.isfinite(vals)):
            bad = grid[~np.isfinite(vals)][-1]
            raise DegenerateInputError("growth_estimate: Mstar not finite at t=%g" % bad)
        h = np.power(vals, expo) / grid
        g = vals / grid
        ok = h <= g / (2.0 * eps)
        if not np.any(ok):
            raise RangeError("growth_estimate: switch point beyond the trusted range; "
                             "raise the probe ceiling")
        t0 = float(grid[int(np.argmax(ok))])
        dense = np.geomspace(lo, t0, 4 * points)
        hd = np.power(mstar.evaluate(dense), expo) / dense
        if not np.all(np.isfinite(hd)):
            bad = dense[~np.isfinite(hd)][-1]
            raise DegenerateInputError("growth_estimate: h unbounded near t=%g" % bad)
        k_eps = eps * float(max(np.max(hd), np.max(h[ok == False]) if np.any(~ok) else 0.0))
        return GrowthEstimate(k_eps=k_eps, t0=t0, eps=float(eps), exponent=expo, mstar=mstar)

    # -- misc -------------------------------------------------------------

    def describe(self):
        """JSON-friendly description used in reports and manifests."""
        out = {"family": self.family}
        if self.family == "power":
            out["p"], out["coeff"] = self.params
        elif self.family in ("power_log",):
            out["p"] = self.params[0]
        elif self.family == "truncated":
            out["alpha"] = self.info.get("alpha")
            out["base"] = self.info.get("base")
        elif self.family == "sobolev_conjugate":
            out["base"] = self.params[0]
            out["N"], out["s"] = self.params[1], self.params[2]
        elif self.family == "conjugate":
            out["base"] = self.params[0]
        elif self.family == "tabulated":
            out["points"] = len(self.params[0])
        return out

    def __repr__(self):
        inner = ", ".join("%g" % p for p in self.params if isinstance(p, float))
        return "NFunction(%s%s)" % (self.family, (", " + inner) if inner else "")


def dominance_ratio(m_strong, m_weak, lam, T):
    """m_weak(lam*T) / m_strong(T): decay across growing T certifies that
    m_strong grows essentially faster than m_weak."""
    num = m_weak.evaluate(lam * T)
    den = m_strong.evaluate(T)
    if den == 0.0:
        raise RangeError("dominance_ratio: denominator vanishes at T=%g" % T)
    return num / den
