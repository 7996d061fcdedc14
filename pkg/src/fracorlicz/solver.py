"""Dirichlet solver: minimize the convex energy over nodal hat coefficients.

The discrete space is spanned by hat functions at interior grid nodes, zero
on the boundary and outside the box.  The energy is

    J(U) = Phi(u_U) - sum over the box of w f u_U,

with Phi the pair modular of the zero-extended nodal interpolant.  J is
convex (M convex, the pair map affine in U), so steepest descent with a
backtracking line search from U = 0 converges; a Barzilai-Borwein trial
step keeps it usable at the default tolerances.  The gradient components
are exactly the weak pairings against the hat functions, computed in one
pass over the pair rings.

For M(t) = t^2 the energy is quadratic and ``dense_oracle`` assembles and
solves the linear system directly; the iterative path is checked against
it.  Monotonicity and coercivity probes give runtime evidence for the
strict-monotonicity and coercivity properties the well-posedness argument
rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import GridFunction
from .errors import NonConvergenceError, PreconditionError, RangeError
from .fracspace import FracParams, frac_modular, frac_norm, pair_workspace
from .operator import weak_pairing

__all__ = [
    "DirichletProblem", "SolverConfig", "SolveResult", "interior_indices",
    "coefficients_to_function", "function_to_coefficients", "energy",
    "gradient", "solve", "dense_oracle", "monotonicity_probe",
    "coercivity_probe", "CoercivityReport",
]


@dataclass(frozen=True)
class DirichletProblem:
    """Right-hand side f on the box plus the fractional parameters."""

    dom: object
    f: GridFunction
    params: FracParams

    def __post_init__(self):
        if self.f.domain != self.dom:
            raise PreconditionError("right-hand side must live on the problem domain")
        if not np.all(np.isfinite(self.f.values)):
            raise PreconditionError("right-hand side must be finite")


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-8
    max_iter: int = 10000
    contraction: float = 0.5
    sufficient_decrease: float = 1e-4
    probe_exponent: float = 2.0

    def __post_init__(self):
        if self.grad_tol <= 0:
            raise PreconditionError("grad_tol must be positive")
        if not 0.0 < self.contraction < 1.0:
            raise PreconditionError("contraction must lie in (0, 1)")
        if not 0.0 < self.sufficient_decrease < 1.0:
            raise PreconditionError("sufficient_decrease must lie in (0, 1)")
        if self.max_iter < 1:
            raise PreconditionError("max_iter must be at least 1")


@dataclass
class SolveResult:
    u: GridFunction
    coefficients: np.ndarray
    converged: bool
    iterations: int
    residual: float
    energy_trace: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    delta2: float = float("nan")
    message: str = ""


def interior_indices(dom):
    """Flat indices (box ordering) of the interior nodes."""
    mask = np.zeros(dom.shape, dtype=bool)
    mask[tuple(slice(1, -1) for _ in dom.shape)] = True
    return np.flatnonzero(mask.ravel())


def coefficients_to_function(dom, U):
    """Nodal interpolant of the coefficient vector, zero-extended."""
    vals = np.zeros(int(np.prod(dom.shape)))
    vals[interior_indices(dom)] = U
    return GridFunction(dom, vals.reshape(dom.shape), extension="zero")


def function_to_coefficients(u):
    return u.values.ravel()[interior_indices(u.domain)].copy()


def _load_vector(prob):
    w = prob.dom.weights(extended=False, scheme=prob.params.rule.scheme)
    return (w * prob.f.values.ravel())[interior_indices(prob.dom)]


def _interior_in_extended(dom):
    """Flat indices of the interior nodes inside the halo-extended grid."""
    mask = np.zeros(dom.extended_shape, dtype=bool)
    core = mask[dom.core_slices()]
    core[tuple(slice(1, -1) for _ in dom.shape)] = True
    return np.flatnonzero(mask.ravel())


def energy(prob, U):
    """J(U): pair modular of the interpolant minus the load term."""
    u = coefficients_to_function(prob.dom, np.asarray(U, dtype=float))
    return frac_modular(u, prob.params) - float(np.dot(_load_vector(prob), U))


def gradient(prob, U):
    """dJ/dU: weak pairings against the hats minus the load vector."""
    u = coefficients_to_function(prob.dom, np.asarray(U, dtype=float))
    ws = pair_workspace(u, prob.params)
    g_ext = ws.gradient(u.flat(extended=True))
    return g_ext[_interior_in_extended(prob.dom)] - _load_vector(prob)


def solve(prob, cfg=None, start=None):
    """Backtracking descent until the residual meets grad_tol.

    Starts from U = 0 unless a coefficient vector is given (uniqueness
    checks run from random starts).  Returns a SolveResult; hitting
    max_iter leaves converged False with the final residual in the report.
    A line-search step underflow aborts with NonConvergenceError, since no
    further monotone progress is possible.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    try:
        delta2 = prob.params.mfun.delta2_constant(1e-6, 1.0)
    except RangeError:
        delta2 = float("nan")
    if not np.isfinite(delta2):
        raise PreconditionError("the Young function fails the doubling check on [1e-6, 1]")

    n = len(interior_indices(prob.dom))
    if start is None:
        U = np.zeros(n)
    else:
        U = np.asarray(start, dtype=float).copy()
        if U.shape != (n,):
            raise PreconditionError("start vector must have %d components" % n)
    load = _load_vector(prob)
    u = coefficients_to_function(prob.dom, U)
    ws = pair_workspace(u, prob.params)
    idx = _interior_in_extended(prob.dom)

    def J(vec):
        uu = coefficients_to_function(prob.dom, vec)
        return ws.modular(uu.flat(extended=True)) - float(np.dot(load, vec))

    def dJ(vec):
        uu = coefficients_to_function(prob.dom, vec)
        return ws.gradient(uu.flat(extended=True))[idx] - load

    e = J(U)
    g = dJ(U)
    res = float(np.linalg.norm(g))
    energy_trace = [e]
    residual_trace = [res]
    step = 1.0
    prev_U = None
    prev_g = None

    it = 0
    while res > cfg.grad_tol and it < cfg.max_iter:
        it += 1
        if prev_U is not None:
            dU = U - prev_U
            dg = g - prev_g
            denom = float(np.dot(dg, dg))
            if denom > 0:
                step = abs(float(np.dot(dU, dg))) / denom
        step = min(max(step, 1e-12), 1e8)

        t = step
        gg = float(np.dot(g, g))
        while True:
            trial = U - t * g
            e_trial = J(trial)
            if e_trial <= e - cfg.sufficient_decrease * t * gg:
                break
            t *= cfg.contraction
            if t < 1e-18:
                raise NonConvergenceError(
                    "line search step underflow at iteration %d (residual %.3e)" % (it, res))
        prev_U, prev_g = U, g
        U, e = trial, e_trial
        g = dJ(U)
        res = float(np.linalg.norm(g))
        energy_trace.append(e)
        residual_trace.append(res)

    out = coefficients_to_function(prob.dom, U)
    return SolveResult(
        u=out, coefficients=U, converged=res <= cfg.grad_tol, iterations=it,
        residual=res, energy_trace=energy_trace, residual_trace=residual_trace,
        delta2=delta2,
        message="converged" if res <= cfg.grad_tol else "max_iter reached",
    )


def dense_oracle(prob):
    """Direct linear solve for M(t) = c t^2.

    The pair modular is then the quadratic form c sum wp (du invD)^2, so
    its Hessian assembles from the same rings and the minimizer solves
    K U = load on the interior nodes.  The descent path is checked against
    this.
    """
    mfun = prob.params.mfun
    if mfun.family != "power" or abs(mfun.params[0] - 2.0) > 1e-12:
        raise PreconditionError("dense_oracle applies to quadratic Young functions only")
    coeff = mfun.params[1]
    u0 = coefficients_to_function(prob.dom, np.zeros(len(interior_indices(prob.dom))))
    ws = pair_workspace(u0, prob.params)
    nE = ws.n_nodes
    K = np.zeros((nE, nE))
    for ring in ws.rings:
        a = 2.0 * coeff * ring["wp"] * ring["inv_d"] ** 2
        ii, jj = ring["ii"], ring["jj"]
        np.add.at(K, (ii, ii), a)
        np.add.at(K, (jj, jj), a)
        np.add.at(K, (ii, jj), -a)
        np.add.at(K, (jj, ii), -a)
    idx = _interior_in_extended(prob.dom)
    Kii = K[np.ix_(idx, idx)]
    U = np.linalg.solve(Kii, _load_vector(prob))
    return coefficients_to_function(prob.dom, U)


def monotonicity_probe(u, v, params):
    """Pairing of A(u) - A(v) against u - v; positive whenever u differs
    from v on the grid."""
    d = u - v
    return weak_pairing(u, d, params) - weak_pairing(v, d, params)


@dataclass(frozen=True)
class CoercivityReport:
    scales: tuple
    norms: tuple
    ratios: tuple
    slope: float


def coercivity_probe(u, scales, params):
    """Table of <A(cu), cu> / ||cu|| over the scale list.

    The fitted log-log slope of the ratio against the norm estimates the
    growth exponent minus one (p - 1 for the power family).
    """
    scales = tuple(float(c) for c in scales)
    if any(c <= 0 for c in scales):
        raise PreconditionError("scales must be positive")
    norms, ratios = [], []
    for c in scales:
        cu = u * c
        pairing = weak_pairing(cu, cu, params)
        nn = frac_norm(cu, params)
        if nn == 0.0:
            raise PreconditionError("coercivity probe needs a nonzero function")
        norms.append(nn)
        ratios.append(pairing / nn)
    if len(scales) >= 2:
        slope = float(np.polyfit(np.log(norms), np.log(ratios), 1)[0])
    else:
        slope = float("nan")
    return CoercivityReport(scales, tuple(norms), tuple(ratios), slope)
