"""Numerical checks for the inequalities behind the function-space theory.

Each check either measures an empirical ratio over a seeded family (the
Poincare and embedding evidence, where no explicit constant is available)
or evaluates a fully constructed constant and reports the inequality gap
(the W^{s,1} comparison).  Every report records the quadrature policy so a
failure can be reproduced exactly.

The W^{s,1} constant deserves a note: it has the shape (2 + 2C') ||1||,
where C' bounds M1^{-1}(r^N)/r^N off the diagonal and ||1|| is a unit-
constant Orlicz norm under the conjugate of the truncated function.  On the
grid both factors are taken as the suprema over the measures actually used
(node weights for the zero-order term, pair weights for the seminorm), so
every Holder and Young step in the chain holds discretely and the gap is
nonnegative up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import GridFunction, make_test_function, mollify
from .errors import PreconditionError, ResolutionError
from .fracspace import FracParams, frac_modular, frac_norm, gagliardo_seminorm, orlicz_gagliardo_seminorm, pair_workspace
from .nfunction import dominance_ratio
from .orlicz import luxemburg_norm, orlicz_norm_amemiya
from .wsp import lp_norm, wsp_seminorm

__all__ = [
    "bump_family", "RatioReport", "poincare_ratio", "embedding_ratio",
    "norm_equivalence", "ws1_embedding", "lipschitz_composition",
    "MollifierReport", "mollifier_convergence", "CompactnessReport",
    "compact_embedding_evidence",
]


def bump_family(dom, count, seed=0):
    """Seeded zero-extended bumps; the stock family for ratio sweeps."""
    return [make_test_function(dom, kind="bump", seed=seed + k) for k in range(count)]


@dataclass
class RatioReport:
    rows: list
    max_ratio: float
    skipped: list
    quadrature: dict


def _quad_meta(dom, rule):
    return {"domain": dom.describe(), "rule": rule.describe()}


def poincare_ratio(family, params):
    """max ||u||_M / [u]_{s,M} over the family.

    Functions with zero seminorm (constants, the zero function) are listed
    under ``skipped`` rather than dividing by zero.
    """
    rows, skipped = [], []
    dom = None
    for k, u in enumerate(family):
        dom = u.domain
        semi = gagliardo_seminorm(u, params)
        if semi == 0.0:
            skipped.append({"index": k, "reason": "zero seminorm"})
            continue
        nrm = luxemburg_norm(u, params.mfun, params.rule)
        rows.append({"index": k, "norm": nrm, "seminorm": semi, "ratio": nrm / semi})
    if dom is None:
        raise PreconditionError("poincare_ratio needs a nonempty family")
    max_ratio = max((r["ratio"] for r in rows), default=float("nan"))
    return RatioReport(rows, max_ratio, skipped, _quad_meta(dom, params.rule))


def embedding_ratio(family, params, N):
    """max ||u||_{M*} / ||u||_{s,M} over the family, M* the Sobolev
    conjugate for dimension N.

    N must match the grid dimension: the seminorm kernel already uses it.
    """
    if not family:
        raise PreconditionError("embedding_ratio needs a nonempty family")
    dom = family[0].domain
    if N != dom.ndim:
        raise PreconditionError(
            "dimension mismatch: domain is %dD but N=%d" % (dom.ndim, N))
    mstar = params.mfun.sobolev_conjugate(N, params.s)
    rows, skipped = [], []
    for k, u in enumerate(family):
        big = frac_norm(u, params)
        if big == 0.0:
            skipped.append({"index": k, "reason": "zero norm"})
            continue
        target = luxemburg_norm(u, mstar, params.rule)
        rows.append({"index": k, "target_norm": target, "frac_norm": big,
                     "ratio": target / big})
    max_ratio = max((r["ratio"] for r in rows), default=float("nan"))
    return RatioReport(rows, max_ratio, skipped, _quad_meta(dom, params.rule))


def norm_equivalence(u, params):
    """(r1, r2): infimum-form over gauge-form ratios for the seminorm and
    the norm.  Both sit in [1, 2] up to rounding; NaN marks a degenerate
    numerator/denominator (constant or zero input).
    """
    semi_gauge = gagliardo_seminorm(u, params)
    if semi_gauge == 0.0:
        r1 = float("nan")
    else:
        r1 = orlicz_gagliardo_seminorm(u, params) / semi_gauge
    lux = luxemburg_norm(u, params.mfun, params.rule)
    if lux == 0.0:
        r2 = float("nan")
    else:
        r2 = orlicz_norm_amemiya(u, params.mfun, params.rule) / lux
    return r1, r2


def ws1_embedding(u, params, detail=False):
    """Gap C ||u||_{s,M1} - ||u||_{W^{s,1}} for the truncated function M1.

    C = (2 + 2 C') ||1||, with C' the supremum of M1^{-1}(r^N)/r^N over the
    pair distances in use (never below 1) and ||1|| the larger of the
    unit-constant norms under the conjugate of M1 for the node measure and
    the pair measure.  The gap contract is >= 0 up to rounding because each
    step of the chain is applied with the measure it is checked against.
    """
    alpha, m1 = params.mfun.young_truncation()
    p1 = FracParams(s=params.s, mfun=m1, rule=params.rule)

    lhs = lp_norm(u, 1.0, params.rule) + wsp_seminorm(u, params.s, 1.0, params.rule)

    lux1 = luxemburg_norm(u, m1, params.rule)
    semi1 = gagliardo_seminorm(u, p1)

    ws = pair_workspace(u, p1)
    dom = u.domain
    ndim = dom.ndim
    c_prime = 1.0
    for ring in ws.rings:
        if len(ring["inv_d"]) == 0:
            continue
        # inv_d = 1 / (r^s M1^{-1}(r^N)); recover the ratio from the stored
        # quantities instead of recomputing the inverse
        r = _ring_distances(ws, ring)
        ratio = 1.0 / (ring["inv_d"] * r ** params.s * r ** ndim)
        c_prime = max(c_prime, float(np.max(ratio)))

    mbar1 = m1.conjugate()
    vol = float(np.sum(dom.weights(extended=False, scheme=params.rule.scheme)))
    pair_mass = ws.total_weight()
    unit = 0.0
    for mass in (vol, pair_mass):
        inv = float(mbar1.inverse(1.0 / mass))
        if inv <= 0.0:
            raise PreconditionError("degenerate conjugate: unit norm undefined")
        unit = max(unit, 1.0 / inv)

    constant = (2.0 + 2.0 * c_prime) * unit
    rhs = constant * (lux1 + semi1)
    gap = rhs - lhs
    if not detail:
        return gap
    return {
        "gap": gap, "constant": constant, "c_prime": c_prime,
        "unit_norm": unit, "alpha": alpha, "lhs": lhs,
        "orlicz_norm": lux1 + semi1, "quadrature": _quad_meta(dom, params.rule),
    }


def _ring_distances(ws, ring):
    coords = ws.dom.node_coords(extended=ws.extended)
    diff = coords[ring["ii"]] - coords[ring["jj"]]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def lipschitz_composition(u, cutoff, params):
    """Pair modulars of |u| and of min(|u|, cutoff).

    The clamp is 1-Lipschitz and fixes 0, so the composed modular never
    exceeds the original: the comparison holds termwise in the pair sums.
    """
    if cutoff < 0:
        raise PreconditionError("cutoff must be nonnegative")
    absu = GridFunction(u.domain, np.abs(u.values), extension=u.extension)
    clamped = GridFunction(u.domain, np.minimum(absu.values, cutoff),
                           extension=u.extension)
    return frac_modular(absu, params), frac_modular(clamped, params)


@dataclass
class MollifierReport:
    rows: list
    skipped: list
    quadrature: dict


def mollifier_convergence(u, params, eps_ladder):
    """(eps, ||u_eps - u||_M, [u_eps - u]_{s,M}) per resolvable rung.

    Rungs below the grid's resolution limit are skipped with a note.  For
    smooth u both columns decrease along a shrinking ladder.
    """
    rows, skipped = [], []
    for eps in eps_ladder:
        try:
            ue = mollify(u, eps)
        except ResolutionError as err:
            skipped.append({"eps": float(eps), "reason": str(err)})
            continue
        diff = ue - u
        nrm = luxemburg_norm(diff, params.mfun, params.rule)
        semi = gagliardo_seminorm(diff, params)
        rows.append({"eps": float(eps), "norm": nrm, "seminorm": semi})
    return MollifierReport(rows, skipped, _quad_meta(u.domain, params.rule))


@dataclass
class CompactnessReport:
    rows: list
    norms: list
    dominance: list
    precondition_ok: bool
    skipped: str
    quadrature: dict


def compact_embedding_evidence(family, params, target, N=None):
    """Precompactness proxy in the L_target norm for a norm-bounded family.

    Per mollification width: the largest distance from a family member to
    its own mollification (should shrink with eps) and the family diameter
    after mollification.  The strict-dominance precondition target << M* is
    probed by ratio decay and only flagged, never asserted.
    """
    if not family:
        raise PreconditionError("compact_embedding_evidence needs a nonempty family")
    dom = family[0].domain
    N = dom.ndim if N is None else N
    norms = [frac_norm(u, params) for u in family]
    if not all(np.isfinite(n) for n in norms):
        return CompactnessReport([], norms, [], False,
                                 "family norm not finite", _quad_meta(dom, params.rule))

    mstar = params.mfun.sobolev_conjugate(N, params.s)
    doms = []
    ok = True
    for lam in (1.0, 2.0, 4.0):
        t_hi = min(mstar.domain_cap, target.domain_cap / lam) * 0.5
        ratios = [dominance_ratio(mstar, target, lam, t) for t in (t_hi * 1e-3, t_hi * 1e-2, t_hi)]
        decays = ratios[-1] < 0.5 * ratios[0] or ratios[-1] < 1e-6
        ok = ok and decays
        doms.append({"lam": lam, "ratios": ratios, "decays": decays})

    h = max(dom.spacing)
    rows = []
    for eps in (0.2, 0.1, 0.05, 0.025):
        if eps < 2.0 * h:
            continue
        mollified = [mollify(u, eps) for u in family]
        drift = max(luxemburg_norm(ue - u, target, params.rule)
                    for ue, u in zip(mollified, family))
        diam = 0.0
        for a in range(len(mollified)):
            for b in range(a + 1, len(mollified)):
                diam = max(diam, luxemburg_norm(mollified[a] - mollified[b],
                                                target, params.rule))
        rows.append({"eps": eps, "max_drift": drift, "diameter": diam})
    return CompactnessReport(rows, norms, doms, ok, "", _quad_meta(dom, params.rule))
