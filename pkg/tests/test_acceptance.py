"""Acceptance gate: every release criterion with one printed verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
even on success; each test asserts the same condition it prints.
"""

import time

import numpy as np
import pytest

from fracorlicz.domain import Domain, GridFunction, make_test_function
from fracorlicz.fracspace import FracParams, frac_modular, frac_norm, \
    gagliardo_seminorm, orlicz_gagliardo_seminorm
from fracorlicz.nfunction import NFunction
from fracorlicz.operator import weak_pairing
from fracorlicz.orlicz import luxemburg_norm, orlicz_norm_amemiya
from fracorlicz.solver import DirichletProblem, coercivity_probe, dense_oracle, \
    interior_indices, monotonicity_probe, solve
from fracorlicz.verify import bump_family, embedding_ratio, \
    mollifier_convergence, poincare_ratio, ws1_embedding
from fracorlicz.wsp import lp_norm, wsp_norm, wsp_seminorm

P2 = NFunction.power(2.0)


def _report(num, name, ok, detail=""):
    line = "criterion %02d (%s): %s" % (num, name, "PASS" if ok else "FAIL")
    if detail:
        line += "  [%s]" % detail
    print(line)
    assert ok, line


def test_criterion_01_wsp_reduction():
    dom = Domain(((0.0, 1.0),), (128,))
    u = make_test_function(dom, kind="bump", seed=0)
    worst = 0.0
    slowest = 0.0
    for p in (1.5, 2.0, 3.0):
        for s in (0.3, 0.5):
            t0 = time.monotonic()
            pars = FracParams(s=s, mfun=NFunction.power(p))
            rels = (
                abs(gagliardo_seminorm(u, pars) - wsp_seminorm(u, s, p, pars.rule))
                / wsp_seminorm(u, s, p, pars.rule),
                abs(luxemburg_norm(u, NFunction.power(p), pars.rule)
                    - lp_norm(u, p, pars.rule)) / lp_norm(u, p, pars.rule),
                abs(frac_norm(u, pars) - wsp_norm(u, s, p, pars.rule))
                / wsp_norm(u, s, p, pars.rule),
            )
            worst = max(worst, *rels)
            slowest = max(slowest, time.monotonic() - t0)
    _report(1, "classical Sobolev reduction", worst < 0.01 and slowest < 30.0,
            "worst rel %.2e, slowest case %.1fs" % (worst, slowest))


def test_criterion_02_conjugate_exponent():
    t0 = time.monotonic()
    cases = [(2.0, 2, 0.5, 4.0), (1.5, 2, 0.25, 24.0 / 13.0), (2.0, 3, 0.5, 3.0)]
    worst = 0.0
    for p, N, s, want in cases:
        mstar = NFunction.power(p).sobolev_conjugate(N, s)
        arg = np.asarray(mstar.info["arg"], dtype=float)
        grid = np.geomspace(arg[0] * 4.0, arg[-1] / 4.0, 129)
        mid = grid[32:-32]
        slope = np.polyfit(np.log(mid), np.log(mstar.evaluate(mid)), 1)[0]
        worst = max(worst, abs(slope - want))
    flagged = (not P2.integrability(1, 0.5).near_zero_converged
               and not NFunction.power(3.0).integrability(1, 0.4).near_zero_converged
               and not NFunction.power(4.0).integrability(2, 0.5).near_zero_converged)
    dt = time.monotonic() - t0
    _report(2, "conjugate growth exponent", worst <= 1e-3 and flagged and dt < 5.0,
            "worst slope err %.2e, %.1fs" % (worst, dt))


def test_criterion_03_young_inequality():
    families = {
        "power1.5": (NFunction.power(1.5), 50.0),
        "power2": (P2, 50.0),
        "power3": (NFunction.power(3.0), 50.0),
        "power_log2": (NFunction.power_log(2.0), 50.0),
        "exp_quad": (NFunction.exp_quad(), 10.0),
        "tabulated": (NFunction.from_density_table(np.linspace(0.0, 8.0, 2049),
                                                   np.linspace(0.0, 8.0, 2049)), 4.0),
    }
    rng = np.random.default_rng(123)
    min_gap = np.inf
    eq_worst = 0.0
    inv_worst = 0.0
    for name, (nf, hi) in families.items():
        ss = rng.uniform(1e-6, hi, 10000)
        ts = rng.uniform(1e-6, hi, 10000)
        min_gap = min(min_gap, float(np.min(nf.young_gap(ss, ts))))
        probes = np.array([0.25, 1.0, 2.0])
        eq_worst = max(eq_worst, float(np.max(np.abs(nf.young_gap(nf.density(probes),
                                                                  probes)))))
        grid = np.geomspace(1e-3, hi * 0.5, 200)
        back = nf.conjugate().conjugate().evaluate(grid)
        ref = nf.evaluate(grid)
        inv_worst = max(inv_worst, float(np.max(np.abs(back - ref)
                                                / np.maximum(ref, 1e-300))))
    ok = min_gap >= -1e-12 and eq_worst <= 1e-8 and inv_worst <= 1e-6
    _report(3, "Young inequality and involution", ok,
            "min gap %.1e, equality %.1e, involution %.1e" % (min_gap, eq_worst, inv_worst))


def test_criterion_04_seminorm_and_norm_sandwich():
    dom = Domain(((0.0, 1.0),), (65,))
    pars = FracParams(s=0.3, mfun=P2)
    lo, hi = np.inf, -np.inf
    lo_n, hi_n = np.inf, -np.inf
    for k in range(50):
        u = make_test_function(dom, kind="bump", seed=k)
        r = orlicz_gagliardo_seminorm(u, pars) / gagliardo_seminorm(u, pars)
        lo, hi = min(lo, r), max(hi, r)
        rn = orlicz_norm_amemiya(u, P2, pars.rule) / luxemburg_norm(u, P2, pars.rule)
        lo_n, hi_n = min(lo_n, rn), max(hi_n, rn)
    ok = (1.0 - 1e-6 <= lo and hi <= 2.0 + 1e-6
          and 1.0 - 1e-6 <= lo_n and hi_n <= 2.0 + 1e-6)
    _report(4, "two-sided seminorm sandwich", ok,
            "seminorm [%.6f, %.6f], norm [%.6f, %.6f]" % (lo, hi, lo_n, hi_n))


def test_criterion_05_weak_form_consistency():
    dom = Domain(((0.0, 1.0),), (65,))
    pars = FracParams(s=0.3, mfun=P2)
    worst = 0.0
    consts = []
    for k in range(20):
        u = make_test_function(dom, kind="random", seed=200 + k)
        v = make_test_function(dom, kind="random", seed=300 + k)
        wp = weak_pairing(u, v, pars)
        for eps in (1e-4, 1e-5):
            fd = (frac_modular(u + v * eps, pars)
                  - frac_modular(u + v * (-eps), pars)) / (2.0 * eps)
            worst = max(worst, abs(wp - fd) / max(abs(fd), 1e-12))
        consts.append(wp / fd)
    spread = max(consts) - min(consts)
    ok = worst <= 1e-4 and spread <= 1e-6
    _report(5, "pairing matches energy derivative", ok,
            "worst rel %.1e, constant spread %.1e" % (worst, spread))


def test_criterion_06_monotone_and_coercive():
    dom = Domain(((0.0, 1.0),), (65,))
    pars = FracParams(s=0.3, mfun=NFunction.power(2.5))
    probes = [monotonicity_probe(make_test_function(dom, kind="random", seed=k),
                                 make_test_function(dom, kind="random", seed=1000 + k),
                                 pars)
              for k in range(100)]
    bump = make_test_function(dom, kind="bump", seed=0)
    slopes_ok = True
    increasing = True
    for p in (2.0, 3.0):
        rep = coercivity_probe(bump, (1.0, 2.0, 4.0, 8.0),
                               FracParams(s=0.4, mfun=NFunction.power(p)))
        increasing = increasing and all(b > a for a, b in zip(rep.ratios, rep.ratios[1:]))
        slopes_ok = slopes_ok and abs(rep.slope - (p - 1.0)) <= 0.05 * (p - 1.0)
    ok = min(probes) > 0.0 and increasing and slopes_ok
    _report(6, "monotonicity and coercivity", ok,
            "min probe %.3g, slopes within 5%%" % min(probes))


def test_criterion_07_solver_agreement():
    t0 = time.monotonic()
    dom = Domain(((0.0, 1.0),), (66,))
    ones = make_test_function(dom, kind="constant", value=1.0)
    pars = FracParams(s=0.4, mfun=P2)

    prob = DirichletProblem(dom, ones, pars)
    res = solve(prob)
    ora = dense_oracle(prob)
    rel = np.linalg.norm(res.u.values - ora.values) / np.linalg.norm(ora.values)

    pars3 = FracParams(s=0.4, mfun=NFunction.power(3.0))
    prob3 = DirichletProblem(dom, ones, pars3)
    n = len(interior_indices(dom))
    rng = np.random.default_rng(11)
    r1 = solve(prob3, start=0.1 * rng.standard_normal(n))
    r2 = solve(prob3, start=0.1 * rng.standard_normal(n))
    start_gap = (np.linalg.norm(r1.coefficients - r2.coefficients)
                 / np.linalg.norm(r1.coefficients))

    zero = make_test_function(dom, kind="constant", value=0.0)
    rz = solve(DirichletProblem(dom, zero, pars))
    exact_zero = float(np.max(np.abs(rz.u.values))) == 0.0

    traces_ok = all(
        all(b <= a + 1e-15 for a, b in zip(r.energy_trace, r.energy_trace[1:]))
        for r in (res, r1, r2, rz))
    dt = time.monotonic() - t0
    ok = (res.converged and rel <= 1e-6 and r1.converged and r2.converged
          and start_gap <= 1e-6 and exact_zero and traces_ok and dt < 120.0)
    _report(7, "descent solver agreement", ok,
            "oracle rel %.1e, start gap %.1e, %.1fs" % (rel, start_gap, dt))


def test_criterion_08_ratio_stability():
    dom = Domain(((0.0, 1.0),), (65,))
    pars = FracParams(s=0.5, mfun=P2)
    p20 = poincare_ratio(bump_family(dom, 20, seed=3), pars).max_ratio
    p40 = poincare_ratio(bump_family(dom, 40, seed=3), pars).max_ratio
    p_change = abs(p40 - p20) / p20

    dom2 = Domain(((0.0, 1.0), (0.0, 1.0)), (9, 9), halo=0.75)
    e20 = embedding_ratio(bump_family(dom2, 20, seed=5), FracParams(s=0.5, mfun=P2),
                          N=2).max_ratio
    e40 = embedding_ratio(bump_family(dom2, 40, seed=5), FracParams(s=0.5, mfun=P2),
                          N=2).max_ratio
    e_change = abs(e40 - e20) / e20

    details = [ws1_embedding(u, pars, detail=True) for u in bump_family(dom, 20, seed=7)]
    min_gap = min(d["gap"] for d in details)
    const_ok = all(
        d["constant"] == pytest.approx((2.0 + 2.0 * d["c_prime"]) * d["unit_norm"],
                                       rel=1e-10)
        for d in details)
    ok = p_change < 0.10 and e_change < 0.10 and min_gap >= -1e-6 and const_ok
    _report(8, "ratio tables stable under doubling", ok,
            "poincare %.2f%%, embedding %.2f%%, min gap %.3g"
            % (100 * p_change, 100 * e_change, min_gap))


def test_criterion_09_mollifier_convergence():
    dom = Domain(((0.0, 1.0),), (256,))
    u = make_test_function(dom, kind="bump", center=0.5, width=0.45, amplitude=0.5)
    rep = mollifier_convergence(u, FracParams(s=0.5, mfun=P2), (0.2, 0.1, 0.05, 0.025))
    norms = [row["norm"] for row in rep.rows]
    decreasing = all(b < a for a, b in zip(norms, norms[1:]))
    ok = len(norms) == 4 and decreasing and norms[-1] < 1e-3
    _report(9, "mollifier norm convergence", ok,
            "final %.2e" % norms[-1])


def test_criterion_10_growth_bound():
    est = P2.growth_estimate(1.0, 2, 0.5)
    ms = est.mstar
    lo = float(ms.info["arg"][0]) * 2.0
    probes = np.geomspace(lo, ms.domain_cap * 0.99, 1000)
    vals = ms.evaluate(probes)
    gap = vals / (2.0 * est.eps) + (est.k_eps / est.eps) * probes \
        - np.power(vals, est.exponent)
    ok = bool(np.all(gap >= 0.0))
    _report(10, "sub-homogeneous growth bound", ok,
            "min slack %.3g, K_eps %.6f" % (float(np.min(gap)), est.k_eps))
