"""Pair modulars, the two Gagliardo-type seminorms and the composite norm."""

import numpy as np
import pytest

from fracorlicz.domain import Domain, GridFunction, QuadratureRule, make_test_function
from fracorlicz.errors import RangeError
from fracorlicz.fracspace import (FracParams, frac_modular, frac_norm,
                                  gagliardo_seminorm, orlicz_gagliardo_seminorm,
                                  pair_workspace)
from fracorlicz.nfunction import NFunction
from fracorlicz.wsp import lp_norm, wsp_norm, wsp_seminorm

DOM = Domain(((0.0, 1.0),), (65,))
P2 = NFunction.power(2.0)
PARS_03 = FracParams(s=0.3, mfun=P2)
BUMP = make_test_function(DOM, kind="bump", seed=1)

# banded value of the pair modular for u(x) = x at s = 0.3 on 65 nodes;
# the continuum integral of |x-y|^(1-2s) over the unit square is
# 2 / ((2-2s)(3-2s)) = 0.5952380952380952
LINEAR_MODULAR_65 = 0.593859189682544
LINEAR_MODULAR_EXACT = 2.0 / (1.4 * 2.4)


def _linear():
    x = DOM.node_coords()[:, 0].reshape(DOM.shape)
    return GridFunction(DOM, x)


def test_params_validation():
    with pytest.raises(RangeError):
        FracParams(s=0.0, mfun=P2)
    with pytest.raises(RangeError):
        FracParams(s=1.0, mfun=P2)
    # deeper default ladder for strong singularities
    assert FracParams(s=0.7, mfun=P2).rule.ladder_depth == 4
    assert FracParams(s=0.3, mfun=P2).rule.ladder_depth == 3


def test_constant_modular_is_zero():
    const = make_test_function(DOM, kind="constant", value=2.5)
    assert frac_modular(const, PARS_03) == 0.0
    assert gagliardo_seminorm(const, PARS_03) == 0.0


def test_modular_monotone_in_lambda():
    vals = [frac_modular(BUMP, PARS_03, lam) for lam in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_linear_function_worked_value():
    got = frac_modular(_linear(), PARS_03)
    assert got == pytest.approx(LINEAR_MODULAR_65, rel=1e-10)
    assert abs(got - LINEAR_MODULAR_EXACT) / LINEAR_MODULAR_EXACT < 0.01


def test_modular_report_detail():
    rep = frac_modular(BUMP, PARS_03, detail=True)
    assert len(rep.estimates) == 3
    assert rep.value == rep.estimates[-1]
    assert all(b > a for a, b in zip(rep.estimates, rep.estimates[1:]))
    diffs = [abs(b - a) for a, b in zip(rep.estimates, rep.estimates[1:])]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    assert rep.converged


def test_ladder_converges_across_orders():
    for s in (0.3, 0.5, 0.7):
        rep = frac_modular(BUMP, FracParams(s=s, mfun=P2), detail=True)
        diffs = [abs(b - a) for a, b in zip(rep.estimates, rep.estimates[1:])]
        assert all(b < a for a, b in zip(diffs, diffs[1:])), s
        assert rep.converged, s


def test_seminorm_homogeneity():
    semi = gagliardo_seminorm(BUMP, PARS_03)
    assert gagliardo_seminorm(BUMP * 2.5, PARS_03) == pytest.approx(2.5 * semi, rel=1e-12)


def test_seminorm_triangle():
    for k in range(10):
        a = make_test_function(DOM, kind="random", seed=k)
        b = make_test_function(DOM, kind="random", seed=100 + k)
        lhs = gagliardo_seminorm(a + b, PARS_03)
        rhs = gagliardo_seminorm(a, PARS_03) + gagliardo_seminorm(b, PARS_03)
        assert lhs <= rhs + 1e-6 * rhs


def test_seminorm_sandwich_bumps():
    # Luxemburg-of-quotient over gauge stays within [1, 2]
    for k in range(10):
        u = make_test_function(DOM, kind="bump", seed=k)
        r = orlicz_gagliardo_seminorm(u, PARS_03) / gagliardo_seminorm(u, PARS_03)
        assert 1.0 - 1e-6 <= r <= 2.0 + 1e-6, k


def test_seminorm_sandwich_hat():
    hat = make_test_function(DOM, kind="hat")
    r = orlicz_gagliardo_seminorm(hat, PARS_03) / gagliardo_seminorm(hat, PARS_03)
    assert r == pytest.approx(1.9999999999993021, rel=1e-9)


def test_norm_of_constant_one():
    pars = FracParams(s=0.4, mfun=P2)
    one = make_test_function(DOM, kind="constant", value=1.0)
    assert frac_norm(one, pars) == pytest.approx(1.0, rel=1e-12)


def test_norm_dominates_both_parts():
    from fracorlicz.orlicz import luxemburg_norm
    n = frac_norm(BUMP, PARS_03)
    assert n > luxemburg_norm(BUMP, P2, PARS_03.rule)
    assert n > gagliardo_seminorm(BUMP, PARS_03)


def test_power_family_reduces_to_wsp():
    # with M = t^p the gauge seminorm and the Luxemburg norm become the
    # classical Sobolev--Slobodeckij quantities
    dom = Domain(((0.0, 1.0),), (65,))
    u = make_test_function(dom, kind="bump", seed=0)
    pars = FracParams(s=0.3, mfun=P2)
    assert gagliardo_seminorm(u, pars) == pytest.approx(wsp_seminorm(u, 0.3, 2.0, pars.rule),
                                                        rel=1e-10)
    from fracorlicz.orlicz import luxemburg_norm
    assert luxemburg_norm(u, P2, pars.rule) == pytest.approx(lp_norm(u, 2.0, pars.rule),
                                                             rel=1e-10)
    assert frac_norm(u, pars) == pytest.approx(wsp_norm(u, 0.3, 2.0, pars.rule), rel=1e-10)


def test_pair_workspace_cached():
    assert pair_workspace(BUMP, PARS_03) is pair_workspace(BUMP, PARS_03)
