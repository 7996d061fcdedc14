"""Inequality evidence: ratio tables, embeddings, mollifier and compactness."""

import numpy as np
import pytest

from fracorlicz.domain import Domain, GridFunction, make_test_function
from fracorlicz.errors import PreconditionError
from fracorlicz.fracspace import FracParams
from fracorlicz.nfunction import NFunction
from fracorlicz.verify import (bump_family, compact_embedding_evidence,
                               embedding_ratio, lipschitz_composition,
                               mollifier_convergence, norm_equivalence,
                               poincare_ratio, ws1_embedding)

DOM = Domain(((0.0, 1.0),), (65,))
P2 = NFunction.power(2.0)
PARS_05 = FracParams(s=0.5, mfun=P2)
PARS_03 = FracParams(s=0.3, mfun=P2)
ZERO = GridFunction(DOM, np.zeros(65), "zero")


def test_bump_family_deterministic():
    fam1 = bump_family(DOM, 5, seed=3)
    fam2 = bump_family(DOM, 5, seed=3)
    assert len(fam1) == 5
    for a, b in zip(fam1, fam2):
        assert np.array_equal(a.values, b.values)
        assert a.extension == "zero"


def test_poincare_ratio_scale_invariant():
    fam = bump_family(DOM, 6, seed=3)
    r1 = poincare_ratio(fam, PARS_05)
    r2 = poincare_ratio([u * 4.0 for u in fam], PARS_05)
    assert r1.max_ratio == pytest.approx(0.20652175726802693, rel=1e-9)
    assert r2.max_ratio == pytest.approx(r1.max_ratio, rel=1e-9)
    assert len(r1.rows) == 6 and not r1.skipped


def test_poincare_ratio_zero_function_skipped():
    rep = poincare_ratio([ZERO], PARS_05)
    assert rep.rows == []
    assert np.isnan(rep.max_ratio)
    assert len(rep.skipped) == 1
    assert rep.skipped[0]["index"] == 0


def test_embedding_ratio_needs_matching_dimension():
    with pytest.raises(PreconditionError):
        embedding_ratio(bump_family(DOM, 2), PARS_05, N=2)


def test_embedding_ratio_2d():
    dom2 = Domain(((0.0, 1.0), (0.0, 1.0)), (9, 9), halo=0.75)
    fam = bump_family(dom2, 8, seed=5)
    rep = embedding_ratio(fam, FracParams(s=0.5, mfun=P2), N=2)
    assert rep.max_ratio == pytest.approx(0.049340001059449676, rel=1e-8)
    scaled = embedding_ratio([u * 2.0 for u in fam], FracParams(s=0.5, mfun=P2), N=2)
    assert scaled.max_ratio == pytest.approx(rep.max_ratio, rel=1e-9)


def test_norm_equivalence():
    u = make_test_function(DOM, kind="bump", seed=2)
    r1, r2 = norm_equivalence(u, PARS_05)
    assert r1 == pytest.approx(2.0, abs=1e-9)
    assert r2 == pytest.approx(2.0, abs=1e-9)
    r1b, r2b = norm_equivalence(u * 3.0, PARS_05)
    assert r1b == pytest.approx(r1, rel=1e-12)
    assert r2b == pytest.approx(r2, rel=1e-12)
    d1, d2 = norm_equivalence(ZERO, PARS_05)
    assert np.isnan(d1) and np.isnan(d2)


def test_ws1_embedding_gaps():
    assert ws1_embedding(ZERO, PARS_05) == 0.0
    for u in bump_family(DOM, 5, seed=7):
        assert ws1_embedding(u, PARS_05) >= -1e-6


def test_ws1_embedding_detail():
    hat = make_test_function(DOM, kind="hat")
    det = ws1_embedding(hat, FracParams(s=0.4, mfun=P2), detail=True)
    assert det["gap"] == pytest.approx(19.941565154496146, rel=1e-8)
    assert det["c_prime"] == pytest.approx(1.0, rel=1e-10)
    assert det["alpha"] == pytest.approx(1.0, rel=1e-10)
    assert det["unit_norm"] == pytest.approx(0.8995302745992617, rel=1e-8)
    # the certificate constant is (2 + 2 c') times the unit norm
    want = (2.0 + 2.0 * det["c_prime"]) * det["unit_norm"]
    assert det["constant"] == pytest.approx(want, rel=1e-10)
    assert det["gap"] >= -1e-6


def test_lipschitz_composition():
    u = make_test_function(DOM, kind="bump", seed=2)
    top = float(np.max(np.abs(u.values)))
    before, after = lipschitz_composition(u, top + 1.0, PARS_05)
    assert before == pytest.approx(7.527473065707541, rel=1e-9)
    assert after == pytest.approx(before, rel=1e-12)   # cutoff above the range
    _, clipped = lipschitz_composition(u, 0.5 * top, PARS_05)
    assert clipped <= before + 1e-12
    _, zeroed = lipschitz_composition(u, 0.0, PARS_05)
    assert zeroed == 0.0


def test_mollifier_convergence_constant():
    dom33 = Domain(((0.0, 1.0),), (33,))
    c = make_test_function(dom33, kind="constant", value=0.7)
    rep = mollifier_convergence(c, FracParams(s=0.5, mfun=P2), (0.2, 0.1))
    assert all(row["norm"] <= 1e-12 for row in rep.rows)
    assert all(row["seminorm"] == 0.0 for row in rep.rows)


def test_mollifier_convergence_skips_unresolved():
    dom33 = Domain(((0.0, 1.0),), (33,))
    u = make_test_function(dom33, kind="bump")
    rep = mollifier_convergence(u, FracParams(s=0.5, mfun=P2), (0.2, 0.1, 0.05, 0.025))
    assert [row["eps"] for row in rep.rows] == [0.2, 0.1]
    assert len(rep.skipped) == 2
    assert "eps" in rep.skipped[0]["reason"]


def test_mollifier_convergence_smooth_bump():
    dom = Domain(((0.0, 1.0),), (256,))
    u = make_test_function(dom, kind="bump", center=0.5, width=0.45, amplitude=0.05)
    rep = mollifier_convergence(u, PARS_03, (0.2, 0.1, 0.05, 0.025))
    norms = [row["norm"] for row in rep.rows]
    semis = [row["seminorm"] for row in rep.rows]
    assert all(b < a for a, b in zip(norms, norms[1:]))
    assert all(b < a for a, b in zip(semis, semis[1:]))
    assert norms[-1] == pytest.approx(7.16207118586209e-05, rel=1e-6)
    assert norms[-1] < 1e-3 and semis[-1] < 1e-3


def test_compact_embedding_evidence():
    pars = PARS_03                       # subcritical: s p = 0.6 < N = 1
    fam = bump_family(DOM, 12, seed=9)
    target = NFunction.power(1.5)
    rep = compact_embedding_evidence(fam, pars, target, N=1)
    assert rep.precondition_ok
    assert rep.skipped == ""
    drifts = [row["max_drift"] for row in rep.rows]
    assert drifts == pytest.approx([0.10367665284748867, 0.03765768725143246,
                                    0.011463354143163254], rel=1e-8)
    assert drifts[0] > drifts[1] > drifts[2]
    assert all(d["decays"] for d in rep.dominance)


def test_compact_embedding_single_element():
    pars = PARS_03
    one = bump_family(DOM, 1, seed=1)
    rep = compact_embedding_evidence(one, pars, NFunction.power(1.5), N=1)
    assert all(row["diameter"] == 0.0 for row in rep.rows)
    # a target as strong as the conjugate itself cannot be dominated
    hard = compact_embedding_evidence(one, pars, NFunction.power(5.0), N=1)
    assert not hard.precondition_ok
    with pytest.raises(PreconditionError):
        compact_embedding_evidence([], pars, NFunction.power(1.5), N=1)
