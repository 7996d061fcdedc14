"""Young function layer: evaluation, conjugacy and the growth diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from fracorlicz.errors import (ConfigError, DegenerateInputError,
                               PreconditionError, RangeError)
from fracorlicz.nfunction import NFunction, dominance_ratio

P2 = NFunction.power(2.0)
P3 = NFunction.power(3.0)
HALF_SQUARE = NFunction.power(2.0, coeff=0.5)  # t^2/2, its own conjugate

FAMILIES = {
    "power2": P2,
    "power3": P3,
    "power_log2": NFunction.power_log(2.0),
    "exp_quad": NFunction.exp_quad(),
}


def _tabulated_identity():
    # density m(s) = s, so M(t) = t^2/2
    ts = np.linspace(0.0, 8.0, 2049)
    return NFunction.from_density_table(ts, ts)


# -- evaluation -----------------------------------------------------------

def test_power_evaluate():
    assert P2(2.0) == 4.0
    assert P2.evaluate(2.0) == 4.0
    np.testing.assert_allclose(P2(np.array([0.0, 1.0, 3.0])), [0.0, 1.0, 9.0])


def test_power_density_and_inverse():
    assert P2.density(3.0) == pytest.approx(6.0, rel=1e-14)
    assert P3.inverse(8.0) == pytest.approx(2.0, rel=1e-12)


def test_even_odd_extensions_and_range_guard():
    # M extends evenly, the density oddly
    assert P2(-1.0) == 1.0
    assert P2.density(-3.0) == pytest.approx(-6.0, rel=1e-14)
    with pytest.raises(RangeError):
        NFunction.exp_quad()(1e6)
    with pytest.raises(RangeError):
        P2.inverse(-1.0)


def test_tabulated_density_integrates():
    # trapezoid of a linear density is exact: M(3) = 9/2
    assert _tabulated_identity()(3.0) == pytest.approx(4.5, rel=1e-12)


def test_tabulated_needs_monotone_density():
    with pytest.raises(DegenerateInputError):
        NFunction.from_density_table([0.0, 1.0, 2.0, 3.0], [0.0, 2.0, 1.0, 3.0])


def test_from_density_csv(tmp_path):
    ts = np.linspace(0.0, 4.0, 513)
    path = tmp_path / "density.csv"
    np.savetxt(path, np.column_stack([ts, ts]), delimiter=",", header="t,m", comments="")
    nf = NFunction.from_density_csv(path)
    assert nf(3.0) == pytest.approx(4.5, rel=1e-10)


def test_from_density_csv_bad_row(tmp_path):
    path = tmp_path / "broken.csv"
    path.write_text("t,m\n0,0\n1,oops\n2,2\n")
    with pytest.raises(ConfigError):
        NFunction.from_density_csv(path)


def test_from_config():
    nf = NFunction.from_config({"family": "power", "p": 3.0, "coeff": 2.0})
    assert nf(2.0) == pytest.approx(16.0)
    with pytest.raises(ConfigError):
        NFunction.from_config({"family": "power", "p": 2.0, "weird": 1})
    with pytest.raises(ConfigError):
        NFunction.from_config({"family": "nope"})


# -- conjugation ----------------------------------------------------------

def test_conjugate_power_pairs():
    # conjugate of t^p/p is t^q/q with 1/p + 1/q = 1
    for p in (1.5, 2.0, 3.0):
        q = p / (p - 1.0)
        qq, cc = NFunction.power(p, coeff=1.0 / p).conjugate().params
        assert qq == pytest.approx(q, rel=1e-12)
        assert cc == pytest.approx(1.0 / q, rel=1e-12)


def test_conjugate_general_coeff():
    # conjugate of 2 t^3 has exponent 3/2 and coefficient 2 * 3^(-3/2) / sqrt(2)
    qq, cc = NFunction.power(3.0, coeff=2.0).conjugate().params
    assert qq == pytest.approx(1.5, rel=1e-12)
    assert cc == pytest.approx(0.27216552697590873, rel=1e-12)


def test_half_square_self_conjugate():
    qq, cc = HALF_SQUARE.conjugate().params
    assert qq == pytest.approx(2.0, rel=1e-14)
    assert cc == pytest.approx(0.5, rel=1e-14)


def test_tabulated_conjugate_density():
    # m(s) = 2s inverts to mbar(t) = t/2
    ts = np.linspace(0.0, 8.0, 2049)
    tab = NFunction.from_density_table(ts, 2.0 * ts)
    assert tab.conjugate().density(3.0) == pytest.approx(1.5, rel=1e-10)


def test_conjugate_involution():
    ranges = {
        "power2": (1e-3, 1e3),
        "power3": (1e-3, 1e2),
        "power_log2": (1e-3, 1e2),
        "exp_quad": (1e-2, 5.0),
    }
    for name, nf in FAMILIES.items():
        lo, hi = ranges[name]
        ts = np.geomspace(lo, hi, 200)
        back = nf.conjugate().conjugate().evaluate(ts)
        ref = nf.evaluate(ts)
        rel = np.max(np.abs(back - ref) / np.maximum(ref, 1e-300))
        assert rel < 1e-6, name


def test_conjugate_involution_tabulated():
    tab = _tabulated_identity()
    ts = np.geomspace(0.1, 3.0, 100)
    back = tab.conjugate().conjugate().evaluate(ts)
    np.testing.assert_allclose(back, tab.evaluate(ts), rtol=1e-6)


# -- Young inequality -----------------------------------------------------

def test_young_gap_worked_values():
    # M = t^2/2: gap(s, t) = s^2/2 + t^2/2 - s t, so (1, 3) gives 2
    assert HALF_SQUARE.young_gap(1.0, 3.0) == pytest.approx(2.0, abs=1e-13)
    # equality exactly at s = m(t) = t
    assert HALF_SQUARE.young_gap(3.0, 3.0) == pytest.approx(0.0, abs=1e-12)


def test_young_equality_at_density():
    for name, nf in FAMILIES.items():
        ts = np.array([0.25, 1.0, 2.0])
        gaps = nf.young_gap(nf.density(ts), ts)
        assert np.max(np.abs(gaps)) <= 1e-8, name


@given(st.floats(1e-3, 50.0), st.floats(1e-3, 50.0))
@settings(max_examples=1000, deadline=None)
@example(1.0, 3.0)
def test_young_gap_never_negative(s, t):
    assert HALF_SQUARE.young_gap(s, t) >= -1e-12


@given(st.sampled_from(sorted(FAMILIES)), st.floats(1e-3, 10.0), st.floats(1e-3, 10.0))
@settings(max_examples=400, deadline=None)
def test_young_gap_never_negative_families(name, s, t):
    assert FAMILIES[name].young_gap(s, t) >= -1e-12


@given(st.floats(1e-4, 10.0))
@settings(max_examples=200, deadline=None)
def test_inverse_round_trip_scalar(t):
    for nf in (P2, P3):
        assert nf.inverse(nf(t)) == pytest.approx(t, rel=1e-10)


def test_inverse_round_trip_families():
    for name, nf in FAMILIES.items():
        cap = min(nf.domain_cap, 20.0)
        ts = np.linspace(1e-4, cap * 0.5, 1000)
        np.testing.assert_allclose(nf.inverse(nf.evaluate(ts)), ts, rtol=1e-10,
                                   err_msg=name)
    tab = _tabulated_identity()
    ts = np.linspace(1e-3, 4.0, 1000)
    np.testing.assert_allclose(tab.inverse(tab.evaluate(ts)), ts, rtol=1e-10)


# -- doubling and dominance -----------------------------------------------

def test_delta2_power_is_two_to_p():
    for p, want in ((1.5, 2.0 ** 1.5), (2.0, 4.0), (3.0, 8.0)):
        assert NFunction.power(p).delta2_constant(1e-3, 10.0) == pytest.approx(want, abs=1e-12)


def test_delta2_exp_quad_grows():
    eq = NFunction.exp_quad()
    vals = [eq.delta2_constant(1e-3, T) for T in (2.0, 4.0, 8.0)]
    assert vals[0] < vals[1] < vals[2]


def test_dominance_ratio():
    # t^2 against t^3 at T=100: 1e4 / 1e6
    assert dominance_ratio(P3, P2, 1.0, 100.0) == pytest.approx(0.01, rel=1e-12)
    assert dominance_ratio(P2, P2, 1.0, 7.0) == pytest.approx(1.0, rel=1e-12)
    # exp(t^2)-1 outruns every power long before T=10
    r = dominance_ratio(NFunction.exp_quad(), NFunction.power(4.0), 2.0, 10.0)
    assert r < 1e-30


# -- integrability and the conjugate exponent -----------------------------

def test_integrability_worked_tail():
    res = P2.integrability(2, 0.5)
    assert res.near_zero_converged
    assert res.near_zero == pytest.approx(4.0, rel=1e-12)
    # closed form 4 (tau^(1/4) - 1) at the ceiling
    assert res.tail == pytest.approx(4.0 * (1e6 ** 0.25 - 1.0), rel=1e-12)
    shorter = P2.integrability(2, 0.5, tau_max=1e3)
    assert shorter.tail == pytest.approx(4.0 * (1e3 ** 0.25 - 1.0), rel=1e-12)


def test_integrability_flags_divergence():
    # s p >= N in each case
    assert not P2.integrability(1, 0.5).near_zero_converged
    assert not P3.integrability(1, 0.4).near_zero_converged
    assert not NFunction.power(4.0).integrability(2, 0.5).near_zero_converged


SLOPE_CASES = [
    # (p, N, s, exponent p N / (N - s p))
    (2.0, 2, 0.5, 4.0),
    (1.5, 2, 0.25, 24.0 / 13.0),
    (2.0, 3, 0.5, 3.0),
]


def test_sobolev_conjugate_slopes():
    for p, N, s, want in SLOPE_CASES:
        mstar = NFunction.power(p).sobolev_conjugate(N, s)
        arg = np.asarray(mstar.info["arg"], dtype=float)
        grid = np.geomspace(arg[0] * 4.0, arg[-1] / 4.0, 129)
        mid = grid[32:-32]
        slope = np.polyfit(np.log(mid), np.log(mstar.evaluate(mid)), 1)[0]
        assert slope == pytest.approx(want, abs=1e-3)


def test_sobolev_conjugate_raises_at_critical():
    with pytest.raises(PreconditionError):
        P2.sobolev_conjugate(1, 0.5)


def test_conjugate_density_ratio_recovers_power():
    # 1 + sup_t Mbar(m(t)) / M(t) is the least upper growth power; for t^p
    # the ratio is constant at p - 1 so the sup needs no search
    for p in (1.5, 2.0, 3.0):
        nf = NFunction.power(p)
        conj = nf.conjugate()
        ts = np.geomspace(1e-3, 1e3, 301)
        ratio = conj.evaluate(nf.density(ts)) / nf.evaluate(ts)
        assert np.max(ratio) - np.min(ratio) < 1e-12
        assert 1.0 + np.max(ratio) == pytest.approx(p, abs=1e-6)


# -- small-argument linearisation -----------------------------------------

def test_young_truncation_power():
    alpha, m1 = P2.young_truncation()
    assert alpha == pytest.approx(1.0, rel=1e-10)
    assert m1.info["slope"] == pytest.approx(1.0, rel=1e-10)
    assert m1(alpha) == pytest.approx(P2(alpha), abs=1e-12)

    alpha3, m13 = P3.young_truncation()
    assert alpha3 == pytest.approx(1.0, rel=1e-10)
    assert m13(alpha3) == pytest.approx(P3(alpha3), abs=1e-12)


def test_young_truncation_scaled_and_log():
    # 4 t^2 meets the identity at t = 1/4, slope M(alpha)/alpha = 1
    alpha, m1 = NFunction.power(2.0, coeff=4.0).young_truncation()
    assert alpha == pytest.approx(0.25, rel=1e-10)
    assert m1.info["slope"] == pytest.approx(1.0, rel=1e-10)
    # t^2 log(1+t) meets it at t = 1 with slope log 2
    alog, mlog = NFunction.power_log(2.0).young_truncation()
    assert alog == pytest.approx(1.0, rel=1e-10)
    assert mlog.info["slope"] == pytest.approx(math.log(2.0), rel=1e-10)
    assert mlog(alog) == pytest.approx(NFunction.power_log(2.0)(alog), abs=1e-12)


# -- sub-homogeneous growth bound -----------------------------------------

def test_growth_estimate_values():
    est = P2.growth_estimate(1.0, 2, 0.5)
    assert est.exponent == pytest.approx(0.75, rel=1e-14)
    assert est.k_eps == pytest.approx(1.0006187001917481, rel=1e-6)
    assert est.t0 == pytest.approx(8.002509189945012, rel=1e-6)


def test_growth_estimate_bound_holds():
    est = P2.growth_estimate(1.0, 2, 0.5)
    ms = est.mstar
    lo = float(ms.info["arg"][0]) * 2.0
    probes = np.geomspace(lo, ms.domain_cap * 0.99, 1000)
    vals = ms.evaluate(probes)
    lhs = np.power(vals, est.exponent)
    rhs = vals / (2.0 * est.eps) + (est.k_eps / est.eps) * probes
    assert np.all(lhs <= rhs)


def test_growth_estimate_switch_point_monotone_in_eps():
    t0s = [P2.growth_estimate(e, 2, 0.5).t0 for e in (0.5, 1.0, 2.0, 4.0)]
    assert all(b >= a for a, b in zip(t0s, t0s[1:]))


def test_describe_and_flags():
    assert P2.is_nfunction
    assert P2.domain_cap > 1e6
    d = NFunction.power(3.0, coeff=2.0).describe()
    assert d["family"] == "power"
    assert d["p"] == 3.0 and d["coeff"] == 2.0
