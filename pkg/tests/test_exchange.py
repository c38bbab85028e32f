import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from funcecon.errors import DomainError, RangeError
from funcecon.exchange import (
    ExchangeSpec,
    FrameReference,
    Pressure,
    Regime,
    capital_growth,
    demand_capital,
    demand_functions,
    demand_price,
    global_capital,
    growth_report,
    growth_threshold,
    inflation_diagnostic,
    maturity,
    supply_capital,
    supply_functions,
    supply_price,
)
from oracles import FROZEN

S = FrameReference.supply
D = FrameReference.demand


def saturated(c_d=1.0, m_d=1.0, **kw):
    return ExchangeSpec(S(1.0, 1.0, 1.0), D(1.0, m_d, c_d), rho_star=1.0, c=1.0, **kw)


class TestPrices:
    def test_supply_at_frame_is_reference(self):
        assert supply_price(S(10, 5, 5), 5) == 10

    def test_supply_one_complexity_above(self):
        assert supply_price(S(10, 5, 5), 10) == pytest.approx(FROZEN["ten_e"], rel=1e-15)

    def test_supply_below_origin(self):
        assert supply_price(S(1, 0, 1), -1) == pytest.approx(FROZEN["inv_e"], rel=1e-15)

    def test_demand_at_frame_is_reference(self):
        assert demand_price(D(10, 5, 5), 5) == 10

    def test_demand_at_zero(self):
        assert demand_price(D(10, 5, 5), 0) == pytest.approx(FROZEN["ten_e"], rel=1e-15)

    def test_demand_one_function(self):
        assert demand_price(D(2, 0, 1), 1) == pytest.approx(FROZEN["two_over_e"], rel=1e-15)

    def test_overflow_is_range_error(self):
        with pytest.raises(RangeError):
            supply_price(S(1, 0, 1), 1e6)

    @given(
        st.floats(0.01, 100), st.floats(0, 50), st.floats(0.1, 20), st.floats(-50, 100),
    )
    def test_supply_round_trip(self, rho, m0, c, m):
        assume(abs(m - m0) / c <= 200)
        ref = S(rho, m0, c)
        back = supply_functions(ref, supply_price(ref, m))
        assert back == pytest.approx(m, rel=1e-9, abs=1e-9)

    @given(
        st.floats(0.01, 100), st.floats(0, 50), st.floats(0.1, 20), st.floats(-50, 100),
    )
    def test_demand_round_trip(self, rho, m0, c, m):
        assume(abs(m - m0) / c <= 200)
        ref = D(rho, m0, c)
        assert demand_functions(ref, demand_price(ref, m)) == pytest.approx(m, rel=1e-9, abs=1e-9)

    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-20, 20), st.floats(1e-3, 5))
    def test_monotone(self, rho, c, m, dm):
        ref_s, ref_d = S(rho, 1.0, c), D(rho, 1.0, c)
        assume(abs(dm / c) > 1e-12)
        assert supply_price(ref_s, m + dm) > supply_price(ref_s, m)
        assert demand_price(ref_d, m + dm) < demand_price(ref_d, m)


class TestFrames:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(rho_O=0, m_O=0, c_O=1), dict(rho_O=1, m_O=0, c_O=0), dict(rho_O=1, m_O=-1, c_O=1),
         dict(rho_O=1, m_O=0, c_O=1, M_O=0)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            FrameReference(**kwargs)

    def test_spec_requires_sides(self):
        with pytest.raises(DomainError):
            ExchangeSpec(S(1, 0, 1), S(1, 0, 1), 1.0, 1.0)

    def test_side_from_string(self):
        assert FrameReference(1, 0, 1, side="Demand").side.value == "demand"


class TestCapital:
    def test_supply_at_reference(self):
        ref = S(2.0, 3.0, 1.5, K_O=0.5)
        assert supply_capital(ref, 2.0, c_s=3.0) == pytest.approx(2.0 * 3.0 * 3.0 / 1.5 + 0.5)

    def test_supply_capital_value(self):
        assert supply_capital(S(1, 3, 3), math.e, c_s=2) == pytest.approx(FROZEN["four_e"], rel=1e-15)

    def test_supply_zero_terms(self):
        assert supply_capital(S(1, 0, 1, K_O=5), 1) == 5

    def test_demand_at_reference(self):
        ref = D(2.0, 3.0, 1.5, K_O=0.5)
        assert demand_capital(ref, 2.0, c_d=3.0) == pytest.approx(2.0 * 3.0 * 3.0 / 1.5 + 0.5)

    def test_demand_capital_value(self):
        assert demand_capital(D(1, 3, 3), 1 / math.e, c_d=2) == pytest.approx(
            FROZEN["four_over_e"], rel=1e-15
        )

    def test_demand_zero(self):
        assert demand_capital(D(1, 0, 1), 1) == 0

    @pytest.mark.parametrize("fn,ref", [(supply_capital, S(1, 0, 1)), (demand_capital, D(1, 0, 1))])
    def test_nonpositive_price(self, fn, ref):
        with pytest.raises(DomainError):
            fn(ref, 0.0)

    def test_global_identical_frames(self):
        spec = ExchangeSpec(S(2, 0, 1, K_O=3), D(2, 0, 1, K_O=4), rho_star=2, c=1)
        assert global_capital(spec) == pytest.approx(7)

    def test_global_value(self):
        spec = ExchangeSpec(S(1 / math.e, 1, 1), D(math.e, 1, 1), rho_star=1, c=1)
        assert global_capital(spec) == pytest.approx(4.0, rel=1e-15)

    @given(
        st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10),
        st.floats(0, 10), st.floats(0, 10), st.floats(0.2, 10), st.floats(0.2, 10),
        st.floats(-5, 5), st.floats(-5, 5), st.floats(0.2, 5),
    )
    def test_global_is_sum(self, rs, rd, rho, ms, md, cs, cd, ks, kd, c):
        spec = ExchangeSpec(S(rs, ms, cs, K_O=ks), D(rd, md, cd, K_O=kd), rho_star=rho, c=c)
        total = supply_capital(spec.supply, rho, c) + demand_capital(spec.demand, rho, c)
        assert global_capital(spec) == pytest.approx(total, rel=1e-9, abs=1e-9)


class TestGrowth:
    def test_saturated_threshold(self):
        rep = growth_report(saturated())
        assert rep.threshold == pytest.approx(FROZEN["e_minus_2"], rel=1e-15)
        assert f"{rep.threshold:.3g}" == "0.135"

    def test_maturity_adjusted_value(self):
        spec = ExchangeSpec(S(1, 1, 1), D(1, 1, 1), rho_star=1, c=2, M=0.5)
        assert growth_report(spec).delta_K == pytest.approx(8.0, rel=1e-15)

    def test_unit_maturities_reduce(self):
        spec = ExchangeSpec(S(0.7, 2, 3), D(1.3, 1, 2), rho_star=1.1, c=2.5)
        assert growth_report(spec).delta_K == pytest.approx(capital_growth(spec), rel=1e-15)

    def test_regimes(self):
        neg = ExchangeSpec(S(1, 1, 1, M_O=-1), D(1, 1, 1, M_O=-1), 1, 1, M=-1)
        mixed = ExchangeSpec(S(1, 1, 1, M_O=-1), D(1, 1, 1), 1, 1)
        assert growth_report(saturated()).regime is Regime.VIRTUOUS
        assert growth_report(neg).regime is Regime.ERRONEOUS
        assert growth_report(mixed).regime is Regime.MIXED

    @given(
        st.floats(0.1, 5), st.floats(0, 4), st.floats(0, 4), st.floats(0.3, 4), st.floats(0.3, 4),
        st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.1, 3), st.floats(0.2, 4),
        st.floats(0.05, 20),
    )
    def test_sign_equivalence(self, rho, ms, md, cs, cd, Ms, Md, M, c, r):
        spec = ExchangeSpec(S(1.0, ms, cs, M_O=Ms), D(r, md, cd, M_O=Md), rho_star=rho, c=c, M=M)
        rep = growth_report(spec)
        assume(abs(math.log(r) - math.log(rep.threshold)) > 1e-9)
        assert rep.grows == (rep.delta_K > 0)
        assert rep.grows == (r > rep.threshold)

    @given(st.floats(0.1, 5), st.floats(0, 4), st.floats(0, 4), st.floats(0.3, 4), st.floats(0.3, 4),
           st.floats(0.05, 20), st.floats(0.2, 4))
    def test_unit_maturity_property(self, rho, ms, md, cs, cd, r, c):
        spec = ExchangeSpec(S(1.0, ms, cs), D(r, md, cd), rho_star=rho, c=c)
        assert growth_report(spec).delta_K == pytest.approx(capital_growth(spec), rel=1e-14, abs=1e-14)

    def test_threshold_function(self):
        assert growth_threshold(saturated()) == growth_report(saturated()).threshold


class TestInflation:
    def test_demand_complexity_up_is_inflationary(self):
        assert inflation_diagnostic(saturated(), saturated(c_d=2.0)) is Pressure.INFLATIONARY

    def test_identical_is_neutral(self):
        assert inflation_diagnostic(saturated(), saturated()) is Pressure.NEUTRAL

    def test_more_demand_functions_is_deflationary(self):
        assert inflation_diagnostic(saturated(), saturated(m_d=2.0)) is Pressure.DEFLATIONARY


class TestMaturity:
    def test_ratio(self):
        assert maturity([1, 2], [2, 4]) == 0.5

    def test_negative_realized(self):
        assert maturity([-3], [1, 2]) == -1

    def test_nonpositive_marketed(self):
        with pytest.raises(DomainError):
            maturity([1], [0])
