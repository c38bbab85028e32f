import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from funcecon.behavior import (
    Feeling,
    Label,
    Verdict,
    WeightingRegime,
    bias_constraint,
    bias_ratio,
    business_cycle,
    fixed_point,
    gamma_from_kappa,
    iterate,
    kappa_from_gamma,
    kappa_from_ratio,
    ratio_from_kappa,
    weight,
)
from funcecon.dynamics import PHI, DynamicsParams, canonical, solve
from funcecon.errors import DomainError
from oracles import FROZEN, grid_fixed_point

gammas = st.floats(0.3, 1.99).filter(lambda g: abs(g - 1) > 1e-3)


class TestWeight:
    @given(st.floats(0.3, 5))
    def test_endpoints_exact(self, g):
        assert weight(g, 0.0) == 0.0 and weight(g, 1.0) == 1.0
        out = weight(g, np.array([0.0, 1.0]))
        assert out[0] == 0.0 and out[1] == 1.0

    def test_identity(self):
        p = np.linspace(0, 1, 1000)
        assert np.max(np.abs(weight(1.0, p) - p)) <= 1e-15

    def test_monotone(self):
        p = np.linspace(0, 1, 10_000)
        for g in np.linspace(0.3, 2.0, 35):
            assert np.all(np.diff(weight(g, p)) > 0), g

    def test_oracle_value(self):
        assert weight(1 / PHI, 0.1) == pytest.approx(FROZEN["w_inv_phi_at_0_1"], abs=1e-12)

    def test_rejects(self):
        with pytest.raises(DomainError):
            weight(0.29, 0.5)
        with pytest.raises(DomainError):
            weight(0.5, 1.2)
        with pytest.raises(DomainError):
            weight(0.5, float("nan"))

    @given(st.floats(0.3, 5), st.floats(0, 1))
    def test_range(self, g, p):
        assert 0.0 <= weight(g, p) <= 1.0


class TestFixedPoint:
    @pytest.mark.parametrize(
        "g,key", [(1 / PHI, "p_star_inv_phi"), (PHI, "p_star_phi"), (0.61, "p_star_061"), (0.69, "p_star_069")]
    )
    def test_frozen(self, g, key):
        p = fixed_point(g)
        assert p == pytest.approx(FROZEN[key], abs=1e-12)
        assert abs(weight(g, p) - p) <= 1e-12

    def test_published_levels(self):
        assert abs(fixed_point(1 / PHI) - 0.34) <= 0.02
        assert abs(fixed_point(PHI) - 0.71) <= 0.02

    @pytest.mark.parametrize("g", [0.35, 0.61, 0.9, 1.2, 1.7])
    def test_grid_oracle(self, g):
        assert fixed_point(g) == pytest.approx(grid_fixed_point(g), abs=1e-6)

    @given(gammas)
    def test_is_fixed(self, g):
        p = fixed_point(g)
        assert 0 < p < 1 and abs(weight(g, p) - p) <= 1e-12

    @given(gammas)
    def test_reflection(self, g):
        # w(p) + w(1 - p) sits below 1 on both sides of gamma = 1, so the
        # reflected point 1 - p* is never a second fixed point; p* lies below
        # one half exactly when gamma < 1
        p = fixed_point(g)
        assert weight(g, p) + weight(g, 1 - p) < 1
        assert weight(g, 1 - p) != pytest.approx(1 - p, abs=1e-9)
        assert (p < 0.5) == (g < 1)

    @pytest.mark.parametrize("g", [1.0, 0.2, 2.0, 3.0])
    def test_rejected(self, g):
        with pytest.raises(DomainError):
            fixed_point(g)


class TestRegime:
    def test_presets(self):
        w, p = WeightingRegime.weird(), WeightingRegime.poor()
        assert w.gamma == pytest.approx(1 / PHI) and p.gamma == pytest.approx(PHI)
        assert WeightingRegime.gains().gamma == 0.61 and WeightingRegime.losses().gamma == 0.69
        assert WeightingRegime.weird(2.0).gamma == pytest.approx(1 / (2 * PHI))

    def test_label_consistency(self):
        with pytest.raises(DomainError):
            WeightingRegime(0.7, 1.0, Label.WEIRD)
        with pytest.raises(DomainError):
            WeightingRegime(0.7, 0.0, Label.CUSTOM)

    def test_fixed_point_attached(self):
        r = WeightingRegime.weird()
        assert abs(weight(r.gamma, r.fixed_point) - r.fixed_point) <= 1e-12
        assert WeightingRegime.custom(2.5).fixed_point is None


class TestIterate:
    @pytest.mark.parametrize("regime", [WeightingRegime.weird(), WeightingRegime.gains(), WeightingRegime.losses()])
    def test_concave_regimes_converge(self, regime):
        rng = np.random.default_rng(1)
        for p0 in rng.uniform(0.001, 0.999, 100):
            res = iterate(regime.gamma, p0)
            assert res.verdict is Verdict.CONVERGED and res.reached and not res.anomaly
            assert abs(res.trajectory[-1] - regime.fixed_point) <= 1e-9

    def test_poor_regime_splits(self):
        g = PHI
        p_star = fixed_point(g)
        rng = np.random.default_rng(2)
        for p0 in rng.uniform(0.001, 0.999, 100):
            res = iterate(g, p0)
            expected = Verdict.TRAPPED_AT_ZERO if p0 < p_star else Verdict.ESCAPED_TO_ONE
            assert res.verdict is expected and res.reached

    @given(gammas, st.floats(0.001, 0.999))
    def test_monotone_trajectory(self, g, p0):
        res = iterate(g, p0, max_iter=2000)
        steps = np.diff(res.trajectory)
        assert np.all(steps >= 0) or np.all(steps <= 0)
        assert not res.anomaly

    def test_examples(self):
        res = iterate(1 / PHI, 0.05)
        assert np.all(np.diff(res.trajectory) > 0)
        p_star = fixed_point(PHI)
        res = iterate(PHI, p_star - 0.01)
        assert res.verdict is Verdict.TRAPPED_AT_ZERO and np.all(np.diff(res.trajectory) < 0)

    @pytest.mark.parametrize("g", [1 / PHI, PHI])
    def test_start_at_fixed_point(self, g):
        p = fixed_point(g)
        res = iterate(g, p)
        assert res.verdict is Verdict.CONVERGED and len(res.trajectory) == 1

    def test_beyond_two_always_trapped(self):
        assert iterate(3.0, 0.99).verdict is Verdict.TRAPPED_AT_ZERO

    def test_bad_start(self):
        with pytest.raises(DomainError):
            iterate(0.6, 0.0)

    @pytest.mark.parametrize("g", [0.4, 1 / PHI, 0.8, 1.2, PHI, 1.9])
    def test_stability(self, g):
        p = fixed_point(g)
        for q in (p - 0.01, p + 0.01):
            if g < 1:
                assert abs(weight(g, q) - p) < abs(q - p)
            else:
                assert abs(weight(g, q) - p) > abs(q - p)


class TestBias:
    def test_constraints(self):
        weird = bias_constraint(WeightingRegime.weird())
        poor = bias_constraint(WeightingRegime.poor())
        assert weird == pytest.approx(1.61803399, abs=1e-8)
        assert poor == pytest.approx(0.61803399, abs=1e-8)
        assert weird * poor == pytest.approx(1, rel=1e-15)
        with pytest.raises(DomainError):
            bias_constraint(WeightingRegime.custom(0.7))

    def test_pure_mode(self):
        sol = solve(DynamicsParams("supply", -1.0, 1.0, 1.0), (1.0, 0.0))
        for m in (0.0, 1.0, 7.5):
            assert bias_ratio(sol, m) == pytest.approx(1 / PHI, rel=1e-13)

    @given(st.floats(0.01, 100), st.floats(0, 4))
    def test_scale_invariant(self, k, m):
        a = solve(DynamicsParams("supply", -1.0, 1.0, 1.0), (1.0, 0.5))
        b = solve(DynamicsParams("supply", -1.0, 1.0, 1.0), (k, 0.5 * k))
        assert bias_ratio(b, m) == pytest.approx(bias_ratio(a, m), rel=1e-12)

    @pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
    def test_canonical_limit(self, kappa):
        assert bias_ratio(canonical("a", kappa), 20 * kappa) == pytest.approx(1 / (PHI * kappa), rel=1e-6)

    def test_pole(self):
        with pytest.raises(DomainError):
            bias_ratio(solve(DynamicsParams("supply", 1.0, 1.0, 1.0), (0.0, 0.0)), 1.0)


class TestCycle:
    def test_neutral(self):
        p = fixed_point(1 / PHI)
        acc = business_cycle(p, 1 / PHI, 100.0)
        assert acc.feeling is Feeling.NEUTRAL and acc.subjective_delta == 0

    def test_profit(self):
        acc = business_cycle(0.2, 1 / PHI, 100.0)
        assert acc.feeling is Feeling.PROFIT
        assert acc.subjective_delta == pytest.approx(100 * (FROZEN["p_star_inv_phi"] - 0.2), abs=1e-9)
        assert round(acc.subjective_delta) == 14

    def test_overinvestment(self):
        acc = business_cycle(0.9, 1 / PHI, 100.0)
        assert acc.feeling is Feeling.OVERINVESTMENT
        assert round(acc.subjective_delta) == -56

    @given(st.floats(0.01, 0.99), gammas, st.floats(0.1, 1e3))
    def test_feeling_by_sign(self, p0, g, outcome):
        acc = business_cycle(p0, g, outcome)
        gap = acc.p_star - p0
        assert acc.feeling is (Feeling.PROFIT if gap > 0 else Feeling.OVERINVESTMENT if gap < 0 else Feeling.NEUTRAL)


class TestConversions:
    @given(st.floats(0.05, 3), st.sampled_from([Label.WEIRD, Label.POOR]))
    def test_round_trip(self, kappa, label):
        g = gamma_from_kappa(kappa, label)
        if g >= 0.3:
            assert kappa_from_gamma(g, label) == pytest.approx(kappa, rel=1e-14)
        assert kappa_from_ratio(ratio_from_kappa(kappa)) == pytest.approx(kappa, rel=1e-15)

    def test_unit_kappa(self):
        assert gamma_from_kappa(1.0, Label.WEIRD) == pytest.approx(1 / PHI)
        assert ratio_from_kappa(1 / PHI) == pytest.approx(PHI)
        with pytest.raises(DomainError):
            gamma_from_kappa(1.0, Label.CUSTOM)
        with pytest.raises(DomainError):
            kappa_from_ratio(0.0)

    def test_bias_cancelling_ratio_matches_constraint(self):
        # kappa = phi^-1 in the WEIRD case gives M/c = phi
        assert ratio_from_kappa(1 / PHI) == pytest.approx(bias_constraint(WeightingRegime.weird(1 / PHI)))
        assert ratio_from_kappa(PHI) == pytest.approx(bias_constraint(WeightingRegime.poor(PHI)))
        assert math.isclose(WeightingRegime.weird(1 / PHI).gamma, 1.0)
