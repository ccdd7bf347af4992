import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from elo_horizon.exceptions import DomainError, ZeroVarianceError
from elo_horizon.forecast import (
    DriftVol,
    OutcomeProfile,
    endpoint_reach_probability,
    estimate_moments,
    estimate_moments_from_deltas,
    first_passage_probability,
    games_for_years,
    implied_drift,
    normal_cdf,
    normal_quantile,
)

from .oracles import binomial_se, gaussian_endpoint_mc, gaussian_first_passage_mc

TABLE_2022 = DriftVol(-0.11, 2.67)


class TestNormal:
    def test_examples(self):
        assert normal_cdf(0.0) == 0.5
        # mpmath, 50 digits
        assert normal_cdf(1.96) == pytest.approx(0.97500210485177956586, abs=1e-12)
        assert normal_quantile(0.975) == pytest.approx(1.9599639845400542355, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_quantile_domain(self, p):
        with pytest.raises(DomainError):
            normal_quantile(p)

    @given(st.floats(-37, 37))
    def test_symmetry(self, z):
        assert normal_cdf(z) + normal_cdf(-z) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(-10, 10), st.floats(0, 5))
    def test_nondecreasing(self, z, step):
        assert normal_cdf(z + step) >= normal_cdf(z)

    @given(st.floats(-6, 6))
    def test_round_trip(self, z):
        assert normal_quantile(normal_cdf(z)) == pytest.approx(z, abs=1e-8)

    @given(st.floats(1e-300, 1 - 1e-16))
    def test_quantile_inverts_cdf(self, p):
        x = normal_quantile(p)
        assert normal_cdf(x) == pytest.approx(p, rel=1e-12)


class TestMoments:
    def test_symmetric_two_point(self):
        dv = estimate_moments(OutcomeProfile(0.5, 0.0, 0.5, 1.0, 0.0, -1.0))
        assert dv.mu == 0.0
        assert dv.sigma == pytest.approx(1.0, abs=1e-15)

    def test_point_mass_has_no_variance(self):
        with pytest.raises(ZeroVarianceError):
            estimate_moments(OutcomeProfile(1.0, 0.0, 0.0, 2.0, 0.0, 0.0))

    def test_illustrative_profile(self):
        dv = estimate_moments(OutcomeProfile(0.25, 0.60, 0.15, 4.0, -0.8, -5.8))
        assert dv.mu == pytest.approx(-0.35, abs=1e-12)
        # 0.25*16 + 0.6*0.64 + 0.15*33.64 - 0.35**2 = 9.43 - 0.1225
        assert dv.sigma == pytest.approx(math.sqrt(9.3075), abs=1e-12)

    def test_profile_validation(self):
        with pytest.raises(DomainError):
            OutcomeProfile(0.5, 0.5, 0.5, 1, 0, -1)
        with pytest.raises(DomainError):
            OutcomeProfile(-0.1, 0.6, 0.5, 1, 0, -1)

    def test_from_deltas(self):
        dv, stats = estimate_moments_from_deltas([1.0, -1.0])
        assert (dv.mu, dv.sigma) == (0.0, 1.0)
        assert (stats.n, stats.min, stats.max) == (2, -1.0, 1.0)
        dv1, _ = estimate_moments_from_deltas([1.0, -1.0], ddof=1)
        assert dv1.sigma == pytest.approx(math.sqrt(2))

    def test_from_deltas_errors(self):
        with pytest.raises(ZeroVarianceError):
            estimate_moments_from_deltas([2, 2, 2])
        with pytest.raises(DomainError):
            estimate_moments_from_deltas([1.0])

    @given(
        st.lists(st.sampled_from([1.0, 0.5, 0.0]), min_size=2, max_size=200),
        st.floats(0.5, 8), st.floats(-3, 3), st.floats(-9, -0.5),
    )
    def test_profile_agrees_with_deltas(self, scores, e_win, e_draw, e_loss):
        lookup = {1.0: e_win, 0.5: e_draw, 0.0: e_loss}
        changes = [lookup[s] for s in scores]
        assume(np.ptp(changes) > 1e-3)
        a = estimate_moments(OutcomeProfile.from_changes(scores, changes))
        b, _ = estimate_moments_from_deltas(changes)
        assert a.mu == pytest.approx(b.mu, abs=1e-9)
        assert a.sigma == pytest.approx(b.sigma, abs=1e-9)


class TestProbabilities:
    # Expected values: mpmath 50-digit evaluation of the closed forms.
    def test_endpoint_table_values(self):
        assert endpoint_reach_probability(2860, 2900, TABLE_2022, 110) == pytest.approx(0.0314072744968, abs=1e-10)
        assert endpoint_reach_probability(2860, 2900, TABLE_2022, 330) == pytest.approx(0.0578478427089, abs=1e-10)

    def test_first_passage_table_value(self):
        assert first_passage_probability(2860, 2900, TABLE_2022, 200) == pytest.approx(0.1424850176324, abs=1e-10)

    def test_tiny_gap_driftless_is_half(self):
        assert endpoint_reach_probability(2860, 2860 + 1e-9, DriftVol(0.0, 2.0), 100) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize("target", [2860, 2850])
    def test_target_must_exceed_start(self, target):
        with pytest.raises(DomainError):
            endpoint_reach_probability(2860, target, TABLE_2022, 10)
        with pytest.raises(DomainError):
            first_passage_probability(2860, target, TABLE_2022, 10)

    def test_horizon_validated(self):
        with pytest.raises(DomainError):
            endpoint_reach_probability(2860, 2900, TABLE_2022, 0)

    @given(st.floats(0.1, 200), st.floats(0.1, 10), st.integers(1, 2000))
    def test_reflection_driftless(self, gap, sigma, t):
        dv = DriftVol(0.0, sigma)
        end = endpoint_reach_probability(0, gap, dv, t)
        assert first_passage_probability(0, gap, dv, t) == pytest.approx(min(1.0, 2 * end), abs=1e-14)

    @given(st.floats(0.1, 200), st.floats(-2, 2), st.floats(0.1, 10), st.integers(1, 2000))
    def test_first_passage_dominates(self, gap, mu, sigma, t):
        dv = DriftVol(mu, sigma)
        end = endpoint_reach_probability(0, gap, dv, t)
        fp = first_passage_probability(0, gap, dv, t)
        assert 0.0 <= end <= fp <= 1.0

    @given(st.floats(1, 100), st.floats(-1, 1), st.floats(0.01, 0.5), st.floats(0.5, 5), st.integers(1, 500))
    def test_monotonicity(self, gap, mu, dmu, sigma, t):
        base = endpoint_reach_probability(0, gap, DriftVol(mu, sigma), t)
        assert endpoint_reach_probability(0, gap, DriftVol(mu + dmu, sigma), t) >= base
        assert endpoint_reach_probability(0, gap + 1, DriftVol(mu, sigma), t) <= base
        if mu == 0:
            assert endpoint_reach_probability(0, gap, DriftVol(0.0, sigma + 0.1), t) >= base

    def test_strict_monotonicity_at_table_values(self):
        f = lambda mu=-0.11, gap=40, sigma=2.67: endpoint_reach_probability(0, gap, DriftVol(mu, sigma), 110)
        assert f(mu=-0.10) > f() > f(mu=-0.12)
        assert f(gap=39) > f() > f(gap=41)
        assert f(mu=0, sigma=2.8) > f(mu=0)

    def test_extreme_drift_is_finite(self):
        assert first_passage_probability(0, 1000, DriftVol(50.0, 0.5), 100) == 1.0
        assert first_passage_probability(0, 1000, DriftVol(-5.0, 0.5), 10) == 0.0
        p = first_passage_probability(0, 5000, DriftVol(0.4, 1.0), 100_000)
        assert 0.0 <= p <= 1.0 and math.isfinite(p)


class TestImpliedDrift:
    def test_half(self):
        assert implied_drift(2860, 2900, 55, 0.5, 2.67) == pytest.approx(40 / 55, abs=1e-15)
        assert implied_drift(2860, 2900, 55, 0.5, 2.67) == pytest.approx(0.7273, abs=1e-4)

    def test_round_trip_example(self):
        mu = implied_drift(2860, 2900, 110, 0.5, 2.67)
        assert mu == pytest.approx(0.3636, abs=1e-4)
        assert endpoint_reach_probability(2860, 2900, DriftVol(mu, 2.67), 110) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, 1.2])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            implied_drift(2860, 2900, 110, p, 2.67)

    @given(st.floats(0.5, 300), st.integers(1, 2000), st.floats(0.1, 10), st.floats(0.01, 0.99))
    def test_round_trip(self, gap, t, sigma, p):
        mu = implied_drift(0, gap, t, p, sigma)
        assert endpoint_reach_probability(0, gap, DriftVol(mu, sigma), t) == pytest.approx(p, abs=1e-9)


def test_games_for_years():
    assert games_for_years(1) == 55
    assert games_for_years(2) == 110


def test_mc_endpoint_consistency():
    n = 100_000
    for gap, mu, sigma, t in [(40, -0.11, 2.67, 110), (10, 0.05, 1.5, 50)]:
        p = endpoint_reach_probability(0, gap, DriftVol(mu, sigma), t)
        est = gaussian_endpoint_mc(gap, mu, sigma, t, n, seed=11)
        assert abs(est - p) <= 3 * binomial_se(p, n)


def test_mc_first_passage_oracle_is_sane():
    # The oracle itself: driftless case against the reflection principle.
    n = 50_000
    p = 2 * endpoint_reach_probability(0, 20, DriftVol(0.0, 2.0), 100)
    est = gaussian_first_passage_mc(20, 0.0, 2.0, 100, n, seed=5)
    assert abs(est - p) <= 3 * binomial_se(p, n)
