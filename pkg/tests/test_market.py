import numpy as np
import pytest

from forwardeq import (
    MarketParams,
    brownian_model,
    d_constants,
    demand,
    hedge_ratio,
    inverse_demand,
    jump_diffusion_model,
    quad_revenue,
    spot_price_initial,
    terminal_moments,
    terminal_price,
)
from forwardeq.errors import AlphaOutOfRange

P = MarketParams(mu=100.0, m=1.0, pi0=50.0, piT=40.0, eps=0.1, R=0.02,
                 gamma_p=0.05, gamma_s=0.05)


def producer_position(params, alpha, hp, F, x):
    # direct transcription of the position: spot revenue, future sales, hedge
    p0 = inverse_demand(params, params.pi0 - alpha)
    pT = terminal_price(params, alpha, x)
    return (
        p0 * (params.pi0 - alpha) * (1.0 + params.R)
        + pT * (params.piT + alpha * (1.0 - params.eps))
        + hp * (pT - F)
    )


class TestDemand:
    def test_root_of_line(self):
        assert demand(P, P.mu / P.m) == pytest.approx(0.0, abs=1e-12)

    def test_intercept(self):
        assert demand(P, 0.0) == P.mu

    def test_hand_value(self):
        p = MarketParams(mu=100, m=2, pi0=50, piT=40, eps=0.1, R=0.02,
                         gamma_p=1.0, gamma_s=1.0)
        assert demand(p, 10.0) == pytest.approx(80.0)

    def test_inverse_roundtrip(self):
        for y in (0.0, 17.5, P.mu):
            assert demand(P, inverse_demand(P, y)) == pytest.approx(y, abs=1e-12)

    def test_inverse_values(self):
        p = MarketParams(mu=100, m=2, pi0=50, piT=40, eps=0.1, R=0.02,
                         gamma_p=1.0, gamma_s=1.0)
        assert inverse_demand(p, p.mu) == 0.0
        assert inverse_demand(p, 0.0) == pytest.approx(50.0)
        assert inverse_demand(p, 40.0) == pytest.approx(30.0)


class TestSpotPrices:
    def test_initial_no_storage(self):
        assert spot_price_initial(P, 0.0) == pytest.approx((P.mu - P.pi0) / P.m)

    def test_initial_hand_value(self):
        p = MarketParams(mu=100, m=1, pi0=50, piT=40, eps=0.1, R=0.02,
                         gamma_p=1.0, gamma_s=1.0)
        assert spot_price_initial(p, 10.0) == pytest.approx(60.0)

    def test_initial_full_storage(self):
        assert spot_price_initial(P, P.pi0) == pytest.approx(P.mu / P.m)

    def test_initial_two_forms_agree(self):
        for alpha in (0.0, 3.3, 50.0):
            direct = inverse_demand(P, P.pi0 - alpha)
            shifted = inverse_demand(P, P.pi0) + alpha / P.m
            assert direct == pytest.approx(shifted, abs=1e-12)

    def test_initial_slope(self):
        assert spot_price_initial(P, 2.0) - spot_price_initial(P, 1.0) == pytest.approx(
            1.0 / P.m, abs=1e-12
        )

    def test_alpha_range_enforced(self):
        with pytest.raises(AlphaOutOfRange):
            spot_price_initial(P, -0.5)
        with pytest.raises(AlphaOutOfRange):
            terminal_price(P, P.pi0 + 1.0, 0.0)

    def test_terminal_values(self):
        assert terminal_price(P, 0.0, 0.0) == pytest.approx((P.mu - P.piT) / P.m)
        assert terminal_price(P, 0.0, 1.0) - terminal_price(P, 0.0, 0.0) == pytest.approx(
            1.0 / P.m, abs=1e-12
        )
        p = MarketParams(mu=100, m=1, pi0=50, piT=40, eps=0.1, R=0.02,
                         gamma_p=1.0, gamma_s=1.0)
        assert terminal_price(p, 10.0, 5.0) == pytest.approx(56.0)


class TestTerminalMoments:
    def test_brownian_unit(self):
        p = MarketParams(mu=100, m=1, pi0=50, piT=40, eps=0.0, R=0.0,
                         gamma_p=1.0, gamma_s=1.0)
        model = brownian_model(0.2, 1.0, 0.0, 0.0, 1.0)
        assert terminal_moments(p, model, 0.0).variance == pytest.approx(1.0, abs=1e-14)

    def test_jump_variance(self):
        p = MarketParams(mu=100, m=1, pi0=50, piT=40, eps=0.0, R=0.0,
                         gamma_p=1.0, gamma_s=1.0)
        model = jump_diffusion_model(0.2, 1.0, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0)
        assert terminal_moments(p, model, 0.0).variance == pytest.approx(1.25, abs=1e-14)

    def test_alpha_shift(self):
        model = brownian_model(0.2, 1.0, 0.0, 0.0, 1.0)
        m10 = terminal_moments(P, model, 10.0).mean
        m0 = terminal_moments(P, model, 0.0).mean
        assert m10 - m0 == pytest.approx(-10.0 * (1.0 - P.eps) / P.m, abs=1e-12)

    def test_mean_slope_strictly_decreasing(self):
        model = brownian_model(0.2, 1.0, 0.0, 0.0, 1.0)
        means = [terminal_moments(P, model, a).mean for a in (0.0, 1.0, 2.0)]
        assert means[0] > means[1] > means[2]

    def test_nonzero_demand_drift_enters_mean(self):
        model = jump_diffusion_model(0.2, 1.0, 0.0, 1.0, 0.0, 0.5, 0.0, 2.0,
                                     demand_drift=0.3)
        mom = terminal_moments(P, model, 0.0)
        assert mom.mean == pytest.approx((P.mu - P.piT) / P.m + 0.3 * 2.0 / P.m)


class TestQuadRevenue:
    def test_constant_term(self):
        expected = P.piT * inverse_demand(P, P.piT) + P.pi0 * inverse_demand(P, P.pi0) * (
            1.0 + P.R
        )
        assert quad_revenue(P, 0.0, 0.0, 58.0) == pytest.approx(expected, abs=1e-10)

    def test_linear_in_hp(self):
        a, F = 7.0, 58.0
        lhs = quad_revenue(P, a, 4.0, F) + quad_revenue(P, a, -4.0, F)
        assert lhs == pytest.approx(2.0 * quad_revenue(P, a, 0.0, F), rel=1e-12)

    def test_hand_value(self):
        assert quad_revenue(P, 5.0, -3.0, 58.0) == pytest.approx(5001.75, abs=1e-9)

    def test_position_decomposition(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            alpha = rng.uniform(0.0, P.pi0)
            hp = rng.uniform(-80.0, 80.0)
            F = rng.uniform(20.0, 90.0)
            x = rng.normal(scale=10.0)
            lhs = quad_revenue(P, alpha, hp, F) + hedge_ratio(P, alpha, hp) * x
            rhs = producer_position(P, alpha, hp, F, x)
            assert lhs == pytest.approx(rhs, rel=1e-9)


class TestHedgeRatio:
    def test_full_hedge(self):
        assert hedge_ratio(P, 0.0, -P.piT) == pytest.approx(0.0, abs=1e-14)

    def test_linearity(self):
        assert hedge_ratio(P, 3.0, 2.0 + P.m) - hedge_ratio(P, 3.0, 2.0) == pytest.approx(
            1.0, abs=1e-14
        )

    def test_hand_value(self):
        p = MarketParams(mu=100, m=2, pi0=50, piT=40, eps=0.1, R=0.02,
                         gamma_p=1.0, gamma_s=1.0)
        assert hedge_ratio(p, 10.0, -20.0) == pytest.approx(14.5)


class TestLegacyHedgeConstants:
    def test_primed_formulas(self):
        # printed forms: piT -> piT + h' in the risk terms, extra (1-eps)h'/m
        rng = np.random.default_rng(29)
        for _ in range(50):
            h_prev = rng.uniform(-30.0, 30.0)
            f_prev = rng.uniform(20.0, 80.0)
            base = MarketParams(mu=150, m=1.3, pi0=70, piT=45, eps=0.07, R=0.015,
                                gamma_p=0.02, gamma_s=0.02)
            primed = MarketParams(mu=150, m=1.3, pi0=70, piT=45, eps=0.07, R=0.015,
                                  gamma_p=0.02, gamma_s=0.02,
                                  legacy_hedge=(h_prev, f_prev))
            V = rng.uniform(5.0, 60.0)
            F = rng.uniform(30.0, 90.0)
            d = d_constants(base, V, F)
            dp = d_constants(primed, V, F)
            mu, m, pi0, piT = base.mu, base.m, base.pi0, base.piT
            eps, R, gp = base.eps, base.R, base.gamma_p
            d2_expected = (
                (2 * (1 + R) * pi0 - (1 - eps) * (2 * piT + h_prev) - (R + eps) * mu) / m
                - gp * (1 - eps) * (piT + h_prev) * V
            )
            d5_expected = -(F - (mu - piT) / m) - gp * (piT + h_prev) * V
            assert dp[1] == pytest.approx(d2_expected, rel=1e-12)
            assert dp[4] == pytest.approx(d5_expected, rel=1e-12)
            # unchanged coefficients
            assert dp[0] == d[0] and dp[2] == d[2] and dp[3] == d[3]

    def test_zero_legacy_reduces(self):
        primed = MarketParams(mu=150, m=1.3, pi0=70, piT=45, eps=0.07, R=0.015,
                              gamma_p=0.02, gamma_s=0.02, legacy_hedge=(0.0, 0.0))
        base = MarketParams(mu=150, m=1.3, pi0=70, piT=45, eps=0.07, R=0.015,
                            gamma_p=0.02, gamma_s=0.02)
        assert d_constants(primed, 12.0, 55.0) == d_constants(base, 12.0, 55.0)


class TestValidation:
    def test_invariants_enforced(self):
        good = dict(mu=100, m=1, pi0=50, piT=40, eps=0.1, R=0.02,
                    gamma_p=1.0, gamma_s=1.0)
        for bad in (
            dict(m=0.0),
            dict(gamma_p=0.0),
            dict(gamma_s=-1.0),
            dict(eps=1.0),
            dict(eps=-0.1),
            dict(pi0=-1.0),
            dict(piT=-1.0),
            dict(R=-1.0),
        ):
            with pytest.raises(ValueError):
                MarketParams(**{**good, **bad})
