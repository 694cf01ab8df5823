"""Shared draw generators for randomized tests.

Draw ranges keep every instance inside the jointly-concave region of the
producers' problem (gamma_p * Var[P_T] comfortably above the curvature
threshold) and, for Monte Carlo comparisons, keep the exponential tilt
gamma * ell * sd(X) moderate so certainty equivalents are estimable at
n = 1e6.
"""
from __future__ import annotations

import numpy as np

from forwardeq import MarketParams, brownian_model, jump_diffusion_model


def draw_market(rng: np.random.Generator, **over) -> MarketParams:
    fields = dict(
        mu=float(rng.uniform(250.0, 350.0)),
        m=1.0,
        pi0=float(rng.uniform(60.0, 120.0)),
        piT=float(rng.uniform(15.0, 30.0)),
        eps=float(rng.uniform(0.0, 0.1)),
        R=float(rng.uniform(0.0, 0.03)),
        gamma_p=float(rng.uniform(0.009, 0.014)),
        gamma_s=float(rng.uniform(0.009, 0.014)),
    )
    fields.update(over)
    return MarketParams(**fields)


def draw_bm(rng: np.random.Generator, **over):
    fields = dict(
        sigma_stock=float(rng.uniform(0.15, 0.35)),
        sigma_demand=float(rng.uniform(18.0, 24.0)),
        rho=float(rng.uniform(-0.5, 0.5)),
        mpr=float(rng.uniform(0.0, 0.3)),
        horizon=0.25,
    )
    fields.update(over)
    return brownian_model(**fields)


def draw_jd(rng: np.random.Generator, **over):
    fields = dict(
        sigma_stock=float(rng.uniform(0.15, 0.35)),
        sigma_demand=float(rng.uniform(18.0, 24.0)),
        rho=float(rng.uniform(-0.5, 0.5)),
        intensity=float(rng.uniform(0.5, 2.0)),
        jump_stock=float(rng.uniform(-0.2, 0.2)),
        jump_demand=float(rng.uniform(1.0, 5.0)),
        stock_drift=float(rng.uniform(-0.05, 0.05)),
        horizon=0.25,
    )
    fields.update(over)
    return jump_diffusion_model(**fields)
