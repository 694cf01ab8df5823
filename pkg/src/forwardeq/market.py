"""Market primitives: linear demand, spot price maps, revenue decomposition.

Units: quantities in commodity units, prices in currency per unit, the
horizon in years.  All functions accept numpy arrays in place of scalars
for the decision variables, which the grid oracles rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphaOutOfRange
from .levy import LevyModel, project

__all__ = [
    "MarketParams",
    "PriceMoments",
    "demand",
    "inverse_demand",
    "spot_price_initial",
    "terminal_price",
    "terminal_moments",
    "quad_revenue",
    "hedge_ratio",
]


@dataclass(frozen=True)
class MarketParams:
    """Demand, production, storage, rate and risk-aversion parameters.

    `legacy_hedge`, when present, is a pair (h_prev, F_prev): a forward
    position of size h_prev struck at F_prev carried over from the
    previous production cycle, which enters the producers' terminal
    position as h_prev * (P_T - F_prev).
    """

    mu: float
    m: float
    pi0: float
    piT: float
    eps: float
    R: float
    gamma_p: float
    gamma_s: float
    legacy_hedge: tuple[float, float] | None = None

    def __post_init__(self):
        if self.m <= 0.0:
            raise ValueError("demand slope m must be positive")
        if self.gamma_p <= 0.0 or self.gamma_s <= 0.0:
            raise ValueError("risk aversions must be positive")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("storage depreciation eps must lie in [0, 1)")
        if self.pi0 < 0.0 or self.piT < 0.0:
            raise ValueError("production levels must be nonnegative")
        if self.R <= -1.0:
            raise ValueError("interest rate must exceed -1")


@dataclass(frozen=True)
class PriceMoments:
    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError("variance must be nonnegative")


def _check_alpha(params: MarketParams, alpha) -> None:
    if np.any(np.asarray(alpha) < 0.0) or np.any(np.asarray(alpha) > params.pi0):
        raise AlphaOutOfRange(f"alpha must lie in [0, {params.pi0}]")


def demand(params: MarketParams, x):
    """Quantity demanded at price x: mu - m*x."""
    return params.mu - params.m * x


def inverse_demand(params: MarketParams, y):
    """Price clearing quantity y: (mu - y) / m."""
    return (params.mu - y) / params.m


def spot_price_initial(params: MarketParams, alpha):
    """Initial spot price when alpha units are stored out of pi0."""
    _check_alpha(params, alpha)
    return inverse_demand(params, params.pi0 - alpha)


def terminal_price(params: MarketParams, alpha, x_realization):
    """Terminal spot price for a demand-shock realization x."""
    _check_alpha(params, alpha)
    return (
        inverse_demand(params, params.piT)
        - alpha * (1.0 - params.eps) / params.m
        + x_realization / params.m
    )


def terminal_moments(params: MarketParams, model: LevyModel, alpha) -> PriceMoments:
    """Mean and variance of the terminal spot price.

    Computed in closed form from the projected demand triplet: the mean
    picks up the (usually zero) demand drift, the variance is the second
    cumulant derivative at zero times T/m^2.
    """
    _check_alpha(params, alpha)
    t = project(model, model.u_demand)
    T = model.horizon
    mean = (
        inverse_demand(params, params.piT)
        - alpha * (1.0 - params.eps) / params.m
        + t.drift * T / params.m
    )
    variance = t.cumulant_d2(0.0) * T / params.m**2
    return PriceMoments(mean=float(mean), variance=float(variance))


def quad_revenue(params: MarketParams, alpha, hp, F):
    """Deterministic part of the producers' terminal position.

    Quadratic in alpha, linear in hp; together with hedge_ratio(alpha, hp)
    times the demand shock it reconstructs the full position.
    """
    mu, m, pi0, piT = params.mu, params.m, params.pi0, params.piT
    eps, R = params.eps, params.R
    return (
        -(alpha**2) * (1.0 + R + (1.0 - eps) ** 2) / m
        + alpha * (2.0 * (1.0 + R) * pi0 - 2.0 * (1.0 - eps) * piT - (R + eps) * mu) / m
        - alpha * hp * (1.0 - eps) / m
        - hp * (F - (mu - piT) / m)
        + piT * (mu - piT) / m
        + pi0 * (mu - pi0) * (1.0 + R) / m
    )


def hedge_ratio(params: MarketParams, alpha, hp):
    """Loading of the producers' position on the demand shock."""
    return (alpha * (1.0 - params.eps) + hp + params.piT) / params.m
