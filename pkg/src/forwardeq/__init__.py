"""Equilibrium spot and forward prices of a two-date commodity market.

Producers store part of today's production and short forwards to hedge
future sales; investors take the other side while trading a correlated
stock.  The package computes both agents' best responses in closed or
semi-closed form, clears the forward market, and ships brute-force
Monte Carlo / grid-search oracles plus a scenario CLI for parameter
sweeps.
"""

from .equilibrium import (
    Equilibrium,
    clearing_gap,
    convenience_yield,
    expected_price_change,
    forward_premium,
    forward_price_zero_storage,
    solve,
    solve_no_forward,
)
from .errors import ForwardEqError
from .investor import InvestorResponse, entropy_value, investor_utility
from .levy import (
    LevyModel,
    UniTriplet,
    brownian_model,
    cumulant,
    cumulant_demand,
    esscher_root,
    esscher_tilt,
    exp_transform,
    jump_diffusion_model,
    project,
)
from .market import (
    MarketParams,
    PriceMoments,
    demand,
    hedge_ratio,
    inverse_demand,
    quad_revenue,
    spot_price_initial,
    terminal_moments,
    terminal_price,
)
from .oracle import McConfig, McEstimate, grid_best_response, mc_certainty_equivalent, oracle_equilibrium, sample_terminal
from .producer import ProducerResponse, d_constants, no_forward, producer_utility

__all__ = [
    "Equilibrium",
    "ForwardEqError",
    "InvestorResponse",
    "LevyModel",
    "MarketParams",
    "McConfig",
    "McEstimate",
    "PriceMoments",
    "ProducerResponse",
    "UniTriplet",
    "brownian_model",
    "clearing_gap",
    "convenience_yield",
    "cumulant",
    "cumulant_demand",
    "d_constants",
    "demand",
    "entropy_value",
    "esscher_root",
    "esscher_tilt",
    "exp_transform",
    "expected_price_change",
    "forward_premium",
    "forward_price_zero_storage",
    "grid_best_response",
    "hedge_ratio",
    "inverse_demand",
    "investor_utility",
    "jump_diffusion_model",
    "mc_certainty_equivalent",
    "no_forward",
    "oracle_equilibrium",
    "producer_utility",
    "project",
    "quad_revenue",
    "sample_terminal",
    "solve",
    "solve_no_forward",
    "spot_price_initial",
    "terminal_moments",
    "terminal_price",
]
