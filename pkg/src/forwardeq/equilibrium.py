"""Forward-market clearing and the derived equilibrium quantities.

The equilibrium forward price is the root of the clearing gap
Phi(F) = hp(F) + hs(F), where the producers' best response supplies the
storage level used in the investors' expected terminal price.  Phi is
strictly decreasing for concave instances, so an expanded bracket around
the terminal mean plus bisection locates the unique root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from . import investor, producer
from .errors import (
    DegenerateStorageCost,
    NoConvergence,
    ZeroForward,
    ZeroSpot,
    ZeroVariance,
)
from .levy import LevyModel
from .market import MarketParams, spot_price_initial, terminal_moments
from .roots import bisect, expand_bracket

__all__ = [
    "Equilibrium",
    "ModelKind",
    "solve",
    "clearing_gap",
    "forward_price_zero_storage",
    "convenience_yield",
    "forward_premium",
    "expected_price_change",
    "solve_no_forward",
]

ModelKind = Literal["brownian", "jump_diffusion"]


@dataclass(frozen=True)
class Equilibrium:
    """Cleared market: strategies, prices and derived diagnostics."""

    alpha: float
    h: float
    F: float
    P0: float
    E_PT: float
    forward_premium: float
    convenience_yield: float
    expected_price_change: float
    clearing_residual: float
    producer_utility: float
    investor_utility: float


def _responses(params: MarketParams, model: LevyModel, kind: ModelKind, F: float):
    if kind == "brownian":
        pr = producer.best_response_bm(params, model, F)
        inv = investor.best_response_bm(params, model, pr.alpha, F)
    elif kind == "jump_diffusion":
        pr = producer.best_response_jd(params, model, F)
        inv = investor.best_response_jd(params, model, pr.alpha, F)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return pr, inv


def clearing_gap(params: MarketParams, model: LevyModel, kind: ModelKind, F: float) -> float:
    """Excess forward demand hp(F) + hs(F) at a candidate forward price."""
    pr, inv = _responses(params, model, kind, F)
    return pr.hp + inv.hs


def solve(params: MarketParams, model: LevyModel, kind: ModelKind = "brownian") -> Equilibrium:
    """Clear the forward market and assemble the equilibrium quantities.

    Brackets the root of the clearing gap around the terminal mean
    (half-width 10 standard deviations, doubled on demand), bisects to
    1e-12 relative, then applies one Newton polish step unless the
    producers' clamping state flips across the final bracket.
    """
    mom0 = terminal_moments(params, model, 0.0)
    sigma = math.sqrt(mom0.variance)
    if sigma <= 0.0:
        raise ZeroVariance("Var[P_T] must be positive to clear the forward market")

    def gap(F: float) -> float:
        return clearing_gap(params, model, kind, F)

    lo, hi, flo, fhi = expand_bracket(gap, mom0.mean - 10.0 * sigma, mom0.mean + 10.0 * sigma)
    xtol = 1e-12 * (1.0 + abs(mom0.mean))
    F_hat = bisect(gap, lo, hi, flo, fhi, xtol=xtol)

    # one Newton polish unless a clamp transition sits inside the bracket
    lo_cl = _responses(params, model, kind, F_hat - xtol)[0].clamped
    hi_cl = _responses(params, model, kind, F_hat + xtol)[0].clamped
    if lo_cl == hi_cl:
        step = 1e-6 * (1.0 + abs(F_hat))
        slope = (gap(F_hat + step) - gap(F_hat - step)) / (2.0 * step)
        if slope != 0.0 and math.isfinite(slope):
            cand = F_hat - gap(F_hat) / slope
            if math.isfinite(cand) and abs(gap(cand)) < abs(gap(F_hat)):
                F_hat = cand

    pr, inv = _responses(params, model, kind, F_hat)
    residual = pr.hp + inv.hs

    # operational uniqueness check: the gap changes sign around the root
    delta = 1e-4 * (1.0 + abs(F_hat))
    g_lo, g_hi = gap(F_hat - delta), gap(F_hat + delta)
    if g_lo * g_hi > 0.0 and min(abs(g_lo), abs(g_hi)) > 1e-6 * (1.0 + abs(residual)):
        raise NoConvergence(
            f"clearing gap does not change sign around F={F_hat:g}: {g_lo:g}, {g_hi:g}"
        )

    mom = terminal_moments(params, model, pr.alpha)
    p0 = float(spot_price_initial(params, pr.alpha))
    return Equilibrium(
        alpha=pr.alpha,
        h=pr.hp,
        F=F_hat,
        P0=p0,
        E_PT=mom.mean,
        forward_premium=forward_premium(mom.mean, F_hat),
        convenience_yield=convenience_yield(p0, F_hat, params.R, params.eps),
        expected_price_change=expected_price_change(p0, mom.mean),
        clearing_residual=residual,
        producer_utility=pr.utility,
        investor_utility=inv.utility,
    )


def forward_price_zero_storage(params: MarketParams, model: LevyModel) -> float:
    """Equilibrium forward price when the stored amount is zero (Brownian).

    F = E[P_T] - (gp gbar / (gp + gbar)) Var[P_T]
        (mpr rho sqrt(T) / (gbar sqrt(Var[P_T])) + piT).
    A pre-existing hedge h' adds to piT, consistent with the primed
    coefficients of the producers' problem.
    """
    mom = terminal_moments(params, model, 0.0)
    if mom.variance <= 0.0:
        raise ZeroVariance("Var[P_T] must be positive")
    _, rho, mpr = investor._stock_stats(model)
    gbar = params.gamma_s * (1.0 - rho * rho)
    gp = params.gamma_p
    h_prev = params.legacy_hedge[0] if params.legacy_hedge is not None else 0.0
    T = model.horizon
    mix = gp * gbar / (gp + gbar)
    return mom.mean - mix * mom.variance * (
        mpr * rho * math.sqrt(T) / (gbar * math.sqrt(mom.variance)) + params.piT + h_prev
    )


def convenience_yield(P0: float, F: float, R: float, eps: float) -> float:
    """Implicit inventory benefit y solving F = P0 (1+R)/(1-eps) - y P0."""
    if eps >= 1.0:
        raise DegenerateStorageCost(f"eps={eps:g} >= 1 makes the carry relation singular")
    if P0 <= 0.0:
        raise ZeroSpot(f"spot price must be positive, got {P0:g}")
    return (1.0 + R) / (1.0 - eps) - F / P0


def forward_premium(E_PT: float, F: float) -> float:
    """Normal-backwardation premium (E[P_T] - F) / F."""
    if F == 0.0:
        raise ZeroForward("forward price is zero")
    return (E_PT - F) / F


def expected_price_change(P0: float, E_PT: float) -> float:
    """Expected relative price move (E[P_T] - P0) / P0."""
    if P0 == 0.0:
        raise ZeroSpot("spot price is zero")
    return (E_PT - P0) / P0


@dataclass(frozen=True)
class NoForwardOutcome:
    alpha: float
    P0: float
    E_PT: float
    expected_price_change: float


def solve_no_forward(params: MarketParams, model: LevyModel) -> NoForwardOutcome:
    """Benchmark without a forward market: storage choice alone."""
    alpha, _ = producer.no_forward(params, model)
    p0 = float(spot_price_initial(params, alpha))
    mean = terminal_moments(params, model, alpha).mean
    return NoForwardOutcome(
        alpha=alpha,
        P0=p0,
        E_PT=mean,
        expected_price_change=expected_price_change(p0, mean),
    )
