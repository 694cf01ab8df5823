"""Producers' problem: optimal storage and forward hedge at a given price.

The producers choose a storage amount alpha in [0, pi0] and a forward
position hp maximizing the certainty equivalent of their terminal
position.  Under Brownian demand the problem is a concave quadratic with
a closed-form solution; a common jump in the demand leg adds an
exponential term to the first-order conditions, which still reduce to
one scalar equation in hp because the jump enters both equations through
the same factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotConcave
from .levy import LevyModel, project
from .market import MarketParams, hedge_ratio, inverse_demand, quad_revenue, terminal_moments
from .roots import bisect, expand_bracket, guarded_newton, newton_polish

__all__ = [
    "ProducerResponse",
    "producer_utility",
    "d_constants",
    "best_response_bm",
    "best_response_jd",
    "no_forward",
]


@dataclass(frozen=True)
class ProducerResponse:
    """Optimal (alpha, hp), the certainty equivalent and the constants used."""

    alpha: float
    hp: float
    utility: float
    clamped: bool
    d: tuple[float, float, float, float, float, float]


def _legacy(params: MarketParams) -> tuple[float, float]:
    return params.legacy_hedge if params.legacy_hedge is not None else (0.0, 0.0)


def producer_utility(params: MarketParams, model: LevyModel, alpha, hp, F):
    """Certainty equivalent of the producers' position at (alpha, hp).

    Equals the deterministic revenue minus kappa2(-gamma_p * ell) * T /
    gamma_p, where ell is the position's loading on the demand shock.  A
    pre-existing hedge in the parameters adds its payoff and shifts ell.
    Accepts arrays for alpha and hp.
    """
    q = quad_revenue(params, alpha, hp, F)
    ell = hedge_ratio(params, alpha, hp)
    h_prev, f_prev = _legacy(params)
    if h_prev != 0.0 or f_prev != 0.0:
        q = q + h_prev * (
            inverse_demand(params, params.piT)
            - alpha * (1.0 - params.eps) / params.m
            - f_prev
        )
        ell = ell + h_prev / params.m
    t2 = project(model, model.u_demand)
    v = -params.gamma_p * ell
    k2 = v * t2.drift + 0.5 * v * v * t2.variance
    for x, lam in t2.jump_atoms:
        vx = np.minimum(v * x, 700.0)
        k2 = k2 + lam * (np.exp(vx) - 1.0 - v * x)
    return q - model.horizon / params.gamma_p * k2


def d_constants(params: MarketParams, variance_bm: float, F: float):
    """Coefficients of the quadratic programming form of the utility.

    `variance_bm` is the Gaussian part of Var[P_T].  With a pre-existing
    hedge (h', F') the linear coefficients become the primed versions:
    piT is replaced by piT + h' inside the risk-aversion terms and the
    alpha coefficient loses (1 - eps) h' / m.
    """
    mu, m, pi0, piT = params.mu, params.m, params.pi0, params.piT
    eps, R, gp = params.eps, params.R, params.gamma_p
    h_prev, f_prev = _legacy(params)
    pit_eff = piT + h_prev
    d1 = -((1.0 + R + (1.0 - eps) ** 2) / m + 0.5 * gp * (1.0 - eps) ** 2 * variance_bm)
    d2 = (
        (2.0 * (1.0 + R) * pi0 - (1.0 - eps) * (2.0 * piT + h_prev) - (R + eps) * mu) / m
        - gp * (1.0 - eps) * pit_eff * variance_bm
    )
    d3 = -(1.0 - eps) / m - gp * (1.0 - eps) * variance_bm
    d4 = -0.5 * gp * variance_bm
    d5 = -(F - (mu - piT) / m) - gp * pit_eff * variance_bm
    d6 = (
        piT * (mu - piT) / m
        + pi0 * (mu - pi0) * (1.0 + R) / m
        + h_prev * ((mu - piT) / m - f_prev)
        - 0.5 * gp * pit_eff**2 * variance_bm
    )
    return d1, d2, d3, d4, d5, d6


def _check_concave_quadratic(d) -> None:
    d1, _, d3, d4 = d[0], d[1], d[2], d[3]
    disc = 4.0 * d1 * d4 - d3 * d3
    if not (d1 < 0.0 and d4 < 0.0 and disc > 0.0):
        raise NotConcave(
            f"second-order conditions fail: d1={d1:g}, d4={d4:g}, 4*d1*d4-d3^2={disc:g}"
        )


def best_response_bm(params: MarketParams, model: LevyModel, F: float) -> ProducerResponse:
    """Closed-form best response for Brownian demand.

    alpha* = (d3 d5 - 2 d2 d4) / (4 d1 d4 - d3^2) clamped to [0, pi0];
    hp is re-optimized at the clamped alpha.
    """
    variance = terminal_moments(params, model, 0.0).variance
    d = d_constants(params, variance, F)
    _check_concave_quadratic(d)
    d1, d2, d3, d4, d5, _ = d
    alpha_star = (d3 * d5 - 2.0 * d2 * d4) / (4.0 * d1 * d4 - d3 * d3)
    alpha = min(max(alpha_star, 0.0), params.pi0)
    hp = -(alpha * d3 + d5) / (2.0 * d4)
    return ProducerResponse(
        alpha=alpha,
        hp=hp,
        utility=float(producer_utility(params, model, alpha, hp, F)),
        clamped=alpha != alpha_star,
        d=d,
    )


def _jd_parts(params: MarketParams, model: LevyModel, F: float):
    """Shared pieces of the jump-diffusion first-order conditions."""
    t2 = project(model, model.u_demand)
    T, m = model.horizon, params.m
    variance_bm = t2.variance * T / m**2
    d = d_constants(params, variance_bm, F)
    h_prev, _ = _legacy(params)
    gp, eps = params.gamma_p, params.eps

    def ell_eff(alpha: float, hp: float) -> float:
        return (alpha * (1.0 - eps) + hp + params.piT + h_prev) / m

    def forcing(ell: float) -> float:
        # d kappa2 / dv at -gamma_p ell, net of the Gaussian part the d's absorb
        out = t2.drift
        for x, lam in t2.jump_atoms:
            out += lam * x * math.expm1(-gp * x * ell)
        return out

    def forcing_d(ell: float) -> float:
        out = 0.0
        for x, lam in t2.jump_atoms:
            out += -gp * lam * x * x * math.exp(min(-gp * x * ell, 700.0))
        return out

    return t2, d, ell_eff, forcing, forcing_d


def no_forward(params: MarketParams, model: LevyModel) -> tuple[float, float]:
    """Optimal storage and utility when no forward contract exists (hp = 0)."""
    t2, d, ell_eff, forcing, forcing_d = _jd_parts(params, model, 0.0)
    d1, d2 = d[0], d[1]
    if d1 >= 0.0:
        raise NotConcave(f"d1={d1:g} must be negative")
    T, m, eps = model.horizon, params.m, params.eps
    jump_active = t2.drift != 0.0 or any(x != 0.0 for x, _ in t2.jump_atoms)
    if not jump_active:
        alpha = min(max(-d2 / (2.0 * d1), 0.0), params.pi0)
    else:
        coef = T * (1.0 - eps) / m

        def foc(a: float) -> float:
            return 2.0 * d1 * a + d2 + coef * forcing(ell_eff(a, 0.0))

        # foc is strictly decreasing in alpha, so the KKT solution is direct
        if foc(0.0) <= 0.0:
            alpha = 0.0
        elif foc(params.pi0) >= 0.0:
            alpha = params.pi0
        else:
            alpha = bisect(foc, 0.0, params.pi0, foc(0.0), foc(params.pi0), xtol=1e-14 * (1.0 + params.pi0))
            alpha = newton_polish(
                foc,
                lambda a: 2.0 * d1 + coef * forcing_d(ell_eff(a, 0.0)) * (1.0 - eps) / m,
                alpha,
            )
    return alpha, float(producer_utility(params, model, alpha, 0.0, 0.0))


def _hessian_ok(d1, d3, d4, jump_curv, eps) -> bool:
    # jump_curv = T * forcing'(ell) / m^2 <= 0 at the candidate point
    h11 = 2.0 * d1 + (1.0 - eps) ** 2 * jump_curv
    h12 = d3 + (1.0 - eps) * jump_curv
    h22 = 2.0 * d4 + jump_curv
    return h11 < 0.0 and h22 < 0.0 and h11 * h22 - h12 * h12 > 0.0


def best_response_jd(params: MarketParams, model: LevyModel, F: float) -> ProducerResponse:
    """Best response under jump-diffusion demand.

    The two first-order conditions share the jump term, so alpha and hp
    are linearly related; the remaining scalar equation in hp is solved
    by damped Newton with a bisection fallback.  A clamped alpha
    re-solves the hp equation alone at the boundary.
    """
    t2, d, ell_eff, forcing, forcing_d = _jd_parts(params, model, F)
    d1, d2, d3, d4, d5, _ = d
    T, m, eps = model.horizon, params.m, params.eps
    scale = 1.0 + abs(d2) + abs(d5)
    ftol = 1e-11 * scale

    denom = 2.0 * d1 - (1.0 - eps) * d3  # = -(2(1+R) + (1-eps)^2)/m < 0
    A = (2.0 * (1.0 - eps) * d4 - d3) / denom
    B = ((1.0 - eps) * d5 - d2) / denom

    def foc_hp(alpha: float, hp: float) -> float:
        return d3 * alpha + 2.0 * d4 * hp + d5 + T / m * forcing(ell_eff(alpha, hp))

    def foc_alpha(alpha: float, hp: float) -> float:
        return 2.0 * d1 * alpha + d2 + d3 * hp + T * (1.0 - eps) / m * forcing(
            ell_eff(alpha, hp)
        )

    def g(hp: float) -> float:
        return foc_hp(A * hp + B, hp)

    def gprime(hp: float) -> float:
        ell = ell_eff(A * hp + B, hp)
        return d3 * A + 2.0 * d4 + T / m * forcing_d(ell) * ((1.0 - eps) * A + 1.0) / m

    if t2.cumulant_d2(0.0) <= 0.0:
        raise NotConcave("terminal price is deterministic, no interior hedge")

    # start from the solution of the quadratic part alone when it is concave
    start = 0.0
    if d4 < 0.0 and 4.0 * d1 * d4 - d3 * d3 > 0.0:
        a_quad = (d3 * d5 - 2.0 * d2 * d4) / (4.0 * d1 * d4 - d3 * d3)
        start = -(a_quad * d3 + d5) / (2.0 * d4)
    try:
        hp_star = guarded_newton(g, gprime, start, ftol=ftol)
    except NoConvergence:
        width = params.piT + params.pi0 + 1.0
        lo, hi, flo, fhi = expand_bracket(g, -width, width)
        hp_star = bisect(g, lo, hi, flo, fhi, xtol=1e-13 * (1.0 + width))
        hp_star = newton_polish(g, gprime, hp_star)

    alpha_star = A * hp_star + B
    clamped = not (0.0 <= alpha_star <= params.pi0)
    if clamped:
        alpha = min(max(alpha_star, 0.0), params.pi0)

        def g_fixed(hp: float) -> float:
            return foc_hp(alpha, hp)

        def g_fixed_d(hp: float) -> float:
            return 2.0 * d4 + T / m * forcing_d(ell_eff(alpha, hp)) / m

        try:
            hp = guarded_newton(g_fixed, g_fixed_d, hp_star, ftol=ftol)
        except NoConvergence:
            width = params.piT + params.pi0 + abs(hp_star) + 1.0
            lo, hi, flo, fhi = expand_bracket(g_fixed, -width, width)
            hp = bisect(g_fixed, lo, hi, flo, fhi, xtol=1e-13 * (1.0 + width))
            hp = newton_polish(g_fixed, g_fixed_d, hp)
    else:
        alpha, hp = alpha_star, hp_star
        ra, rh = foc_alpha(alpha, hp), foc_hp(alpha, hp)
        if abs(ra) > 1e-10 * scale or abs(rh) > 1e-10 * scale:
            raise NoConvergence(f"FOC residuals {ra:g}, {rh:g} exceed {1e-10 * scale:g}")

    jump_curv = T * forcing_d(ell_eff(alpha, hp)) / m**2
    if not _hessian_ok(d1, d3, d4, jump_curv, eps):
        raise NotConcave("utility Hessian not negative definite at the solution")

    return ProducerResponse(
        alpha=alpha,
        hp=hp,
        utility=float(producer_utility(params, model, alpha, hp, F)),
        clamped=clamped,
        d=d,
    )
