"""Investors' problem: forward position with a continuously traded stock.

For a candidate forward position hs the stock-trading part of the
investors' utility is available in closed form: tilt the factor process
by the exponential of the commodity exposure, project onto the stock
factor, pass to the exponential transform and locate the stationary
point eta* of its cumulant.  The value of optimal stock trading is then
-T/gamma_s times that cumulant at eta*, which is also the relative
entropy of the minimal-entropy martingale measure over gamma_s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateCorrelation, NoConvergence, NotConcave, ZeroVariance
from .levy import LevyModel, UniTriplet, cumulant_demand, esscher_root, exp_transform, project
from .market import MarketParams, inverse_demand, terminal_moments
from .roots import expand_bracket, illinois

__all__ = [
    "InvestorResponse",
    "investor_utility",
    "best_response_bm",
    "best_response_jd",
    "entropy_value",
]


@dataclass(frozen=True)
class InvestorResponse:
    """Optimal hs with the Esscher root, entropy and utility attained."""

    hs: float
    eta_star: float
    entropy: float
    utility: float


def _check_alpha(params: MarketParams, alpha: float) -> None:
    if not 0.0 <= alpha <= params.pi0:
        from .errors import AlphaOutOfRange

        raise AlphaOutOfRange(f"alpha must lie in [0, {params.pi0}]")


def _stock_leg(params: MarketParams, model: LevyModel, hs: float, hint: float | None = None):
    """Esscher root and tilted-transformed cumulant value for a given hs.

    Evaluates the composition esscher_tilt -> project(u_stock) ->
    exp_transform arithmetically (the covariance never changes under the
    tilt, so rebuilding full models per candidate hs would only repeat
    validation work); a test pins this against the public operations.
    """
    zeta = params.gamma_s * hs / params.m
    u1, u2, c = model.u_stock, model.u_demand, model.covariance
    b1 = float(u1 @ model.drift) - zeta * float(u1 @ c @ u2)
    atoms = []
    for x, lam in model.jump_atoms:
        w = math.exp(min(-zeta * float(u2 @ x), 700.0))
        x1 = float(u1 @ x)
        b1 += lam * x1 * (w - 1.0)
        atoms.append((x1, lam * w))
    t_exp = exp_transform(UniTriplet(b1, float(u1 @ c @ u1), tuple(atoms)))
    eta = esscher_root(t_exp, hint=hint)
    return eta, t_exp.cumulant(eta)


def investor_utility(
    params: MarketParams,
    model: LevyModel,
    alpha: float,
    hs: float,
    F: float,
    _eta_hint: float | None = None,
) -> float:
    """Utility of holding hs forwards while trading the stock optimally.

    Returns -(T/gamma_s) (ktilde(eta*) + kappa2(-gamma_s hs / m)) plus hs
    times the deterministic part of P_T - F; the demand-shock mean enters
    through kappa2, so the deterministic part coincides with E[P_T] in
    the usual zero-mean-shock parameterization.
    """
    _check_alpha(params, alpha)
    T, gs, m = model.horizon, params.gamma_s, params.m
    _, ktilde = _stock_leg(params, model, hs, hint=_eta_hint)
    k2 = cumulant_demand(model, -gs * hs / m)
    det_price = inverse_demand(params, params.piT) - alpha * (1.0 - params.eps) / m
    return -(T / gs) * (ktilde + k2) + hs * (det_price - F)


def entropy_value(params: MarketParams, model: LevyModel, hs: float) -> float:
    """Relative entropy of the entropy-minimizing martingale measure."""
    _, ktilde = _stock_leg(params, model, hs)
    return -ktilde * model.horizon


def _stock_stats(model: LevyModel):
    t1 = project(model, model.u_stock)
    sigma1 = math.sqrt(t1.variance)
    sigma2 = math.sqrt(project(model, model.u_demand).variance)
    c12 = float(model.u_stock @ model.covariance @ model.u_demand)
    if sigma1 > 0.0 and sigma2 > 0.0:
        rho = c12 / (sigma1 * sigma2)
    else:
        rho = 0.0
    if sigma1 > 0.0:
        mpr = t1.drift / sigma1 + 0.5 * sigma1
    elif t1.drift == 0.0:
        mpr = 0.0
    else:
        raise ZeroVariance("deterministic stock leg with nonzero drift")
    return sigma1, rho, mpr


def best_response_bm(
    params: MarketParams, model: LevyModel, alpha: float, F: float
) -> InvestorResponse:
    """Closed-form optimal forward position for the Brownian model.

    hs = (E[P_T] - F) / (gbar Var) - mpr rho sqrt(T) / (gbar sqrt(Var))
    with gbar = gamma_s (1 - rho^2).
    """
    _check_alpha(params, alpha)
    mom = terminal_moments(params, model, alpha)
    if mom.variance <= 0.0:
        raise ZeroVariance("Var[P_T] must be positive")
    _, rho, mpr = _stock_stats(model)
    if 1.0 - rho * rho <= 0.0:
        raise DegenerateCorrelation("|rho| = 1 leaves no unhedgeable risk")
    gbar = params.gamma_s * (1.0 - rho * rho)
    T = model.horizon
    hs = (mom.mean - F) / (gbar * mom.variance) - mpr * rho * math.sqrt(T) / (
        gbar * math.sqrt(mom.variance)
    )
    eta, ktilde = _stock_leg(params, model, hs)
    return InvestorResponse(
        hs=hs,
        eta_star=eta,
        entropy=-ktilde * T,
        utility=investor_utility(params, model, alpha, hs, F, _eta_hint=eta),
    )


def best_response_jd(
    params: MarketParams, model: LevyModel, alpha: float, F: float
) -> InvestorResponse:
    """Optimal forward position under jump-diffusion dynamics.

    Solves g'(hs) = 0 where g is the utility; the derivative is taken by
    central differences (eta* is re-solved at every candidate) and the
    root is located by bracket expansion plus bisection around the
    Brownian-style starting guess.
    """
    _check_alpha(params, alpha)
    mom = terminal_moments(params, model, alpha)
    if mom.variance <= 0.0:
        raise ZeroVariance("Var[P_T] must be positive")
    _, rho, mpr = _stock_stats(model)
    if 1.0 - rho * rho <= 0.0:
        raise DegenerateCorrelation("|rho| = 1 leaves no unhedgeable risk")
    gbar = params.gamma_s * (1.0 - rho * rho)
    T = model.horizon

    hint: list[float | None] = [None]

    def g(hs: float) -> float:
        val = investor_utility(params, model, alpha, hs, F, _eta_hint=hint[0])
        hint[0], _ = _stock_leg(params, model, hs, hint=hint[0])
        return val

    def gprime(hs: float) -> float:
        h = 1e-6 * (1.0 + abs(hs))
        return (g(hs + h) - g(hs - h)) / (2.0 * h)

    guess = (mom.mean - F) / (gbar * mom.variance) - mpr * rho * math.sqrt(T) / (
        gbar * math.sqrt(mom.variance)
    )
    step = 1.0 + abs(guess)
    tol = 1e-8 * (1.0 + abs(F))
    lo, hi, flo, fhi = expand_bracket(gprime, guess - step, guess + step)
    hs = illinois(gprime, lo, hi, flo, fhi, ftol=0.01 * tol,
                  xtol=1e-12 * (1.0 + abs(guess)))

    resid = gprime(hs)
    if abs(resid) > tol:
        raise NoConvergence(f"stationarity residual {resid:g} exceeds {tol:g}")
    h = 1e-4 * (1.0 + abs(hs))
    curv = (g(hs + h) - 2.0 * g(hs) + g(hs - h)) / (h * h)
    if not curv < 0.0:
        raise NotConcave(f"second difference {curv:g} is not negative at hs={hs:g}")

    eta, ktilde = _stock_leg(params, model, hs)
    return InvestorResponse(
        hs=hs,
        eta_star=eta,
        entropy=-ktilde * T,
        utility=investor_utility(params, model, alpha, hs, F, _eta_hint=eta),
    )
