"""Bivariate Levy factor process: cumulants, Esscher tilts, projections.

The driving process Z is specified by a characteristic triplet (drift,
covariance, finite list of jump atoms) together with two projection
vectors selecting the stock-market factor Y = <u_stock, Z> and the demand
factor X = <u_demand, Z_T>.  The drift is stored in the compensated-jump
convention, i.e. the cumulant generating function of Z_1 is

    k(u) = <u, b> + <u, c u>/2 + sum_j lam_j (exp(<u, x_j>) - 1 - <u, x_j>),

which exists for every u because the jump measure has finitely many atoms.
Two-leg jump-diffusion dynamics of the form

    Y_t = b1 t + s1 W^1_t + eta1 N_t,    X_t = b2 t + s2 W^2_t + eta2 N_t,

with a common Poisson process N of rate lam and b_i = bbar_i - lam eta_i
are produced by the `jump_diffusion_model` constructor, which takes the
compensated drifts bbar_i directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Degenerate, NoRoot
from .roots import bisect, expand_bracket, newton_polish

__all__ = [
    "LevyModel",
    "UniTriplet",
    "cumulant",
    "cumulant_demand",
    "esscher_tilt",
    "project",
    "exp_transform",
    "esscher_root",
    "brownian_model",
    "jump_diffusion_model",
]

_EXP_CAP = 700.0  # math.exp overflows just above 709; saturate instead


def _exp(x: float) -> float:
    return math.exp(min(x, _EXP_CAP))


@dataclass(frozen=True)
class LevyModel:
    """Characteristic triplet of Z plus factor projections and horizon."""

    drift: np.ndarray
    covariance: np.ndarray
    jump_atoms: tuple[tuple[np.ndarray, float], ...]
    u_stock: np.ndarray
    u_demand: np.ndarray
    horizon: float

    def __post_init__(self):
        b = np.asarray(self.drift, dtype=float).reshape(2)
        c = np.asarray(self.covariance, dtype=float).reshape(2, 2)
        if not np.allclose(c, c.T, atol=1e-12, rtol=0.0):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(c).min() < -1e-12:
            raise ValueError("covariance must be nonnegative definite")
        atoms = []
        for point, intensity in self.jump_atoms:
            if intensity <= 0.0:
                raise ValueError("jump intensities must be strictly positive")
            atoms.append((np.asarray(point, dtype=float).reshape(2), float(intensity)))
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        object.__setattr__(self, "drift", b)
        object.__setattr__(self, "covariance", c)
        object.__setattr__(self, "jump_atoms", tuple(atoms))
        object.__setattr__(self, "u_stock", np.asarray(self.u_stock, dtype=float).reshape(2))
        object.__setattr__(self, "u_demand", np.asarray(self.u_demand, dtype=float).reshape(2))
        for arr in (self.drift, self.covariance, self.u_stock, self.u_demand):
            arr.setflags(write=False)


@dataclass(frozen=True)
class UniTriplet:
    """Univariate triplet (same compensated-drift convention as LevyModel)."""

    drift: float
    variance: float
    jump_atoms: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError("variance must be nonnegative")
        if any(lam <= 0.0 for _, lam in self.jump_atoms):
            raise ValueError("jump intensities must be strictly positive")

    def cumulant(self, v: float) -> float:
        """k(v) = v*drift + v^2*variance/2 + sum lam (e^{vx} - 1 - vx)."""
        out = v * self.drift + 0.5 * v * v * self.variance
        for x, lam in self.jump_atoms:
            out += lam * (_exp(v * x) - 1.0 - v * x)
        return out

    def cumulant_d1(self, v: float) -> float:
        out = self.drift + v * self.variance
        for x, lam in self.jump_atoms:
            out += lam * x * (_exp(v * x) - 1.0)
        return out

    def cumulant_d2(self, v: float) -> float:
        out = self.variance
        for x, lam in self.jump_atoms:
            out += lam * x * x * _exp(v * x)
        return out


def cumulant(model: LevyModel, u) -> float:
    """Cumulant generating function of Z_1 evaluated at the 2-vector u."""
    u = np.asarray(u, dtype=float).reshape(2)
    out = float(u @ model.drift) + 0.5 * float(u @ model.covariance @ u)
    for x, lam in model.jump_atoms:
        ux = float(u @ x)
        out += lam * (_exp(ux) - 1.0 - ux)
    return out


def cumulant_demand(model: LevyModel, v: float) -> float:
    """Cumulant of the demand factor per unit time, k2(v) = k(v*u_demand)."""
    return cumulant(model, v * model.u_demand)


def esscher_tilt(model: LevyModel, xi) -> LevyModel:
    """Exponential change of measure by e^{<xi, Z_T>}; Z stays Levy.

    The tilted drift is b + c xi + sum lam_j x_j (e^{<xi,x_j>} - 1), the
    covariance is unchanged and each atom intensity is scaled by
    e^{<xi,x_j>}, so the tilted cumulant satisfies
    k_tilt(v) = k(v + xi) - k(xi).
    """
    xi = np.asarray(xi, dtype=float).reshape(2)
    drift = model.drift + model.covariance @ xi
    atoms = []
    for x, lam in model.jump_atoms:
        w = _exp(float(xi @ x))
        drift = drift + lam * x * (w - 1.0)
        atoms.append((x, lam * w))
    return LevyModel(
        drift=drift,
        covariance=model.covariance,
        jump_atoms=tuple(atoms),
        u_stock=model.u_stock,
        u_demand=model.u_demand,
        horizon=model.horizon,
    )


def project(model: LevyModel, u) -> UniTriplet:
    """Triplet of the univariate process <u, Z> (pushforward of the atoms)."""
    u = np.asarray(u, dtype=float).reshape(2)
    return UniTriplet(
        drift=float(u @ model.drift),
        variance=float(u @ model.covariance @ u),
        jump_atoms=tuple((float(u @ x), lam) for x, lam in model.jump_atoms),
    )


def exp_transform(t: UniTriplet) -> UniTriplet:
    """Triplet of the process whose stochastic exponential equals e^Y.

    Drift becomes k(1), the Gaussian variance is unchanged and every atom
    x maps to e^x - 1 with its intensity preserved.
    """
    return UniTriplet(
        drift=t.cumulant(1.0),
        variance=t.variance,
        jump_atoms=tuple((math.expm1(x), lam) for x, lam in t.jump_atoms),
    )


def esscher_root(t_exp: UniTriplet, hint: float | None = None) -> float:
    """Stationary point of the cumulant of an exponential-transform triplet.

    Solves k'(eta) = 0.  k is strictly convex when the variance is positive
    or some atom sits away from zero, so the root is unique; a guarded
    Newton iteration from `hint` (or a curvature-based guess) is tried
    first and the globally safe fallback is bracket doubling from [-1, 1]
    plus bisection to 1e-13, finished with three Newton polish steps.

    Raises Degenerate when k is affine and NoRoot when k' has constant
    sign over the expanded bracket.
    """
    curv0 = t_exp.cumulant_d2(0.0)
    if curv0 == 0.0:
        # variance zero and all atoms at the origin: k(v) = v * drift
        raise Degenerate("cumulant is affine; no stationary point")
    d1, d2 = t_exp.cumulant_d1, t_exp.cumulant_d2
    scale = 1.0 + abs(d1(0.0))
    tol = 1e-12 * scale

    x = -d1(0.0) / curv0 if hint is None else hint
    fx = d1(x)
    for _ in range(40):
        if abs(fx) <= tol:
            return x
        dd = d2(x)
        if dd <= 0.0 or not math.isfinite(dd) or not math.isfinite(fx):
            break
        step = -fx / dd
        x_new = x + step
        fx_new = d1(x_new)
        tries = 0
        while (not math.isfinite(fx_new) or abs(fx_new) > abs(fx)) and tries < 30:
            step *= 0.5
            x_new = x + step
            fx_new = d1(x_new)
            tries += 1
        if tries >= 30:
            break
        x, fx = x_new, fx_new
    if abs(fx) <= tol:
        return x

    try:
        lo, hi, flo, fhi = expand_bracket(d1, -1.0, 1.0)
    except Exception as exc:
        raise NoRoot(f"derivative has constant sign: {exc}") from exc
    root = bisect(d1, lo, hi, flo, fhi, xtol=1e-13)
    root = newton_polish(d1, d2, root, steps=3)
    if abs(d1(root)) > tol:
        raise NoRoot(f"residual {d1(root):g} above tolerance {tol:g}")
    return root


def brownian_model(
    sigma_stock: float,
    sigma_demand: float,
    rho: float,
    mpr: float,
    horizon: float,
) -> LevyModel:
    """Correlated two-leg Brownian model.

    The stock leg drift is set from the market price of risk,
    b1 = sigma_stock * mpr - sigma_stock^2 / 2, and the demand leg is
    driftless so the demand shock has zero mean.
    """
    b1 = sigma_stock * mpr - 0.5 * sigma_stock**2
    cov = [
        [sigma_stock**2, rho * sigma_stock * sigma_demand],
        [rho * sigma_stock * sigma_demand, sigma_demand**2],
    ]
    return LevyModel(
        drift=np.array([b1, 0.0]),
        covariance=np.array(cov),
        jump_atoms=(),
        u_stock=np.array([1.0, 0.0]),
        u_demand=np.array([0.0, 1.0]),
        horizon=horizon,
    )


def jump_diffusion_model(
    sigma_stock: float,
    sigma_demand: float,
    rho: float,
    intensity: float,
    jump_stock: float,
    jump_demand: float,
    stock_drift: float,
    horizon: float,
    demand_drift: float = 0.0,
) -> LevyModel:
    """Two-leg jump diffusion with a common Poisson shock.

    `stock_drift` / `demand_drift` are the compensated drifts bbar_i; the
    uncompensated path drift of leg i is bbar_i - intensity * jump_i.  A
    zero intensity yields a plain Brownian model.
    """
    cov = [
        [sigma_stock**2, rho * sigma_stock * sigma_demand],
        [rho * sigma_stock * sigma_demand, sigma_demand**2],
    ]
    atoms: tuple = ()
    if intensity > 0.0:
        atoms = ((np.array([jump_stock, jump_demand]), intensity),)
    return LevyModel(
        drift=np.array([stock_drift, demand_drift]),
        covariance=np.array(cov),
        jump_atoms=atoms,
        u_stock=np.array([1.0, 0.0]),
        u_demand=np.array([0.0, 1.0]),
        horizon=horizon,
    )
