"""Brute-force verification: exact terminal sampling, Monte Carlo
certainty equivalents and grid-search best responses.

These routines never use the closed-form optimizers; they evaluate the
utility surfaces directly so tests can compare optimizer output against
an independent maximization, and positions against simulated certainty
equivalents.  Sampling is exact in distribution (no time stepping) since
only terminal laws enter the two-date market.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EstimatorOverflow
from .investor import investor_utility
from .levy import LevyModel
from .market import MarketParams, terminal_moments
from .producer import producer_utility

__all__ = [
    "McConfig",
    "McEstimate",
    "sample_terminal",
    "mc_certainty_equivalent",
    "grid_best_response",
    "oracle_equilibrium",
]


@dataclass(frozen=True)
class McConfig:
    """Sample count, Philox seed (counter-based, splittable) and antithetics."""

    n_samples: int
    seed: int
    antithetic: bool = False

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("n_samples must be at least 2")


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float


def sample_terminal(model: LevyModel, cfg: McConfig) -> tuple[np.ndarray, np.ndarray]:
    """Draw (x, y) = (<u_demand, Z_T>, <u_stock, Z_T>) exactly.

    Z_T is Gaussian with covariance c*T around drift*T plus, per atom, a
    Poisson(lam*T) number of jumps net of the compensator lam*T*x.
    Antithetic pairing mirrors the Gaussian component only.
    """
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    T, n = model.horizon, cfg.n_samples
    w, vecs = np.linalg.eigh(model.covariance * T)
    sqrt_cov = vecs * np.sqrt(np.clip(w, 0.0, None))
    if cfg.antithetic:
        half = (n + 1) // 2
        g = rng.standard_normal((half, 2))
        g = np.vstack([g, -g])[:n]
    else:
        g = rng.standard_normal((n, 2))
    z = model.drift * T + g @ sqrt_cov.T
    for atom, lam in model.jump_atoms:
        counts = rng.poisson(lam * T, n)
        z = z + np.outer(counts - lam * T, atom)
    return z @ model.u_demand, z @ model.u_stock


def mc_certainty_equivalent(
    model: LevyModel,
    position_evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray],
    gamma: float,
    cfg: McConfig,
    n_batches: int = 10,
) -> McEstimate:
    """-(1/gamma) log mean exp(-gamma * position) with log-sum-exp.

    The position evaluator receives the (x, y) sample arrays.  The
    standard error comes from batch means over contiguous blocks.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    x, y = sample_terminal(model, cfg)
    pos = np.broadcast_to(np.asarray(position_evaluator(x, y), dtype=float), x.shape)

    def ce(values: np.ndarray) -> float:
        wts = -gamma * values
        top = float(wts.max())
        if not math.isfinite(top):
            return -top / gamma if top != 0.0 else 0.0
        return float(-(top + math.log(np.mean(np.exp(wts - top)))) / gamma)

    value = ce(pos)
    if not math.isfinite(value):
        raise EstimatorOverflow(f"certainty equivalent overflowed, gamma={gamma:g}")
    n_batches = min(n_batches, cfg.n_samples // 2)
    edges = np.linspace(0, cfg.n_samples, n_batches + 1, dtype=int)
    batch_ces = [ce(pos[lo:hi]) for lo, hi in zip(edges[:-1], edges[1:])]
    stderr = float(np.std(batch_ces, ddof=1) / math.sqrt(n_batches))
    return McEstimate(value=value, stderr=stderr)


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = max(int(round((hi - lo) / step)), 1)
    return lo + step * np.arange(count + 1)


def grid_best_response(
    objective: Callable,
    bounds: Sequence[tuple[float, float]],
    steps: float | Sequence[float],
) -> tuple[float, ...]:
    """Exhaustive argmax of `objective` over a regular 1-D or 2-D grid.

    `steps` is the grid spacing (shared or per axis).  Ties break toward
    the lexicographically smallest point.  The objective is evaluated on
    arrays when it supports that, pointwise otherwise.
    """
    bounds = list(bounds)
    if np.isscalar(steps):
        steps = [float(steps)] * len(bounds)
    axes = [_axis(lo, hi, st) for (lo, hi), st in zip(bounds, steps)]
    if len(axes) == 1:
        try:
            vals = np.asarray(objective(axes[0]), dtype=float)
            if vals.shape != axes[0].shape:
                raise ValueError
        except Exception:
            vals = np.array([objective(float(a)) for a in axes[0]], dtype=float)
        return (float(axes[0][int(np.argmax(vals))]),)
    if len(axes) == 2:
        aa, hh = np.meshgrid(axes[0], axes[1], indexing="ij")
        try:
            vals = np.asarray(objective(aa, hh), dtype=float)
            if vals.shape != aa.shape:
                raise ValueError
        except Exception:
            vals = np.array(
                [[objective(float(a), float(h)) for h in axes[1]] for a in axes[0]]
            )
        flat = int(np.argmax(vals))  # C order: first max is lexicographically smallest
        i, j = np.unravel_index(flat, vals.shape)
        return (float(axes[0][i]), float(axes[1][j]))
    raise ValueError("only 1-D and 2-D grids are supported")


def _zoom_argmax(objective, bounds, n_stages=4, points=48, clip=None):
    """Repeatedly refine a grid around its argmax (objective is unimodal)."""
    bounds = [tuple(b) for b in bounds]
    best = None
    for _ in range(n_stages):
        steps = [(hi - lo) / points for lo, hi in bounds]
        if any(s <= 0.0 for s in steps):
            break
        best = grid_best_response(objective, bounds, steps)
        new_bounds = []
        for (lo, hi), st, centre, dim in zip(bounds, steps, best, range(len(bounds))):
            nlo, nhi = centre - 2.0 * st, centre + 2.0 * st
            if clip is not None and clip[dim] is not None:
                nlo = max(nlo, clip[dim][0])
                nhi = min(nhi, clip[dim][1])
            new_bounds.append((nlo, nhi))
        bounds = new_bounds
    return best


def oracle_equilibrium(
    params: MarketParams,
    model: LevyModel,
    f_step: float | None = None,
) -> tuple[float, float, float]:
    """Grid-search equilibrium: scan forward prices, grid both responses.

    For each F on the grid the producers' (alpha, hp) comes from a zoomed
    2-D grid over the utility surface and the investors' hs from a zoomed
    1-D grid; the returned F minimizes |hp + hs|.  The scan is refined
    once around the coarse minimum so the final resolution is `f_step`
    (default 1e-2 terminal standard deviations).
    """
    mom0 = terminal_moments(params, model, 0.0)
    sigma = math.sqrt(mom0.variance)
    if f_step is None:
        f_step = 1e-2 * sigma
    gp, gs = params.gamma_p, params.gamma_s
    mix = gp * gs / (gp + gs)
    h_prev = params.legacy_hedge[0] if params.legacy_hedge is not None else 0.0
    premium_scale = mix * mom0.variance * (params.piT + params.pi0 + abs(h_prev)) + 6.0 * sigma
    half = 1.5 * premium_scale
    hedge_width = 3.0 * (params.pi0 + params.piT + abs(h_prev)) + 10.0

    def gap_at(F: float) -> tuple[float, float, float]:
        pa, ph = _zoom_argmax(
            lambda a, h: producer_utility(params, model, a, h, F),
            [(0.0, params.pi0), (-hedge_width, hedge_width)],
            clip=[(0.0, params.pi0), None],
        )
        mean_a = terminal_moments(params, model, pa).mean

        def inv_util(hs: float) -> float:
            return investor_utility(params, model, pa, hs, F)

        (hs,) = _zoom_argmax(inv_util, [(-hedge_width, hedge_width)])
        return pa, ph, ph + hs

    def scan(f_values: np.ndarray) -> tuple[int, list]:
        results = [gap_at(float(f)) for f in f_values]
        best = int(np.argmin([abs(r[2]) for r in results]))
        return best, results

    coarse_step = max(f_step, 2.0 * half / 96.0)
    coarse = _axis(mom0.mean - half, mom0.mean + half, coarse_step)
    i, _ = scan(coarse)
    fine = _axis(coarse[i] - 2.0 * coarse_step, coarse[i] + 2.0 * coarse_step, f_step)
    j, results = scan(fine)
    alpha, hp, _ = results[j]
    return alpha, hp, float(fine[j])
