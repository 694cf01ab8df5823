"""Scalar root finding: bracket expansion, bisection, guarded Newton.

All solvers in this package reduce to monotone scalar equations, so plain
bisection on an expanded bracket is globally safe and Newton steps are used
only to polish or accelerate.
"""
from __future__ import annotations

import math
from typing import Callable

from .errors import NoBracket, NoConvergence

__all__ = ["expand_bracket", "bisect", "illinois", "newton_polish", "guarded_newton"]


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    max_doublings: int = 60,
) -> tuple[float, float, float, float]:
    """Grow [lo, hi] symmetrically by doubling until f changes sign.

    Returns (lo, hi, f(lo), f(hi)). Raises NoBracket when the budget is
    exhausted, reporting the last attempted interval.
    """
    flo, fhi = f(lo), f(hi)
    for _ in range(max_doublings):
        if flo == 0.0 or fhi == 0.0 or (flo < 0.0) != (fhi < 0.0):
            return lo, hi, flo, fhi
        half = 0.5 * (hi - lo)
        lo, hi = lo - half, hi + half
        flo, fhi = f(lo), f(hi)
    if flo == 0.0 or fhi == 0.0 or (flo < 0.0) != (fhi < 0.0):
        return lo, hi, flo, fhi
    raise NoBracket(
        f"no sign change on [{lo:g}, {hi:g}]: f(lo)={flo:g}, f(hi)={fhi:g}"
    )


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    flo: float,
    fhi: float,
    xtol: float,
    max_iter: int = 200,
) -> float:
    """Bisection on a sign-changing bracket down to width xtol."""
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise NoBracket(f"endpoints do not bracket a root: {flo:g}, {fhi:g}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid == lo or mid == hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def illinois(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    flo: float,
    fhi: float,
    ftol: float,
    xtol: float = 0.0,
    max_iter: int = 100,
) -> float:
    """Regula falsi with Illinois damping on a sign-changing bracket.

    Converges superlinearly on smooth monotone functions while retaining
    the bracket, so it needs far fewer evaluations than bisection when
    each one is expensive.
    """
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise NoBracket(f"endpoints do not bracket a root: {flo:g}, {fhi:g}")
    side = 0
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        x = (lo * fhi - hi * flo) / (fhi - flo)
        if not math.isfinite(x) or not lo <= x <= hi:
            x = 0.5 * (lo + hi)
        fx = f(x)
        if abs(fx) <= ftol or fx == 0.0:
            return x
        if (fx < 0.0) == (flo < 0.0):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo <= xtol:
            return x
    raise NoConvergence(f"illinois exhausted {max_iter} iterations, |f|={abs(fx):g}")


def newton_polish(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    x: float,
    steps: int = 3,
) -> float:
    """A few undamped Newton steps from an already-converged estimate.

    Steps that do not reduce |f| are discarded, so the input estimate is
    never made worse.
    """
    fx = abs(f(x))
    for _ in range(steps):
        d = fprime(x)
        if d == 0.0 or not math.isfinite(d):
            break
        x_new = x - f(x) / d
        if not math.isfinite(x_new):
            break
        fx_new = abs(f(x_new))
        if fx_new >= fx:
            break
        x, fx = x_new, fx_new
    return x


def guarded_newton(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    x0: float,
    ftol: float,
    max_iter: int = 50,
    max_damping: int = 30,
) -> float:
    """Damped Newton iteration; raises NoConvergence instead of diverging.

    Each step is halved (up to max_damping times) until |f| decreases,
    which keeps the iteration inside the basin for the stiff exponential
    terms that occur in the jump-diffusion first-order conditions.
    """
    fx = f(x0)
    x = x0
    for _ in range(max_iter):
        if abs(fx) <= ftol:
            return x
        d = fprime(x)
        if d == 0.0 or not math.isfinite(d):
            raise NoConvergence(f"flat derivative at x={x:g}")
        step = -fx / d
        for _ in range(max_damping):
            x_new = x + step
            fx_new = f(x_new)
            if math.isfinite(fx_new) and abs(fx_new) < abs(fx):
                break
            step *= 0.5
        else:
            raise NoConvergence(f"damping exhausted at x={x:g}, |f|={abs(fx):g}")
        x, fx = x_new, fx_new
    if abs(fx) <= ftol:
        return x
    raise NoConvergence(f"no convergence after {max_iter} iterations, |f|={abs(fx):g}")
