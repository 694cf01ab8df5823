"""Exception types raised by the equilibrium solvers and their inputs."""


class ForwardEqError(Exception):
    """Base class for all errors raised by this package."""


class AlphaOutOfRange(ForwardEqError):
    """Storage amount outside the feasible interval [0, pi0]."""


class NotConcave(ForwardEqError):
    """Second-order conditions fail, the optimizer has no interior maximum."""


class NoRoot(ForwardEqError):
    """A monotone equation has no sign change on the searched bracket."""


class Degenerate(ForwardEqError):
    """The tilted cumulant is affine, every point is stationary or none is."""


class NoConvergence(ForwardEqError):
    """Iterative solver exhausted its iteration budget."""


class NoBracket(ForwardEqError):
    """Bracket expansion never produced a sign change."""


class DegenerateCorrelation(ForwardEqError):
    """|rho| = 1 makes the investors' effective risk aversion vanish."""


class ZeroVariance(ForwardEqError):
    """The terminal spot price is deterministic, hedging demand is ill posed."""


class ZeroSpot(ForwardEqError):
    """Spot price is zero, a ratio against it is undefined."""


class ZeroForward(ForwardEqError):
    """Forward price is zero, the premium fraction is undefined."""


class DegenerateStorageCost(ForwardEqError):
    """Full depreciation (eps >= 1) makes the cost-of-carry relation singular."""


class ConfigError(ForwardEqError):
    """Scenario file failed validation; message carries the field path."""


class EstimatorOverflow(ForwardEqError):
    """Log-sum-exp still exceeded floating-point range (pathological gamma)."""
