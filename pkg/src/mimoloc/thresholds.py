"""Element-wise threshold functions for the competitive (LCA) solvers.

The family maps an internal neuron state u to an output z.  The sparse penalty
these thresholds encode is never evaluated directly: only its gradient enters
any dynamics, and that gradient is identically u - z (see penalty_gradient).

All functions accept scalars or arrays and are vectorized over the input.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

INFINITE = math.inf


@dataclass(frozen=True)
class ThresholdParams:
    """Transition rate eta (> 0 or inf), adjustment fraction delta in [0, 1],
    and threshold level lambda_thr (> 0).

    (inf, 1, L) is the exact soft threshold, (inf, 0, L) the exact hard
    threshold; (10000, 0, 1) is the steep hard-threshold proxy used by the
    l0-flavored solver.
    """

    eta: float
    delta: float
    lambda_thr: float

    def __post_init__(self):
        if not (self.eta > 0):
            raise ConfigError("eta", "must be > 0 (math.inf allowed)")
        if not (0.0 <= self.delta <= 1.0):
            raise ConfigError("delta", "must lie in [0, 1]")
        if not (self.lambda_thr > 0):
            raise ConfigError("lambdaThr", "must be > 0")


SOFT = ThresholdParams(INFINITE, 1.0, 1.0)
HARD_PROXY = ThresholdParams(10000.0, 0.0, 1.0)


def _sigmoid(x):
    # 1/(1+e^-x) computed via exp(-|x|) so neither branch can overflow.
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def soft_threshold(u, lambda_thr):
    """0 inside the closed dead zone |u| <= lambda, else u shrunk by lambda."""
    u = np.asarray(u, dtype=float)
    out = np.where(np.abs(u) <= lambda_thr, 0.0, u - lambda_thr * np.sign(u))
    return float(out) if out.ndim == 0 else out


def hard_threshold(u, lambda_thr):
    """0 inside the closed dead zone |u| <= lambda, else u unchanged.

    Outputs therefore never fall in [-lambda, 0) or (0, lambda].
    """
    u = np.asarray(u, dtype=float)
    out = np.where(np.abs(u) <= lambda_thr, 0.0, u)
    return float(out) if out.ndim == 0 else out


def general_threshold(u, params):
    """sign(u) * (|u| - delta*lambda) * sigmoid(eta * (|u| - lambda)).

    With eta = inf this dispatches to the exact soft (delta = 1) or hard
    (delta = 0) threshold; other delta values use the pointwise limit with the
    boundary |u| = lambda assigned to the dead zone.  At finite eta the
    boundary value is (|u| - delta*lambda)/2, kept as-is.
    """
    lam = params.lambda_thr
    if math.isinf(params.eta):
        if params.delta == 1.0:
            return soft_threshold(u, lam)
        if params.delta == 0.0:
            return hard_threshold(u, lam)
        u = np.asarray(u, dtype=float)
        out = np.where(np.abs(u) <= lam, 0.0, np.sign(u) * (np.abs(u) - params.delta * lam))
        return float(out) if out.ndim == 0 else out
    u = np.asarray(u, dtype=float)
    out = np.sign(u) * (np.abs(u) - params.delta * lam) * _sigmoid(params.eta * (np.abs(u) - lam))
    return float(out) if out.ndim == 0 else out


def penalty_gradient(u, z):
    """Gradient of the implicit sparse penalty, scaled by its threshold: u - z.

    Expects z = general_threshold(u, params) for the active parameters; this
    difference is the only form in which the penalty enters any dynamics.
    """
    return np.asarray(u, dtype=float) - np.asarray(z, dtype=float)


def threshold_jacobian_term(u, params):
    """dz/du of the general threshold, used by the constraint-rank diagnostic.

    Finite eta uses the closed form
        sigmoid(x) + eta*(|u| - delta*lambda) * sigmoid(x)*(1 - sigmoid(x)),
    with x = eta*(|u| - lambda).  For eta = inf the exact soft threshold's
    derivative is the indicator of |u| > lambda.
    """
    lam = params.lambda_thr
    u = np.asarray(u, dtype=float)
    if math.isinf(params.eta):
        out = np.where(np.abs(u) > lam, 1.0, 0.0)
        return float(out) if out.ndim == 0 else out
    s = _sigmoid(params.eta * (np.abs(u) - lam))
    out = s + params.eta * (np.abs(u) - params.delta * lam) * s * (1.0 - s)
    return float(out) if out.ndim == 0 else out
