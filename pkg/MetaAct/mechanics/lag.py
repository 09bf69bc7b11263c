from dataclasses import dataclass

import numpy as np

from ..utils.exceptions import ConfigError


@dataclass(frozen=True)
class MechParams:
    """Mechanical response settings.

    tau_mech: relaxation time of the lagging branch, s (0 disables lag)
    T_ref: stress-free reference temperature, °C
    lag_fraction: share of the curvature that follows the lagging branch
    """
    tau_mech: float = 40.0
    T_ref: float = 23.0
    lag_fraction: float = 0.6

    def __post_init__(self):
        if not np.isfinite(self.tau_mech) or self.tau_mech < 0:
            raise ConfigError('must be >= 0, got %r' % self.tau_mech, key='mechanics.tau_mech')
        if not np.isfinite(self.T_ref):
            raise ConfigError('must be finite', key='mechanics.T_ref')
        if not 0.0 <= self.lag_fraction <= 1.0:
            raise ConfigError('must be in [0, 1], got %r' % self.lag_fraction, key='mechanics.lag_fraction')


def mech_lag(kappa_prev, kappa_qs, dt, tau_mech):
    """First-order relaxation toward the quasi-static curvature over dt (exact exponential)."""
    if tau_mech == 0:
        return np.array(kappa_qs, dtype=float, copy=True)
    decay = np.exp(-dt / tau_mech)
    return kappa_qs + (np.asarray(kappa_prev, dtype=float) - kappa_qs) * decay


def effective_curvature(kappa_qs, kappa_lag, lag_fraction):
    """Blend of the instantaneous and the lagging branch; the end points return one branch unchanged."""
    if lag_fraction == 1.0:
        return np.asarray(kappa_lag, dtype=float)
    if lag_fraction == 0.0:
        return np.asarray(kappa_qs, dtype=float)
    return (1.0 - lag_fraction) * kappa_qs + lag_fraction * kappa_lag
