from dataclasses import dataclass

import numpy as np

from ..utils.exceptions import ConfigError
from .schedule import LOOPS


@dataclass(frozen=True)
class ForcedReturnPolicy:
    drive_loop: str = 'outer'
    drive_power: float = 0.75
    return_power: float = 0.75
    t_act: float = 300.0
    tol_mm: float = 0.1
    max_return: float = 300.0

    def __post_init__(self):
        if self.drive_loop not in LOOPS:
            raise ConfigError('must be one of %s, got %r' % (LOOPS, self.drive_loop), key='return.drive_loop')
        for key in ('drive_power', 'return_power', 't_act', 'max_return'):
            value = getattr(self, key)
            if not np.isfinite(value) or value < 0:
                raise ConfigError('must be >= 0, got %r' % value, key='return.%s' % key)
        if not self.tol_mm > 0:
            raise ConfigError('must be > 0, got %r' % self.tol_mm, key='return.tol_mm')

    @property
    def return_loop(self):
        return 'inner' if self.drive_loop == 'outer' else 'outer'


def _powers(loop, power):
    return (power, 0.0) if loop == 'outer' else (0.0, power)


def forced_return_step(policy, t, displacement, done=False):
    """Loop powers for the drive-then-return protocol.

    Returns (P_outer, P_inner, done). The return phase ends once the sensed
    displacement (mm) is within tolerance or the return budget is spent; from
    then on everything stays off.
    """
    if done:
        return 0.0, 0.0, True
    if t < policy.t_act:
        return _powers(policy.drive_loop, policy.drive_power) + (False,)
    if abs(displacement) <= policy.tol_mm or t - policy.t_act >= policy.max_return:
        return 0.0, 0.0, True
    return _powers(policy.return_loop, policy.return_power) + (False,)


class ForcedReturnController(object):
    """Holds the latch of one scenario run."""

    def __init__(self, policy):
        self.policy = policy
        self.done = False
        self.t_done = None

    def __call__(self, t, displacement):
        P_outer, P_inner, done = forced_return_step(self.policy, t, displacement, self.done)
        if done and not self.done:
            self.t_done = t
        self.done = done
        return P_outer, P_inner
