"""Two-finger jaw built from two actuator strips facing each other.

Finger A sits at y = -S/2 and finger B at y = +S/2, both clamped at the root
and pointing along +X. `mount` names the actuator face turned toward the
jaw: with 'top_in' the strip's +Z direction points into the jaw, so an
outward (opening) deflection is a negative Z deflection.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..control import LOOPS, step_schedule
from ..engine import final_shape
from ..mechanics import straight_shape, tip_deflection
from ..model import ActuatorSpec
from ..utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

MOUNTS = ('top_in', 'bottom_in')


@dataclass(frozen=True)
class GripperSpec:
    finger: ActuatorSpec
    separation_mm: float = 40.0
    mount_a: str = 'top_in'
    mount_b: str = 'top_in'
    open_loop: str = 'outer'
    close_loop: str = 'inner'
    max_power: float = 0.75
    t_hold: float = 300.0

    def __post_init__(self):
        if not np.isfinite(self.separation_mm) or self.separation_mm <= 0:
            raise ConfigError('must be > 0, got %r' % self.separation_mm, key='gripper.separation_mm')
        for key in ('mount_a', 'mount_b'):
            if getattr(self, key) not in MOUNTS:
                raise ConfigError('must be one of %s' % (MOUNTS,), key='gripper.%s' % key)
        for key in ('open_loop', 'close_loop'):
            if getattr(self, key) not in LOOPS:
                raise ConfigError('must be one of %s' % (LOOPS,), key='gripper.%s' % key)
        if not self.max_power >= 0 or not self.t_hold > 0:
            raise ConfigError('max_power must be >= 0 and t_hold > 0', key='gripper')


@dataclass(frozen=True)
class JawTrajectory:
    min_mm: float
    rest_mm: float
    max_mm: float


def outward_deflection(shape, mount, rest=None):
    """Tip deflection away from the jaw axis, mm."""
    rest = straight_shape(shape.length, len(shape.s) - 1) if rest is None else rest
    dz = tip_deflection(shape, rest)
    return -dz if mount == 'top_in' else dz


def jaw_opening(shape_a, shape_b, spec):
    """Tip-to-tip gap, mm; 0 once the tips meet."""
    opening = (spec.separation_mm + outward_deflection(shape_a, spec.mount_a)
               + outward_deflection(shape_b, spec.mount_b))
    return max(float(opening), 0.0)


def jaw_center(shape_a, shape_b, spec):
    """Lateral offset of the jaw midpoint from the gripper axis, mm (+ toward finger B)."""
    return 0.5 * (outward_deflection(shape_b, spec.mount_b) - outward_deflection(shape_a, spec.mount_a))


def _finger_shape(spec, scenario, loop, power):
    config = scenario.replace(schedule=step_schedule(loop, power, spec.t_hold), policy=None,
                              duration=spec.t_hold, mode='transient',
                              stride=max(1, int(round(spec.t_hold / scenario.thermal.dt))),
                              name='finger_%s' % loop)
    return final_shape(config)


def jaw_range(spec, scenario):
    """Min, rest and max openings with both fingers driven alike.

    `scenario` supplies the thermal/mechanical parameters and ambient; the
    opening and closing loops are held at max_power for t_hold seconds.
    """
    scenario = scenario.replace(spec=spec.finger)
    rest = _finger_shape(spec, scenario, spec.open_loop, 0.0)
    opened = _finger_shape(spec, scenario, spec.open_loop, spec.max_power)
    closed = _finger_shape(spec, scenario, spec.close_loop, spec.max_power)
    trajectory = JawTrajectory(min_mm=jaw_opening(closed, closed, spec),
                               rest_mm=jaw_opening(rest, rest, spec),
                               max_mm=jaw_opening(opened, opened, spec))
    logger.info('jaw opening %.2f / %.2f / %.2f mm (min / rest / max)'
                % (trajectory.min_mm, trajectory.rest_mm, trajectory.max_mm))
    return trajectory


def gripper_from_cfg(grip_cfg, finger):
    return GripperSpec(finger=finger, separation_mm=float(grip_cfg.separation_mm),
                       mount_a=grip_cfg.mount_a, mount_b=grip_cfg.mount_b,
                       open_loop=grip_cfg.open_loop, close_loop=grip_cfg.close_loop,
                       max_power=float(grip_cfg.max_power), t_hold=float(grip_cfg.t_hold))
